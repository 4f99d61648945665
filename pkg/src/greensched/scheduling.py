"""Core scheduling heuristics: daily heat pump operating hours from
temperature and building retention, top-k hour selection by renewable
share, and the renewable-utilization improvement metric.

Everything here is a pure function over immutable inputs.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from datetime import date as Date
from datetime import datetime

from .errors import ConfigError, DomainError

HOURS_PER_DAY = 24

TEMP_MIN_C = 0.0
TEMP_MAX_C = 40.0


@dataclass(frozen=True)
class SchedulerConfig:
    """Weights and bounds for the operating-hour heuristic.

    alpha weighs the temperature-gap term, beta the building-retention
    term; both live in [0,1] and cannot both be zero.
    """

    alpha: float = 0.5
    beta: float = 0.5
    target_temp_c: float = 20.0
    min_ehp_hours: int = 2
    max_ehp_hours: int = 12

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0):
            raise ConfigError("alpha and beta must lie in [0,1]")
        if self.alpha + self.beta == 0.0:
            raise ConfigError("alpha + beta must be positive")
        if self.target_temp_c <= 0.0:
            raise ConfigError("target_temp_c must be positive")
        for name in ("min_ehp_hours", "max_ehp_hours"):
            v = getattr(self, name)
            if not isinstance(v, int) or not (0 <= v <= HOURS_PER_DAY):
                raise ConfigError(f"{name} must be an integer in 0..24")
        if self.min_ehp_hours > self.max_ehp_hours:
            raise ConfigError("min_ehp_hours must not exceed max_ehp_hours")


@dataclass(frozen=True)
class BuildingProfile:
    id: str
    desired_temp_c: float
    construction_year: int
    living_space_m2: float
    has_basement: bool
    roof_insulated: bool
    blc: float  # normalized retention coefficient, higher = better

    def __post_init__(self):
        if not (0.0 <= self.blc <= 1.0):
            raise DomainError("blc must lie in [0,1]")
        if self.living_space_m2 <= 0:
            raise DomainError("living_space_m2 must be positive")


def clamp_temperature(temp_c: float) -> float:
    """Clamp a raw reading into the supported [0,40] degC range.

    Ingestion boundaries call this; TemperatureReading itself rejects
    out-of-range values.
    """
    return min(TEMP_MAX_C, max(TEMP_MIN_C, float(temp_c)))


@dataclass(frozen=True)
class TemperatureReading:
    temp_c: float
    observed_at: datetime

    def __post_init__(self):
        if not (TEMP_MIN_C <= self.temp_c <= TEMP_MAX_C):
            raise DomainError("temp_c must lie in [0,40]; clamp at ingestion")


@dataclass(frozen=True)
class DailySchedule:
    building_id: str
    date: Date
    slots: tuple  # 24 booleans, index = hour
    ehp_hours: int
    config_snapshot: SchedulerConfig
    forecast_digest: str

    def __post_init__(self):
        if len(self.slots) != HOURS_PER_DAY:
            raise DomainError("slots must have exactly 24 entries")
        if self.ehp_hours != sum(1 for s in self.slots if s):
            raise DomainError("ehp_hours must equal the number of true slots")
        cfg = self.config_snapshot
        if not (cfg.min_ehp_hours <= self.ehp_hours <= cfg.max_ehp_hours):
            raise DomainError("ehp_hours outside configured bounds")

    def slot_string(self) -> str:
        """Render as 24 chars, '#' for on and '.' for off."""
        return "".join("#" if s else "." for s in self.slots)

    def digest(self) -> str:
        """SHA-256 over the canonical JSON form; binds schedule to inputs."""
        cfg = self.config_snapshot
        doc = {
            "building_id": self.building_id,
            "date": self.date.isoformat(),
            "slots": self.slot_string(),
            "ehp_hours": self.ehp_hours,
            "config": {
                "alpha": f"{cfg.alpha:.6f}",
                "beta": f"{cfg.beta:.6f}",
                "target_temp_c": f"{cfg.target_temp_c:.6f}",
                "min_ehp_hours": cfg.min_ehp_hours,
                "max_ehp_hours": cfg.max_ehp_hours,
            },
            "forecast_digest": self.forecast_digest,
        }
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def compute_ehp_hours(temp: TemperatureReading, blc: float,
                      cfg: SchedulerConfig) -> int:
    """Estimate daily operating hours from the temperature gap and the
    building's retention coefficient.

    hours = max(min, ceil(max * (a*|T-target|/target + b*(1-blc)) / (a+b))),
    clamped to max. Non-decreasing in |T-target|, non-increasing in blc.
    """
    if not (0.0 <= blc <= 1.0):
        raise DomainError("blc must lie in [0,1]")
    gap = abs(temp.temp_c - cfg.target_temp_c) / cfg.target_temp_c
    weighted = (cfg.alpha * gap + cfg.beta * (1.0 - blc)) / (cfg.alpha + cfg.beta)
    hours = max(cfg.min_ehp_hours, math.ceil(cfg.max_ehp_hours * weighted))
    return min(hours, cfg.max_ehp_hours)


def compute_re_share(re_gen_mwh: float, agg_gen_mwh: float) -> float:
    """Hourly renewable fraction of total generation."""
    if agg_gen_mwh <= 0:
        raise DomainError("aggregate generation must be positive")
    if re_gen_mwh < 0:
        raise DomainError("renewable generation must be non-negative")
    if re_gen_mwh > agg_gen_mwh:
        raise DomainError("renewable generation exceeds aggregate generation")
    return re_gen_mwh / agg_gen_mwh


def select_on_hours(shares, ehp_hours: int):
    """Pick the ehp_hours hours with the highest shares; ties go to the
    earlier hour. Returns a 24-tuple of booleans."""
    if len(shares) != HOURS_PER_DAY:
        raise DomainError("shares must have exactly 24 entries")
    if not (0 <= ehp_hours <= HOURS_PER_DAY):
        raise DomainError("ehp_hours must lie in 0..24")
    ranked = sorted(range(HOURS_PER_DAY), key=lambda i: (-shares[i], i))
    chosen = set(ranked[:ehp_hours])
    return tuple(i in chosen for i in range(HOURS_PER_DAY))


def compute_share_increase(shares, on) -> float:
    """Relative gain of the mean share over operated hours versus the
    all-day mean. Zero for flat profiles; >= 0 for top-k selections."""
    if len(shares) != HOURS_PER_DAY or len(on) != HOURS_PER_DAY:
        raise DomainError("vectors must have exactly 24 entries")
    selected = [s for s, flag in zip(shares, on) if flag]
    if not selected:
        raise DomainError("at least one operated hour required")
    overall_mean = sum(shares) / HOURS_PER_DAY
    if overall_mean == 0:
        raise DomainError("no-renewables day: improvement undefined")
    return (sum(selected) / len(selected)) / overall_mean - 1.0


def build_schedule(profile: BuildingProfile, temp: TemperatureReading,
                   forecast, cfg: SchedulerConfig) -> DailySchedule:
    """Compose hour-count estimation with top-k hour selection over the
    day's forecast shares."""
    hours = compute_ehp_hours(temp, profile.blc, cfg)
    slots = select_on_hours(forecast.shares, hours)
    return DailySchedule(
        building_id=profile.id,
        date=forecast.date,
        slots=slots,
        ehp_hours=hours,
        config_snapshot=cfg,
        forecast_digest=forecast.digest,
    )
