"""Building retention coefficient from operator-entered attributes, and
the normalized hourly demand profile (heating / lighting / appliances)
used for display and ledger context. The scheduler itself consumes only
the retention coefficient, not the demand profile."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date
from datetime import datetime

from . import tables
from .errors import DomainError
from .scheduling import HOURS_PER_DAY, BuildingProfile, TemperatureReading


@dataclass(frozen=True)
class DemandProfile:
    building_id: str
    date: Date
    values: tuple  # 24 normalized totals in [0,1]
    heating: tuple
    lighting: tuple
    appliances: tuple


def derive_blc(construction_year: int, living_space_m2: float,
               has_basement: bool, roof_insulated: bool) -> float:
    """Map building attributes to a [0,1] retention coefficient.

    Year-band base plus upgrade bonuses minus a large-floor-area
    penalty, clamped to [0,1]. Higher = better retention.
    """
    current_year = datetime.now().year
    if not (tables.EARLIEST_CONSTRUCTION_YEAR <= construction_year <= current_year):
        raise DomainError(
            f"construction_year must lie in "
            f"[{tables.EARLIEST_CONSTRUCTION_YEAR}, {current_year}]")
    if living_space_m2 <= 0:
        raise DomainError("living_space_m2 must be positive")

    base = None
    for upper, coeff in tables.YEAR_BAND_BLC:
        if upper is None or construction_year < upper:
            base = coeff
            break
    blc = base
    if roof_insulated:
        blc += tables.ROOF_INSULATION_BONUS
    if has_basement:
        blc += tables.BASEMENT_BONUS
    if living_space_m2 > tables.LARGE_BUILDING_THRESHOLD_M2:
        blc -= tables.LARGE_BUILDING_PENALTY
    return min(1.0, max(0.0, blc))


def predict_demand(profile: BuildingProfile, temp: TemperatureReading,
                   date: Date) -> DemandProfile:
    """Predict the normalized 24-hour consumption profile.

    Heating per hour scales the occupancy weight by the temperature gap
    and the building's heat loss (1 - blc); lighting and appliances are
    fixed office-hour curves. The whole profile is rescaled so the daily
    maximum does not exceed 1.
    """
    target = profile.desired_temp_c
    if target <= 0:
        raise DomainError("desired_temp_c must be positive")
    gap = abs(temp.temp_c - target) / target
    loss = 1.0 - profile.blc

    heating = [w * gap * loss for w in tables.HEATING_OCCUPANCY]
    lighting = list(tables.LIGHTING_CURVE)
    appliances = list(tables.APPLIANCE_CURVE)
    totals = [h + l + a for h, l, a in zip(heating, lighting, appliances)]
    peak = max(totals)
    if peak > 1.0:
        scale = 1.0 / peak
        heating = [v * scale for v in heating]
        lighting = [v * scale for v in lighting]
        appliances = [v * scale for v in appliances]
        totals = [h + l + a for h, l, a in zip(heating, lighting, appliances)]

    assert len(totals) == HOURS_PER_DAY
    return DemandProfile(
        building_id=profile.id,
        date=date,
        values=tuple(totals),
        heating=tuple(heating),
        lighting=tuple(lighting),
        appliances=tuple(appliances),
    )
