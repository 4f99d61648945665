"""Orchestration shared by the HTTP service and the CLI: profile and
forecast stores, ledger wiring, schedule computation, dispatch, and the
engagement metrics. Both front doors call these exact code paths."""

from __future__ import annotations

import json
import os
import tempfile
import time
import uuid
from dataclasses import dataclass
from datetime import date as Date
from datetime import datetime

from .config import ServiceConfig
from .dispatch import (DeviceEndpoint, SimulatedClock, SystemClock,
                      execute_day)
from .errors import (IntegrityError, NotFoundError, ValidationError)
from .forecast import ForecastDay, parse_forecast_csv
from .ledger import (KIND_RECORD_SCHEDULE, KIND_REGISTER_DEVICE, Ledger,
                     Member, Transaction)
from .scheduling import (BuildingProfile, DailySchedule, SchedulerConfig,
                         TemperatureReading, build_schedule,
                         clamp_temperature, compute_share_increase)
from .thermal import derive_blc


@dataclass(frozen=True)
class MetricsReport:
    building_id: str
    date: str
    slots: tuple  # 24 booleans, operational status
    prev_day_re_share: float | None
    re_share_increase: float

    def to_doc(self) -> dict:
        return {"building_id": self.building_id, "date": self.date,
                "slots": list(self.slots),
                "prev_day_re_share": self.prev_day_re_share,
                "re_share_increase": self.re_share_increase}


def _atomic_write_json(path: str, doc):
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=1)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class JsonStore:
    """Whole-file document store with atomic replace (last writer wins)."""

    def __init__(self, path: str):
        self.path = path
        self._docs = {}
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                self._docs = json.load(fh)

    def get(self, key):
        return self._docs.get(key)

    def put(self, key, value):
        self._docs[key] = value
        _atomic_write_json(self.path, self._docs)

    def keys(self):
        return list(self._docs)


class AppCore:
    def __init__(self, cfg: ServiceConfig, clock=None):
        self.cfg = cfg
        os.makedirs(cfg.data_dir, exist_ok=True)
        self.member = Member(cfg.member_id, cfg.member_key.encode())
        self.ledger = Ledger(cfg.ledger_path, [self.member],
                             block_interval_ms=cfg.block_interval_ms)
        self.buildings = JsonStore(os.path.join(cfg.data_dir, "buildings.json"))
        self.forecasts = JsonStore(os.path.join(cfg.data_dir, "forecasts.json"))
        self.clock = clock or SystemClock()

    # -- buildings ------------------------------------------------------

    def register_building(self, attrs: dict) -> BuildingProfile:
        try:
            year = int(attrs["construction_year"])
            area = float(attrs["living_space_m2"])
            desired = float(attrs.get("desired_temp_c",
                                      self.cfg.scheduler.target_temp_c))
            basement = bool(attrs["has_basement"])
            roof = bool(attrs["roof_insulated"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad building attributes: {exc}") from exc
        blc = derive_blc(year, area, basement, roof)
        building_id = str(attrs.get("id") or uuid.uuid4().hex[:12])
        profile = BuildingProfile(
            id=building_id, desired_temp_c=desired, construction_year=year,
            living_space_m2=area, has_basement=basement, roof_insulated=roof,
            blc=blc)
        self.buildings.put(building_id, {
            "id": building_id, "desired_temp_c": desired,
            "construction_year": year, "living_space_m2": area,
            "has_basement": basement, "roof_insulated": roof, "blc": blc})
        return profile

    def get_building(self, building_id: str) -> BuildingProfile:
        doc = self.buildings.get(building_id)
        if doc is None:
            raise NotFoundError(f"unknown building {building_id!r}")
        return BuildingProfile(**doc)

    # -- forecasts ------------------------------------------------------

    def ingest_forecast(self, csv_data) -> list:
        """Store each complete day keyed by date; returns (date, digest)."""
        from .forecast import canonical_csv
        days = parse_forecast_csv(csv_data)
        out = []
        for day in days:
            self.forecasts.put(day.date.isoformat(), canonical_csv(day))
            out.append((day.date.isoformat(), day.digest))
        return out

    def get_forecast(self, date: str) -> ForecastDay:
        csv_text = self.forecasts.get(date)
        if csv_text is None:
            raise NotFoundError(f"no forecast ingested for {date}")
        return parse_forecast_csv(csv_text)[0]

    # -- devices --------------------------------------------------------

    def register_device(self, doc: dict) -> str:
        try:
            payload = {
                "device_id": str(doc.get("device_id") or uuid.uuid4().hex[:12]),
                "building_id": str(doc["building_id"]),
                "base_url": str(doc["base_url"]).rstrip("/"),
                "event_on": str(doc.get("event_on", "ehp_on")),
                "event_off": str(doc.get("event_off", "ehp_off")),
                "key": str(doc["key"]),
            }
        except KeyError as exc:
            raise ValidationError(f"missing device field: {exc}") from exc
        self.get_building(payload["building_id"])
        tx = Transaction.create(self.member, KIND_REGISTER_DEVICE, payload,
                                self.ledger.head_hash)
        self.ledger.submit(tx)
        return payload["device_id"]

    # -- scheduling -----------------------------------------------------

    def create_schedule(self, building_id: str, date: str,
                        current_temp_c: float,
                        include_baseline: bool = False):
        """Compute, record on the ledger, and return the day's schedule.

        Returns (DailySchedule, extras dict). With include_baseline the
        extras carry the unscheduled all-day mean share for comparison.
        """
        profile = self.get_building(building_id)
        forecast = self.get_forecast(date)
        temp = TemperatureReading(clamp_temperature(current_temp_c),
                                  observed_at=datetime.now())
        schedule = build_schedule(profile, temp, forecast, self.cfg.scheduler)

        prev_digest = ""
        prev_date = _prev_date(date)
        try:
            prev_digest = self.ledger.schedule_record(
                building_id, prev_date).get("schedule_digest", "")
        except NotFoundError:
            pass

        cfg = self.cfg.scheduler
        payload = {
            "building_id": building_id,
            "date": date,
            "slots": schedule.slot_string(),
            "ehp_hours": schedule.ehp_hours,
            "forecast_digest": schedule.forecast_digest,
            "client_ts": time.time_ns(),
            "schedule_digest": schedule.digest(),
            "prev_schedule_digest": prev_digest,
            "config": {"alpha": f"{cfg.alpha:.6f}", "beta": f"{cfg.beta:.6f}",
                       "target_temp_c": f"{cfg.target_temp_c:.6f}",
                       "min_ehp_hours": cfg.min_ehp_hours,
                       "max_ehp_hours": cfg.max_ehp_hours},
        }
        tx = Transaction.create(self.member, KIND_RECORD_SCHEDULE, payload,
                                self.ledger.head_hash)
        receipt = self.ledger.submit(tx)

        extras = {"ledger_height": receipt.height}
        if schedule.ehp_hours:
            extras["re_share_increase"] = compute_share_increase(
                forecast.shares, schedule.slots)
        if include_baseline:
            extras["baseline_share"] = sum(forecast.shares) / 24.0
            if schedule.ehp_hours:
                selected = [s for s, on in zip(forecast.shares, schedule.slots)
                            if on]
                extras["scheduled_share"] = sum(selected) / len(selected)
        return schedule, extras

    # -- dispatch -------------------------------------------------------

    def execute_schedule(self, building_id: str, date: str,
                         simulate: bool = False):
        record = self.ledger.schedule_record(building_id, date)
        desc = self.ledger.device_for_building(building_id)
        endpoint = DeviceEndpoint(
            device_id=desc["device_id"], building_id=desc["building_id"],
            base_url=desc["base_url"], event_on=desc["event_on"],
            event_off=desc["event_off"], key=desc["key"])
        forecast = self.get_forecast(date)
        if record["forecast_digest"] != forecast.digest:
            raise IntegrityError(
                "recorded schedule was computed from different forecast data")
        cfgdoc = record["config"]
        schedule = DailySchedule(
            building_id=building_id, date=Date.fromisoformat(date),
            slots=tuple(c == "#" for c in record["slots"]),
            ehp_hours=record["ehp_hours"],
            config_snapshot=SchedulerConfig(
                alpha=float(cfgdoc["alpha"]), beta=float(cfgdoc["beta"]),
                target_temp_c=float(cfgdoc["target_temp_c"]),
                min_ehp_hours=cfgdoc["min_ehp_hours"],
                max_ehp_hours=cfgdoc["max_ehp_hours"]),
            forecast_digest=record["forecast_digest"])
        clock = SimulatedClock() if simulate else self.clock
        return execute_day(schedule, endpoint, self.ledger, self.member,
                           clock=clock)

    # -- metrics --------------------------------------------------------

    def compute_metrics(self, building_id: str, date: str) -> MetricsReport:
        record, _acks = self.ledger.query_metrics(building_id, date)
        forecast = self.get_forecast(date)
        if record["forecast_digest"] != forecast.digest:
            raise IntegrityError(
                "schedule/forecast digest mismatch: stored forecast data "
                "does not match what was scheduled against")
        slots = tuple(c == "#" for c in record["slots"])
        increase = compute_share_increase(forecast.shares, slots)

        prev_share = None
        prev_date = _prev_date(date)
        try:
            prev_record = self.ledger.schedule_record(building_id, prev_date)
            prev_forecast = self.get_forecast(prev_date)
            prev_on = [s for s, c in zip(prev_forecast.shares,
                                         prev_record["slots"]) if c == "#"]
            if prev_on:
                prev_share = sum(prev_on) / len(prev_on)
        except NotFoundError:
            pass

        return MetricsReport(building_id=building_id, date=date, slots=slots,
                             prev_day_re_share=prev_share,
                             re_share_increase=increase)

    # -- ledger views ---------------------------------------------------

    def verify_ledger(self):
        return self.ledger.verify_chain()

    def ledger_blocks(self, start=0, end=None):
        return self.ledger.blocks(start, end)


def _prev_date(date: str) -> str:
    d = Date.fromisoformat(date)
    return Date.fromordinal(d.toordinal() - 1).isoformat()


def compare_scenarios(csv_paths, cfg: SchedulerConfig, temp_c: float,
                      blc: float):
    """Baseline vs scheduled share for each forecast day in each file.

    Used by the CLI scenario table; reuses the exact scheduling path.
    """
    from .scheduling import compute_ehp_hours, select_on_hours

    temp = TemperatureReading(clamp_temperature(temp_c),
                              observed_at=datetime.now())
    k = compute_ehp_hours(temp, blc, cfg)
    rows = []
    for path in csv_paths:
        with open(path, "rb") as fh:
            days = parse_forecast_csv(fh.read())
        for day in days:
            on = select_on_hours(day.shares, k)
            baseline = sum(day.shares) / 24.0
            selected = [s for s, flag in zip(day.shares, on) if flag]
            scheduled = sum(selected) / len(selected) if selected else 0.0
            increase = (scheduled / baseline - 1.0) if baseline > 0 else 0.0
            rows.append({
                "scenario": os.path.basename(path),
                "date": day.date.isoformat(),
                "ehp_hours": k,
                "baseline_share": baseline,
                "scheduled_share": scheduled,
                "increase": increase,
            })
    return rows
