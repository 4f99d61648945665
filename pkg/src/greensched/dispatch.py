"""Executes a daily schedule against a device by firing IFTTT-shaped
webhooks at slot transitions, with bounded retries, and records every
outcome (including failures) as a usage transaction on the ledger."""

from __future__ import annotations

import time
from dataclasses import dataclass

import requests

from .errors import AuthorizationError
from .ledger import KIND_RECORD_USAGE, Ledger, Member, Transaction
from .scheduling import DailySchedule

ON = "ON"
OFF = "OFF"

REQUEST_TIMEOUT_S = 5.0
MAX_RETRIES = 3
BACKOFF_S = (1.0, 2.0, 4.0)


@dataclass(frozen=True)
class DeviceEndpoint:
    device_id: str
    building_id: str
    base_url: str
    event_on: str
    event_off: str
    key: str

    def trigger_url(self, action: str) -> str:
        event = self.event_on if action == ON else self.event_off
        return f"{self.base_url}/trigger/{event}/with/key/{self.key}"


@dataclass(frozen=True)
class DispatchRecord:
    device_id: str
    date: str
    hour: int
    action: str
    attempt_count: int
    outcome: str  # Acked | Failed
    latency_ms: int


class SystemClock:
    """Wall clock; waits for real hour boundaries."""

    def now(self):
        return time.time()

    def sleep(self, seconds):
        time.sleep(seconds)

    def wait_until_hour(self, hour):
        lt = time.localtime()
        current = lt.tm_hour + lt.tm_min / 60 + lt.tm_sec / 3600
        if current < hour:
            time.sleep((hour - current) * 3600)


class SimulatedClock:
    """Deterministic clock for tests: sleeps advance virtual time only."""

    def __init__(self, start: float = 0.0):
        self.t = start
        self.sleeps = []

    def now(self):
        return self.t

    def sleep(self, seconds):
        self.sleeps.append(seconds)
        self.t += seconds

    def wait_until_hour(self, hour):
        self.t = hour * 3600.0


def plan_transitions(schedule: DailySchedule):
    """Extract (hour, action) events from the slot vector.

    The device is off before hour 0; a trailing OFF at hour 24 closes a
    run that ends at slot 23. One ON per contiguous run of true slots.
    """
    events = []
    prev = False
    for hour, slot in enumerate(schedule.slots):
        if slot and not prev:
            events.append((hour, ON))
        elif prev and not slot:
            events.append((hour, OFF))
        prev = slot
    if prev:
        events.append((24, OFF))
    return events


def replay_transitions(events):
    """Inverse of plan_transitions: rebuild the 24-slot vector."""
    slots = [False] * 24
    state = False
    pos = 0
    for hour, action in events:
        for h in range(pos, min(hour, 24)):
            slots[h] = state
        state = action == ON
        pos = min(hour, 24)
    for h in range(pos, 24):
        slots[h] = state
    return tuple(slots)


def execute_day(schedule: DailySchedule, endpoint: DeviceEndpoint,
                ledger: Ledger, member: Member, clock=None,
                session=None) -> list:
    """Fire the schedule's transitions as webhook POSTs.

    Each transition gets up to 1 + MAX_RETRIES attempts with exponential
    backoff; the outcome is always recorded on the ledger. A failed
    transition does not abort the rest of the day.
    """
    registered = {d["device_id"] for d in ledger.state.devices.values()}
    if endpoint.device_id not in registered:
        raise AuthorizationError(
            f"device {endpoint.device_id!r} is not registered on the ledger")

    clock = clock or SystemClock()
    post = (session or requests).post
    date_str = schedule.date.isoformat()
    records = []
    for hour, action in plan_transitions(schedule):
        clock.wait_until_hour(hour)
        body = {"value1": schedule.building_id, "value2": date_str,
                "value3": hour}
        headers = {"X-Idempotency-Key":
                   f"{endpoint.device_id}|{date_str}|{hour:02d}|{action}"}
        url = endpoint.trigger_url(action)

        started = clock.now()
        outcome = "Failed"
        attempts = 0
        for attempt in range(1 + MAX_RETRIES):
            attempts = attempt + 1
            try:
                resp = post(url, json=body, headers=headers,
                            timeout=REQUEST_TIMEOUT_S)
                ok = 200 <= resp.status_code < 300
            except requests.RequestException:
                ok = False
            if ok:
                outcome = "Acked"
                break
            if attempt < MAX_RETRIES:
                clock.sleep(BACKOFF_S[attempt])
        latency_ms = int((clock.now() - started) * 1000)

        record = DispatchRecord(device_id=endpoint.device_id, date=date_str,
                                hour=hour, action=action,
                                attempt_count=attempts, outcome=outcome,
                                latency_ms=latency_ms)
        records.append(record)
        tx = Transaction.create(member, KIND_RECORD_USAGE, {
            "building_id": schedule.building_id,
            "date": date_str,
            "hour": hour,
            "action": action,
            "outcome": outcome,
            "attempt_count": attempts,
            "device_id": endpoint.device_id,
        }, ledger.head_hash)
        ledger.submit(tx)
    return records
