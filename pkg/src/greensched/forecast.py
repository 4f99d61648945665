"""Day-ahead generation forecast ingestion.

CSV schema: `timestamp,wind_mwh,solar_mwh,total_mwh`, one row per hour,
ISO-8601 timestamps, optional leading `# tz=<IANA name>` comment
(metadata only; timestamps are taken literally). Wind and solar are
summed into a single renewable figure at parse time.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from datetime import date as Date
from datetime import datetime

from .errors import ConflictError, ConsistencyError, DomainError, ParseError
from .scheduling import HOURS_PER_DAY, compute_re_share

CSV_HEADER = "timestamp,wind_mwh,solar_mwh,total_mwh"

# plain integers / decimals only: no sign, no exponent
_NUMBER_RE = re.compile(r"^\d+(\.\d+)?$")

FLAG_ZERO_AGGREGATE = "zero-aggregate-generation"


@dataclass(frozen=True)
class ForecastHour:
    hour: int
    re_gen_mwh: float
    agg_gen_mwh: float


@dataclass(frozen=True)
class ForecastDay:
    date: Date
    hours: tuple  # 24 ForecastHour entries, ordered
    shares: tuple  # derived hourly renewable shares
    quality_flags: tuple  # (hour, issue) annotations
    digest: str


def _parse_number(text: str, column: str, line_no: int) -> float:
    if not _NUMBER_RE.match(text):
        raise ParseError(
            f"line {line_no}: {column} must be a plain non-negative "
            f"decimal, got {text!r}", line=line_no)
    return float(text)


def _build_day(day: Date, by_hour: dict) -> ForecastDay:
    missing = [h for h in range(HOURS_PER_DAY) if h not in by_hour]
    if missing:
        raise ParseError(
            f"incomplete day {day.isoformat()}: missing hours "
            f"{','.join(map(str, missing))}")
    hours = tuple(by_hour[h] for h in range(HOURS_PER_DAY))
    shares = []
    flags = []
    for fh in hours:
        if fh.agg_gen_mwh == 0:
            shares.append(0.0)
            flags.append((fh.hour, FLAG_ZERO_AGGREGATE))
        else:
            shares.append(compute_re_share(fh.re_gen_mwh, fh.agg_gen_mwh))
    digest = _digest_rows(day, hours)
    return ForecastDay(date=day, hours=hours, shares=tuple(shares),
                       quality_flags=tuple(flags), digest=digest)


def parse_forecast_csv(data) -> list:
    """Parse CSV bytes/str into one ForecastDay per complete calendar day.

    Days are returned in date order. Any malformed row, duplicate hour,
    inconsistent generation pair, or incomplete day raises with the
    offending line number or hour; nothing is silently dropped.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from exc
    else:
        text = data

    lines = text.splitlines()
    idx = 0
    if idx < len(lines) and lines[idx].startswith("#"):
        comment = lines[idx].lstrip("#").strip()
        if comment and not comment.startswith("tz="):
            raise ParseError(f"line 1: unrecognized comment {comment!r}", line=1)
        idx += 1
    if idx >= len(lines) or lines[idx].strip() != CSV_HEADER:
        raise ParseError(
            f"line {idx + 1}: expected header {CSV_HEADER!r}", line=idx + 1)
    idx += 1

    days: dict = {}
    for line_no in range(idx + 1, len(lines) + 1):
        raw = lines[line_no - 1]
        if not raw.strip():
            continue
        parts = raw.split(",")
        if len(parts) != 4:
            raise ParseError(
                f"line {line_no}: expected 4 comma-separated fields",
                line=line_no)
        ts_text, wind_text, solar_text, total_text = (p.strip() for p in parts)
        try:
            ts = datetime.fromisoformat(ts_text)
        except ValueError as exc:
            raise ParseError(
                f"line {line_no}: bad timestamp {ts_text!r}",
                line=line_no) from exc
        if ts.minute or ts.second or ts.microsecond:
            raise ParseError(
                f"line {line_no}: timestamps must be on the hour",
                line=line_no)
        wind = _parse_number(wind_text, "wind_mwh", line_no)
        solar = _parse_number(solar_text, "solar_mwh", line_no)
        total = _parse_number(total_text, "total_mwh", line_no)
        # values are quantized to the canonical 6-decimal precision so that
        # serialize -> reparse is exact
        re_gen = round(wind + solar, 6)
        total = round(total, 6)
        if total > 0 and re_gen > total:
            raise ConsistencyError(
                f"hour {ts.hour} of {ts.date().isoformat()}: renewable "
                f"{re_gen:g} exceeds total {total:g}", hour=ts.hour,
                line=line_no)
        by_hour = days.setdefault(ts.date(), {})
        if ts.hour in by_hour:
            raise ConflictError(
                f"line {line_no}: duplicate hour {ts.hour} for "
                f"{ts.date().isoformat()}")
        by_hour[ts.hour] = ForecastHour(hour=ts.hour, re_gen_mwh=re_gen,
                                        agg_gen_mwh=total)

    if not days:
        raise ParseError("no data rows")
    return [_build_day(day, by_hour) for day, by_hour in sorted(days.items())]


def canonical_csv(day: ForecastDay) -> str:
    """Bit-exact serialization used for digests: fixed column order,
    6 fractional digits, newline-separated, renewable total in the wind
    column. Re-parsing yields an equal ForecastDay."""
    rows = [CSV_HEADER]
    for fh in day.hours:
        ts = f"{day.date.isoformat()}T{fh.hour:02d}:00:00"
        rows.append(f"{ts},{fh.re_gen_mwh:.6f},0.000000,{fh.agg_gen_mwh:.6f}")
    return "\n".join(rows) + "\n"


def _digest_rows(day: Date, hours) -> str:
    rows = [CSV_HEADER]
    for fh in hours:
        ts = f"{day.isoformat()}T{fh.hour:02d}:00:00"
        rows.append(f"{ts},{fh.re_gen_mwh:.6f},0.000000,{fh.agg_gen_mwh:.6f}")
    blob = ("\n".join(rows) + "\n").encode()
    return hashlib.sha256(blob).hexdigest()


def forecast_digest(day: ForecastDay) -> str:
    """SHA-256 hex digest of the canonical serialization."""
    return hashlib.sha256(canonical_csv(day).encode()).hexdigest()
