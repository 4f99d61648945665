"""Service configuration: key=value file plus GLS_-prefixed environment
overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import ConfigError
from .scheduling import SchedulerConfig

ENV_PREFIX = "GLS_"

DEFAULT_MEMBER_ID = "psb-operator"
DEFAULT_MEMBER_KEY = "dev-member-key"


@dataclass
class ServiceConfig:
    scheduler: SchedulerConfig = field(default_factory=SchedulerConfig)
    data_dir: str = "./data"
    ledger_path: str = ""  # defaults to <data_dir>/ledger.psb
    member_id: str = DEFAULT_MEMBER_ID
    member_key: str = DEFAULT_MEMBER_KEY
    listen_port: int = 8420
    block_interval_ms: int = 0

    def __post_init__(self):
        if not self.ledger_path:
            self.ledger_path = os.path.join(self.data_dir, "ledger.psb")


_FLOAT_KEYS = {"alpha", "beta", "target_temp_c"}
_INT_KEYS = {"min_ehp_hours", "max_ehp_hours", "listen_port",
             "block_interval_ms"}
_STR_KEYS = {"data_dir", "ledger_path", "member_id", "member_key"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS


def _parse_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{line_no}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip().strip('"')
    return values


def load_config(path: str | None = None, env: dict | None = None) -> ServiceConfig:
    """Defaults <- config file <- GLS_* environment variables."""
    env = os.environ if env is None else env
    values = _parse_file(path) if path else {}
    for key in _ALL_KEYS:
        env_val = env.get(ENV_PREFIX + key.upper())
        if env_val is not None:
            values[key] = env_val

    unknown = set(values) - _ALL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    def take(key, cast, default):
        if key not in values:
            return default
        try:
            return cast(values[key])
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {values[key]!r}") from exc

    scheduler = SchedulerConfig(
        alpha=take("alpha", float, 0.5),
        beta=take("beta", float, 0.5),
        target_temp_c=take("target_temp_c", float, 20.0),
        min_ehp_hours=take("min_ehp_hours", int, 2),
        max_ehp_hours=take("max_ehp_hours", int, 12),
    )
    return ServiceConfig(
        scheduler=scheduler,
        data_dir=take("data_dir", str, "./data"),
        ledger_path=take("ledger_path", str, ""),
        member_id=take("member_id", str, DEFAULT_MEMBER_ID),
        member_key=take("member_key", str, DEFAULT_MEMBER_KEY),
        listen_port=take("listen_port", int, 8420),
        block_interval_ms=take("block_interval_ms", int, 0),
    )
