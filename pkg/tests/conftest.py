import os
from datetime import datetime

import pytest

from greensched.config import ServiceConfig
from greensched.core import AppCore
from greensched.scheduling import SchedulerConfig, TemperatureReading

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
SCENARIO_DIR = os.path.join(FIXTURE_DIR, "scenarios")


def fixture_path(name):
    return os.path.join(FIXTURE_DIR, name)


def read_fixture(name):
    with open(fixture_path(name), "rb") as fh:
        return fh.read()


def reading(temp_c):
    return TemperatureReading(temp_c, observed_at=datetime(2026, 3, 9, 6))


@pytest.fixture
def cfg():
    return SchedulerConfig(alpha=0.5, beta=0.5, target_temp_c=20.0,
                           min_ehp_hours=2, max_ehp_hours=12)


@pytest.fixture
def app(tmp_path):
    svc = ServiceConfig(data_dir=str(tmp_path / "data"))
    return AppCore(svc)
