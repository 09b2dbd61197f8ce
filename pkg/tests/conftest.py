from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from vinebuckle import BodySpec, DeviceSpec

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def body() -> BodySpec:
    return BodySpec()


@pytest.fixture
def device() -> DeviceSpec:
    return DeviceSpec()


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR
