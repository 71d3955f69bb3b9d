import pytest
from hypothesis import HealthCheck, settings

from _factories import base_params, base_premia

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def params():
    return base_params()


@pytest.fixture
def premia():
    return base_premia()
