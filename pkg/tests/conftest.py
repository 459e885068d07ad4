import pytest
from hypothesis import HealthCheck, settings

from toricurves import FIXTURE_NAMES, fixture_fan

settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def fans():
    return {name: fixture_fan(name) for name in FIXTURE_NAMES}


@pytest.fixture(scope="session")
def p1(fans):
    return fans["p1"]


@pytest.fixture(scope="session")
def p2(fans):
    return fans["p2"]


@pytest.fixture(scope="session")
def p3(fans):
    return fans["p3"]


@pytest.fixture(scope="session")
def p1xp1(fans):
    return fans["p1xp1"]


@pytest.fixture(scope="session")
def bl1p2(fans):
    return fans["bl1p2"]


@pytest.fixture(scope="session")
def dp6(fans):
    return fans["dp6"]
