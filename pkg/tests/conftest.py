from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from pytest_factoryboy import register

from .factories import DdfSpaceFactory, LevelSpaceFactory, MetricSpaceFactory

settings.register_profile(
    "probmet",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("probmet")

register(MetricSpaceFactory)
register(LevelSpaceFactory)
register(DdfSpaceFactory)


@pytest.fixture
def fixtures_dir():
    return Path(__file__).parent / "cli" / "fixtures"
