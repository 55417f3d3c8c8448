import pytest

from dirmod import canonical_antenna, synthesize_pattern


@pytest.fixture(scope="session")
def canonical():
    return canonical_antenna()


@pytest.fixture(scope="session")
def pattern(canonical):
    return synthesize_pattern(canonical, step_deg=1.0)
