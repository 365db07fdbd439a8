import pytest
from hypothesis import HealthCheck, settings

from semichar.families import parse_family

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_cache: dict = {}


def family(spec: str):
    """Shared cache of built groups; tables are immutable so sharing is safe."""
    if spec not in _cache:
        _cache[spec] = parse_family(spec)
    return _cache[spec]


@pytest.fixture
def fam():
    return family


# acceptance criteria record one line each; the summary hook prints them after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
