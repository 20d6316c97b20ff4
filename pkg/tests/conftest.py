import json
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data" / "frozen.json"


@pytest.fixture(scope="session")
def frozen():
    """Values produced once by tests/oracle/freeze.py (sympy)."""
    return json.loads(DATA.read_text())


def frac(s) -> Fraction:
    return Fraction(s)


def pytest_terminal_summary(terminalreporter):
    mod = next((m for n, m in list(sys.modules.items()) if n.rsplit(".", 1)[-1] == "test_acceptance"), None)
    lines = mod.summary_lines() if mod is not None else []
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
