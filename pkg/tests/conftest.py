"""Shared fixtures; representations are built once per session."""
import sys

import pytest

from yso5.rtt_engine import build_lax, build_monodromy
from yso5.so5_rep import build_spinor_generators, build_vector_generators


@pytest.fixture(scope="session")
def spinor():
    return build_spinor_generators()


@pytest.fixture(scope="session")
def vector():
    return build_vector_generators()


@pytest.fixture(scope="session")
def lax():
    return build_lax(1, 0)


@pytest.fixture(scope="session")
def mono():
    return build_monodromy(1, (0, 1))



def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion that ran."""
    lines = []
    for name, mod in list(sys.modules.items()):
        if name.rsplit(".", 1)[-1] == "test_acceptance":
            lines = getattr(mod, "ACCEPTANCE_LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
