import numpy as np
import pytest

from vdwmedium.materials import LorentzTerm, ResponseModel


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def magnetodielectric():
    return ResponseModel((LorentzTerm(1.0, 1.2, 0.1),), (LorentzTerm(0.9, 0.6, 0.2),))


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""
    def record(number, name, ok, detail):
        ACCEPTANCE_LINES.append((number, f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {name}: {detail}"))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
