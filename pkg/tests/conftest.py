import numpy as np
import pytest

from conncorr.states import CanonicalParams, canonical_state, density, from_amplitudes

S2 = 1 / np.sqrt(2)


@pytest.fixture
def ghz():
    return CanonicalParams(S2, 0, 0, 0, S2)


@pytest.fixture
def bell0():
    # (|00> + |11>)|0> / sqrt(2)
    return CanonicalParams(S2, 0, 0, S2, 0)


@pytest.fixture
def product():
    return CanonicalParams(1, 0, 0, 0, 0)


@pytest.fixture
def bell_rho():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return np.outer(psi, psi.conj()).astype(complex)


def rho3(p):
    return density(canonical_state(p))


def w_state():
    return from_amplitudes([0, 1, 1, 0, 1, 0, 0, 0])


# acceptance verdicts: (criterion, part, ok, detail), printed after the run
VERDICTS = []


@pytest.fixture
def verdict():
    def record(criterion, part, ok, detail=""):
        VERDICTS.append((criterion, part, bool(ok), detail))
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted({v[0] for v in VERDICTS}):
        parts = [v for v in VERDICTS if v[0] == crit]
        ok = all(v[2] for v in parts)
        tr.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}")
        for _, part, pok, detail in parts:
            tr.write_line(f"    {'pass' if pok else 'FAIL'}  {part}: {detail}")
