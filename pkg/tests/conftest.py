"""Shared fixtures plus the acceptance report: each numbered criterion in
test_acceptance.py registers its outcome here and the summary prints one
PASS/FAIL/SKIP line per criterion at the end of the run."""

import numpy as np
import pytest

_ACCEPTANCE = {}


def record_acceptance(number, label, status, detail=""):
    _ACCEPTANCE[number] = (label, status, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        label, status, detail = _ACCEPTANCE[number]
        line = f"ACCEPTANCE {number} [{label}]: {status}"
        if detail:
            line += f" ({detail})"
        tr.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
