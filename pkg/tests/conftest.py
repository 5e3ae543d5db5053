import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hitset import Chain, three_state_tight  # noqa: E402

ACCEPTANCE = {}


@pytest.fixture
def sym2():
    return Chain([[0.5, 0.5], [0.5, 0.5]])


@pytest.fixture
def tight():
    return three_state_tight(0.25, 0.05)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
