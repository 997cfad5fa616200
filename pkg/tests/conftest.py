import math
import sys

import numpy as np
import pytest

from normedvol.harness import make_rng

# pinned reference constants (derived by hand, see test_regression)
PINNED = {
    "ht_simplex_symmetral_3": 8 / (3 * math.pi),   # 0.848826363157...
    "mass_plane_oracle_10": 10 * math.sin(math.pi / 10),
    "mass_plane_oracle_6": 3.0,
}


@pytest.fixture
def pinned():
    return dict(PINNED)


@pytest.fixture
def rng():
    return make_rng(12345)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num][1])
