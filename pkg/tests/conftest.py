import numpy as np
import pytest

from wigmarg.states import natural_grid


@pytest.fixture(params=[0.5, 1.0, 2.0], ids=lambda h: f"hbar{h}")
def hbar(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def grid64(hbar):
    return natural_grid(1, 64, hbar)


@pytest.fixture
def grid32(hbar):
    return natural_grid(1, 32, hbar)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
