import numpy as np
import pytest

from helpers import ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)


@pytest.fixture
def rng(request):
    # stable per-test seed
    seed = sum(ord(ch) for ch in request.node.name)
    return np.random.default_rng(seed)
