import math

import numpy as np
import pytest

from s3theta.algebra import DeformationContext

GOLDEN = (math.sqrt(5) - 1) / 2


@pytest.fixture
def ctx():
    return DeformationContext(GOLDEN)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number].line())
