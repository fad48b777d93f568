import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mirs.diophantine import build_theta
from mirs.constructions import pj_matrices

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def golden():
    return build_theta(1.0, 40)


@pytest.fixture(scope="session")
def pj(golden):
    return pj_matrices(1 / 3, golden.theta)


def brute_force_mirs(mats, N):
    """max norm over all len(mats)^n explicit products, n = 1..N."""
    d = mats[0].shape[0]
    level = [np.eye(d)]
    out = []
    for _ in range(N):
        level = [p @ a for p in level for a in mats]
        out.append(max(np.linalg.norm(p, 2) for p in level))
    return np.array(out)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
