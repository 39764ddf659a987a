import math
import sys

import numpy as np
import pytest

from ineqbias.mixture import canonicalize


def euler_gamma():
    """Euler-Mascheroni constant from H_N - log N with its Euler-Maclaurin tail."""
    n = 10_000
    h = math.fsum(1.0 / k for k in range(1, n + 1))
    return h - math.log(n) - 1.0 / (2 * n) + 1.0 / (12 * n ** 2) - 1.0 / (120 * n ** 4)


def harmonic(n):
    return math.fsum(1.0 / k for k in range(1, n + 1))


@pytest.fixture(scope="session")
def gamma_const():
    return euler_gamma()


@pytest.fixture
def exp1():
    return canonicalize([1.0], [1.0], 1.0)


@pytest.fixture
def mix13():
    return canonicalize([0.5, 0.5], [1.0, 3.0], 1.0)


@pytest.fixture
def mix12():
    return canonicalize([0.5, 0.5], [1.0, 2.0], 1.0)


PARAM_SETS = [
    ([1.0], [1.0], 1.0),
    ([0.5, 0.5], [1.0, 3.0], 1.0),
    ([0.3, 0.7], [0.5, 2.0], 1.0),
    ([0.2, 0.5, 0.3], [0.8, 2.5, 6.0], 2.0),
]


@pytest.fixture(params=range(len(PARAM_SETS)), ids=lambda i: f"params{i}")
def params(request):
    return canonicalize(*PARAM_SETS[request.param])


def random_params(rng, m=None):
    m = m or int(rng.integers(1, 5))
    pi = rng.dirichlet(np.ones(m))
    alpha = np.exp(rng.uniform(np.log(0.3), np.log(20.0), m))
    lam = float(np.exp(rng.uniform(-2, 2)))
    return canonicalize(pi, alpha, lam)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
