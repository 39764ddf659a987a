import math

import numpy as np
import pytest

from conftest import PARAM_SETS
from ineqbias import estimators as est
from ineqbias import indices, mixture
from ineqbias.errors import DomainError, ParameterError
from ineqbias.mixture import canonicalize

SCALE_FREE = [est.theil_t_hat, est.theil_l_hat, est.atkinson_1_hat, est.atkinson_inf_hat,
              lambda x: est.atkinson_eps_hat(x, 0.5), lambda x: est.atkinson_eps_hat(x, 2.0)]


@pytest.mark.parametrize("fn", SCALE_FREE + [est.vmr_hat])
def test_all_equal_is_zero(fn):
    assert fn(np.full(7, 3.3)) == 0.0


def test_theil_t_pair():
    expected = 0.25 * math.log(0.25) + 0.75 * math.log(0.75) + math.log(2)
    assert est.theil_t_hat([1.0, 3.0]) == pytest.approx(expected, rel=1e-14)
    assert est.theil_t_hat([1.0, 3.0]) == pytest.approx(0.1308, abs=5e-5)


def test_theil_l_pair():
    assert est.theil_l_hat([1.0, 3.0]) == pytest.approx(math.log(2) - 0.5 * math.log(3), rel=1e-14)
    assert est.theil_l_hat([1.0, 3.0]) == pytest.approx(0.1438410, abs=5e-8)


def test_atkinson_pairs():
    assert est.atkinson_eps_hat([1.0, 4.0], 0.5) == pytest.approx(0.1, rel=1e-14)
    assert est.atkinson_eps_hat([1.0, 4.0], 0.0) == pytest.approx(0.0, abs=1e-15)
    assert est.atkinson_1_hat([1.0, 4.0]) == pytest.approx(0.2, rel=1e-14)
    assert est.atkinson_inf_hat([1.0, 3.0]) == pytest.approx(0.5, rel=1e-15)


def test_vmr_pair():
    assert est.vmr_hat([1.0, 3.0]) == pytest.approx(1.0, rel=1e-15)


def test_single_observation():
    assert est.theil_t_hat([2.5]) == 0.0
    assert est.theil_l_hat([2.5]) == 0.0
    assert est.atkinson_inf_hat([2.5]) == 0.0
    with pytest.raises(ParameterError):
        est.vmr_hat([2.5])


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        est.theil_t_hat([1.0, 0.0])
    with pytest.raises(DomainError):
        est.theil_l_hat([1.0, -2.0])
    with pytest.raises(DomainError):
        est.atkinson_eps_hat([1.0, 2.0], 1.0)
    with pytest.raises(DomainError):
        est.atkinson_1_hat([1.0, math.nan])


def test_accepts_sample_and_rows():
    s = mixture.sample(canonicalize([0.5, 0.5], [1, 3], 1), 20, seed=3)
    stack = np.vstack([s.values, 2 * s.values])
    for fn in est.ESTIMATORS.values():
        rows = fn(stack)
        assert rows.shape == (2,)
        assert rows[0] == pytest.approx(fn(s), rel=1e-12)


def test_atkinson_inside_unit_interval():
    rng = np.random.default_rng(1)
    x = rng.gamma(0.3, size=(500, 8))
    for fn in (est.atkinson_1_hat, est.atkinson_inf_hat):
        v = fn(x)
        assert np.all((v >= 0) & (v < 1))
    assert np.all(est.theil_l_hat(x) >= 0)


@pytest.mark.parametrize("c", [1e-6, 1.0, 1e6])
def test_scale_invariance(c):
    rng = np.random.default_rng(12)
    x = rng.gamma(0.7, size=(50, 15))
    for fn in SCALE_FREE:
        np.testing.assert_allclose(fn(c * x), fn(x), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(est.vmr_hat(c * x), c * est.vmr_hat(x), rtol=1e-12)


def test_share_form_matches_ratio_form():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 40))
        x = rng.gamma(rng.uniform(0.2, 5), size=n) * rng.uniform(0.1, 10)
        xbar = x.mean()
        ratio = np.mean((x / xbar) * np.log(x / xbar))
        assert est.theil_t_hat(x) == pytest.approx(ratio, abs=1e-12)


def _influence(x):
    """Empirical influence values for each index, keyed like ESTIMATORS."""
    mu = x.mean()
    lx = np.log(x)
    elog = lx.mean()
    exlx = np.mean(x * lx)
    var = x.var()
    g = math.exp(elog)
    return {
        "theil_t": (x * lx - exlx) / mu - exlx * (x - mu) / mu**2 - (x - mu) / mu,
        "theil_l": (x - mu) / mu - (lx - elog),
        "atkinson_1": -g / mu * (lx - elog) + g * (x - mu) / mu**2,
        "vmr": ((x - mu) ** 2 - var) / mu - var * (x - mu) / mu**2,
    }


POPULATION = {
    "theil_t": indices.theil_t,
    "theil_l": indices.theil_l,
    "atkinson_1": indices.atkinson_1,
    "vmr": indices.vmr,
}


@pytest.mark.parametrize("case", PARAM_SETS, ids=str)
def test_consistency_large_n(case):
    params = canonicalize(*case)
    x = mixture.sample(params, 100_000, seed=2024).values
    infl = _influence(x)
    for name, pop in POPULATION.items():
        se = infl[name].std() / math.sqrt(x.size)
        assert abs(est.ESTIMATORS[name](x) - pop(params)) <= 4 * se, name


@pytest.mark.parametrize("case", PARAM_SETS, ids=str)
def test_atkinson_inf_approaches_one(case):
    params = canonicalize(*case)
    means = []
    for n in (100, 1000, 10000):
        x = mixture.draw(params, (200, n), np.random.default_rng(n))
        means.append(est.atkinson_inf_hat(x).mean())
    assert means[0] < means[1] < means[2] < 1.0
