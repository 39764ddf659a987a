"""Exact finite-sample expectations and biases of the five estimators.

The expectations are averages over the latent component labels of n
observations. Each conditional term depends on the labels only through the
counts ``k = (k_1, ..., k_m)``, so the m**n ordered label tuples collapse to
the C(n+m-1, m-1) compositions of n, each weighted by its multinomial
probability ``n! / prod(k_j!) * prod(pi_j**k_j)``.

Sums are formed with :func:`math.fsum`, which is exactly rounded and so
independent of evaluation order; chunks of compositions may be evaluated on
worker threads without changing the result.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import indices
from .errors import CompositionLimitError, IneqBiasError, ParameterError
from .quadrature import QuadratureConfig, gauss_kronrod, integral_q_product
from .specfun import digamma, ln_gamma, reg_upper_gamma_q

__all__ = [
    "ESTIMATOR_IDS",
    "DEFAULT_COMPOSITION_LIMIT",
    "Composition",
    "EstimatorBias",
    "BiasReport",
    "composition_count",
    "enumerate_compositions",
    "composition_array",
    "expected_theil_t",
    "expected_theil_l",
    "expected_atkinson_1",
    "expected_atkinson_inf",
    "expected_vmr",
    "expected_value",
    "bias_report",
    "brute_force_expectation",
]

ESTIMATOR_IDS = ("theil_t", "theil_l", "atkinson_1", "atkinson_inf", "vmr")
DEFAULT_COMPOSITION_LIMIT = 10_000_000
BRUTE_FORCE_LIMIT = 1_000_000
_CHUNK = 65536


@dataclass(frozen=True)
class Composition:
    k: tuple
    n: int

    def __post_init__(self):
        if any(v < 0 for v in self.k) or sum(self.k) != self.n:
            raise ParameterError("composition entries must be >= 0 and sum to n",
                                 k=list(self.k), n=self.n)


def composition_count(n, m):
    return math.comb(n + m - 1, m - 1)


def _check_nm(n, m):
    if int(n) != n or n < 1:
        raise ParameterError("n must be an integer >= 1", n=n)
    if int(m) != m or m < 1:
        raise ParameterError("m must be an integer >= 1", m=m)
    return int(n), int(m)


def _guard(n, m, limit):
    count = composition_count(n, m)
    if count > limit:
        raise CompositionLimitError(
            f"{count} compositions of n={n} into m={m} parts exceed the limit of {limit}",
            count=count, n=n, m=m, limit=limit)
    return count


def _compositions(n, m):
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, m - 1):
            yield (first,) + rest


def enumerate_compositions(n, m, limit=DEFAULT_COMPOSITION_LIMIT):
    """Yield every composition of ``n`` into ``m`` nonnegative parts, once each.

    Order is reverse lexicographic: ``(n, 0, ...)`` first, ``(..., 0, n)`` last.

    Raises
    ------
    CompositionLimitError
        When C(n+m-1, m-1) exceeds `limit`; raised before anything is yielded.
    """
    n, m = _check_nm(n, m)
    _guard(n, m, limit)
    return (Composition(k, n) for k in _compositions(n, m))


def composition_array(n, m, limit=DEFAULT_COMPOSITION_LIMIT):
    """All compositions as a ``(count, m)`` integer array, in enumeration order."""
    n, m = _check_nm(n, m)
    _guard(n, m, limit)
    # table[s] holds the compositions of s into the trailing parts built so far
    table = [np.array([[s]], dtype=np.int64) for s in range(n + 1)]
    for _ in range(m - 1):
        new = []
        for s in range(n + 1):
            blocks = []
            for first in range(s, -1, -1):
                tail = table[s - first]
                head = np.full((tail.shape[0], 1), first, dtype=np.int64)
                blocks.append(np.hstack([head, tail]))
            new.append(np.vstack(blocks))
        table = new
    return table[n]


def _log_weights(params, comps):
    n = int(comps[0].sum())
    lfact = np.array([math.lgamma(i + 1.0) for i in range(n + 1)])
    return lfact[n] - lfact[comps].sum(axis=1) + comps @ np.log(params.pi)


def _chunked(comps, fn, workers):
    """Apply ``fn`` to row chunks of ``comps``; results concatenated in chunk order."""
    chunks = [comps[i:i + _CHUNK] for i in range(0, comps.shape[0], _CHUNK)]
    if workers and workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, chunks))
    else:
        parts = [fn(c) for c in chunks]
    return np.concatenate(parts)


def _weighted_sum(params, n, limit, workers, term):
    """fsum over compositions of weight(k) * term(k-array, A-array)."""
    comps = composition_array(n, params.m, limit)
    alpha = params.alpha

    def fn(chunk):
        a_k = chunk @ alpha
        return np.exp(_log_weights(params, chunk)) * term(chunk, a_k)

    return math.fsum(_chunked(comps, fn, workers))


def _require_n(n, minimum=1):
    if int(n) != n or n < minimum:
        raise ParameterError(f"n must be an integer >= {minimum}", n=n)
    return int(n)


def expected_theil_t(params, n, limit=DEFAULT_COMPOSITION_LIMIT, workers=None):
    """Exact ``E[theil_t_hat]`` for samples of size ``n``."""
    n = _require_n(n)
    a_psi = params.alpha * digamma(params.alpha)

    def term(k, a_k):
        return (k @ a_psi - a_k * digamma(a_k) + (n - 1)) / a_k

    return _weighted_sum(params, n, limit, workers, term) + math.log(n)


def expected_theil_l(params, n, limit=DEFAULT_COMPOSITION_LIMIT, workers=None):
    n = _require_n(n)
    s = _weighted_sum(params, n, limit, workers, lambda k, a_k: digamma(a_k))
    return s - math.log(n) - float(np.dot(params.pi, digamma(params.alpha)))


def expected_atkinson_1(params, n, limit=DEFAULT_COMPOSITION_LIMIT, workers=None):
    """Exact ``E[atkinson_1_hat]``.

    Uses the product of ``Gamma(alpha_j + 1/n) / Gamma(alpha_j)`` ratios,
    accumulated as a sum of log-gamma differences and exponentiated once.
    """
    n = _require_n(n)
    log_ratio = ln_gamma(params.alpha + 1.0 / n) - ln_gamma(params.alpha)

    def term(k, a_k):
        return np.exp(k @ log_ratio) / a_k

    return 1.0 - n * _weighted_sum(params, n, limit, workers, term)


def expected_vmr(params, n, limit=DEFAULT_COMPOSITION_LIMIT, workers=None):
    n = _require_n(n, minimum=2)
    second = params.alpha * (params.alpha + 1.0)

    def term(k, a_k):
        return (k @ second) / (a_k + 1.0) - a_k / n

    return n / ((n - 1) * params.lam) * _weighted_sum(params, n, limit, workers, term)


def expected_atkinson_inf(params, n, cfg=None, limit=DEFAULT_COMPOSITION_LIMIT,
                          workers=None, return_error=False):
    """Exact ``E[atkinson_inf_hat]``, one incomplete-gamma product integral per composition.

    With ``return_error=True`` returns ``(value, error)`` where ``error``
    propagates the per-integral error estimates through the weighted sum.
    """
    n = _require_n(n)
    cfg = cfg or QuadratureConfig()
    comps = composition_array(n, params.m, limit)
    log_w = _log_weights(params, comps)
    a_k = comps @ params.alpha
    alpha = params.alpha

    def integrate(k):
        return integral_q_product(alpha, k, cfg)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(integrate, comps))
    else:
        results = [integrate(k) for k in comps]
    values = np.array([r.value for r in results])
    errors = np.array([r.error for r in results])
    coef = n * np.exp(log_w) / a_k
    value = 1.0 - math.fsum(coef * values)
    if return_error:
        return value, math.fsum(coef * errors)
    return value


_EXPECTATIONS = {
    "theil_t": expected_theil_t,
    "theil_l": expected_theil_l,
    "atkinson_1": expected_atkinson_1,
    "atkinson_inf": expected_atkinson_inf,
    "vmr": expected_vmr,
}

_POPULATION = {
    "theil_t": indices.theil_t,
    "theil_l": indices.theil_l,
    "atkinson_1": indices.atkinson_1,
    "atkinson_inf": indices.atkinson_inf,
    "vmr": indices.vmr,
}


def _check_estimator(estimator):
    if estimator not in _EXPECTATIONS:
        raise ParameterError(f"unknown estimator {estimator!r}", choices=list(ESTIMATOR_IDS))


def expected_value(params, n, estimator, cfg=None, limit=DEFAULT_COMPOSITION_LIMIT,
                   workers=None):
    """Dispatch to the exact expectation of ``estimator`` (one of :data:`ESTIMATOR_IDS`)."""
    _check_estimator(estimator)
    if estimator == "atkinson_inf":
        return expected_atkinson_inf(params, n, cfg, limit, workers)
    return _EXPECTATIONS[estimator](params, n, limit, workers)


@dataclass(frozen=True)
class EstimatorBias:
    estimator: str
    n: int
    population: float
    expectation: float
    bias: float
    quadrature_error: float = None

    def to_dict(self):
        return {
            "estimator": self.estimator,
            "n": self.n,
            "population": self.population,
            "expectation": self.expectation,
            "bias": self.bias,
            "quadrature_error": self.quadrature_error,
        }


@dataclass(frozen=True)
class BiasReport:
    """Population value, exact expectation and bias for each estimator at one n.

    The VMR row is left out when ``n == 1`` (the estimator needs n >= 2).
    """

    n: int
    params: object
    composition_count: int
    rows: tuple = field(default_factory=tuple)

    def __getitem__(self, estimator):
        for row in self.rows:
            if row.estimator == estimator:
                return row
        raise KeyError(estimator)

    def __iter__(self):
        return iter(self.rows)

    @property
    def quadrature_error(self):
        for row in self.rows:
            if row.estimator == "atkinson_inf":
                return row.quadrature_error
        return None

    def to_dict(self):
        return {
            "n": self.n,
            "params": self.params.to_dict(),
            "composition_count": self.composition_count,
            "rows": [row.to_dict() for row in self.rows],
        }


def bias_report(params, n, cfg=None, limit=DEFAULT_COMPOSITION_LIMIT, workers=None,
                estimators=ESTIMATOR_IDS):
    """Exact biases at sample size ``n``.

    Errors raised while evaluating one estimator are re-raised with an
    ``estimator`` entry in their context.
    """
    n = _require_n(n)
    count = _guard(n, params.m, limit)
    rows = []
    for est in estimators:
        _check_estimator(est)
        if est == "vmr" and n < 2:
            continue
        try:
            population = _POPULATION[est](params)
            qerr = None
            if est == "atkinson_inf":
                expectation, qerr = expected_atkinson_inf(params, n, cfg, limit, workers,
                                                          return_error=True)
            else:
                expectation = _EXPECTATIONS[est](params, n, limit, workers)
        except IneqBiasError as exc:
            exc.context.setdefault("estimator", est)
            raise
        rows.append(EstimatorBias(est, n, population, expectation, expectation - population, qerr))
    return BiasReport(n, params, count, tuple(rows))


def brute_force_expectation(params, n, estimator, cfg=None):
    """Expectation by direct summation over all m**n ordered component-label tuples.

    Transcribes the tuple-indexed formulas term by term with scalar special
    functions. Intended as a test oracle for the composition-reduced sums.
    """
    _check_estimator(estimator)
    n = _require_n(n, 2 if estimator == "vmr" else 1)
    m = params.m
    if m ** n > BRUTE_FORCE_LIMIT:
        raise CompositionLimitError(f"{m}**{n} tuples exceed the brute-force limit",
                                    count=m ** n, limit=BRUTE_FORCE_LIMIT)
    cfg = cfg or QuadratureConfig()
    pi = [float(p) for p in params.pi]
    alpha = [float(a) for a in params.alpha]
    psi = [digamma(a) for a in alpha]
    terms = []
    for js in itertools.product(range(m), repeat=n):
        prob = math.prod(pi[j] for j in js)
        a_sum = math.fsum(alpha[j] for j in js)
        if estimator == "theil_t":
            inner = (math.fsum(alpha[j] * psi[j] for j in js) - a_sum * digamma(a_sum)
                     + n - 1) / a_sum
        elif estimator == "theil_l":
            inner = digamma(a_sum)
        elif estimator == "atkinson_1":
            ratio = math.prod(math.exp(math.lgamma(alpha[j] + 1.0 / n) - math.lgamma(alpha[j]))
                              for j in js)
            inner = ratio / a_sum
        elif estimator == "atkinson_inf":
            shapes = np.array([alpha[j] for j in js])

            def integrand(u, shapes=shapes):
                return np.prod(reg_upper_gamma_q(shapes[:, None], u[None, :]), axis=0)

            inner = _tuple_integral(integrand, shapes, cfg) / a_sum
        else:
            inner = (math.fsum(alpha[j] * (alpha[j] + 1.0) for j in js) / (a_sum + 1.0)
                     - a_sum / n)
        terms.append(prob * inner)
    total = math.fsum(terms)
    if estimator == "theil_t":
        return total + math.log(n)
    if estimator == "theil_l":
        return total - math.log(n) - math.fsum(p * s for p, s in zip(pi, psi))
    if estimator in ("atkinson_1", "atkinson_inf"):
        return 1.0 - n * total
    return n / ((n - 1) * params.lam) * total


def _tuple_integral(integrand, shapes, cfg):
    upper = 1.0
    while float(integrand(np.array([upper]))[0]) >= cfg.truncation:
        upper *= 2.0
    return gauss_kronrod(integrand, 0.0, upper, cfg.rel_tol, cfg.abs_tol,
                         cfg.max_subdivisions).value
