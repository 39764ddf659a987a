"""Monte Carlo check of the exact expectations.

Replicates are grouped in fixed-size blocks. Block ``b`` draws from its own
counter-based stream keyed by ``(seed, *stream, b)``, so the estimates do not
depend on how blocks are scheduled across threads, and the final reduction is
done in block order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import bias, mixture
from .errors import ParameterError
from .estimators import ESTIMATORS
from .sampling import make_rng

__all__ = ["MCReport", "Z_THRESHOLD", "run_mc", "run_grid"]

Z_THRESHOLD = 4.0
BLOCK_SIZE = 4096
MIN_REPLICATES = 100


@dataclass(frozen=True)
class MCReport:
    estimator: str
    n: int
    replicates: int
    mean: float
    se: float
    exact: float
    z: float
    seed: int

    @property
    def passed(self):
        return abs(self.z) <= Z_THRESHOLD

    def to_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _block_estimates(params, n, estimator, seed, stream, block, count):
    rng = make_rng(seed, *stream, block)
    x = mixture.draw(params, (count, n), rng)
    return np.atleast_1d(ESTIMATORS[estimator](x))


def run_mc(params, n, estimator, replicates, seed, exact=None, threads=1, stream=(),
           cfg=None):
    """Simulate ``replicates`` samples of size ``n`` and score the estimator's mean.

    Parameters
    ----------
    params : MixtureParams
    n : int
        Sample size (>= 2 for ``"vmr"``).
    estimator : str
        One of :data:`ineqbias.bias.ESTIMATOR_IDS`.
    replicates : int
        At least 100.
    seed : int
    exact : float, optional
        Reference expectation; computed with :mod:`ineqbias.bias` when omitted.
    threads : int
        Worker threads. Results are identical for any value.
    stream : tuple of int
        Extra substream key, used to give grid cells distinct streams.

    Returns
    -------
    MCReport
        ``z = (mean - exact) / se``. If every replicate gives the same value
        (``se == 0``) then z is 0 when the mean equals `exact` to 1e-12 and
        infinite otherwise.
    """
    if estimator not in ESTIMATORS:
        raise ParameterError(f"unknown estimator {estimator!r}", choices=list(ESTIMATORS))
    replicates = int(replicates)
    if replicates < MIN_REPLICATES:
        raise ParameterError(f"need at least {MIN_REPLICATES} replicates", replicates=replicates)
    n = int(n)
    if n < (2 if estimator == "vmr" else 1):
        raise ParameterError("sample size too small for this estimator", n=n,
                             estimator=estimator)
    if exact is None:
        exact = bias.expected_value(params, n, estimator, cfg=cfg)

    blocks = [(b, min(BLOCK_SIZE, replicates - b * BLOCK_SIZE))
              for b in range(math.ceil(replicates / BLOCK_SIZE))]

    def work(item):
        b, count = item
        return _block_estimates(params, n, estimator, seed, tuple(stream), b, count)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(item) for item in blocks]
    values = np.concatenate(parts)

    mean = math.fsum(values) / replicates
    var = math.fsum((values - mean) ** 2) / (replicates - 1)
    se = math.sqrt(var / replicates)
    if se > 0.0:
        z = (mean - exact) / se
    else:
        z = 0.0 if abs(mean - exact) <= 1e-12 else math.inf
    return MCReport(estimator, n, replicates, mean, se, float(exact), z, int(seed))


def run_grid(param_sets, ns, estimators, replicates, seed, threads=1, cfg=None):
    """Run :func:`run_mc` over every (params, n, estimator) cell.

    Cell ``i`` uses substream key ``(i,)`` under the shared seed. Returns a
    list of ``(params_index, MCReport)`` pairs in grid order.
    """
    out = []
    cell = 0
    for pi_idx, params in enumerate(param_sets):
        for n in ns:
            for est in estimators:
                if est == "vmr" and n < 2:
                    continue
                rep = run_mc(params, n, est, replicates, seed, threads=threads,
                             stream=(cell,), cfg=cfg)
                out.append((pi_idx, rep))
                cell += 1
    return out
