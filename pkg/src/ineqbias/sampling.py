"""Seeded random streams and a vectorized gamma variate generator."""

import numpy as np

from .errors import DomainError

_SEED_MASK = (1 << 64) - 1


def make_rng(seed, *stream):
    """Return a Philox-backed generator for ``seed`` and an optional substream key.

    Philox is counter based, so ``make_rng(seed, i)`` for different ``i`` gives
    independent streams that do not depend on the order they are created in.
    Any integer seed is accepted (taken modulo 2**64); 0 is legal.
    """
    key = tuple(int(k) & _SEED_MASK for k in stream)
    ss = np.random.SeedSequence(int(seed) & _SEED_MASK, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def standard_gamma(shape, rng, size=None):
    """Draw unit-rate Gamma(shape) variates.

    Marsaglia and Tsang's squeeze/rejection method for shape >= 1. Shapes
    below 1 draw with shape + 1 and multiply by ``U**(1/shape)``.

    Parameters
    ----------
    shape : float or array_like
        Shape parameter(s), all > 0. Broadcast against `size`.
    rng : numpy.random.Generator
    size : int or tuple of int, optional
        Output shape. Defaults to the shape of `shape`.
    """
    a = np.asarray(shape, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(a <= 0.0):
        raise DomainError("gamma shape must be finite and > 0")
    if size is None:
        size = a.shape
    a = np.broadcast_to(a, size).reshape(-1)
    boost = a < 1.0
    a_eff = np.where(boost, a + 1.0, a)
    d = a_eff - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)

    out = np.empty(a.shape)
    pending = np.arange(a.size)
    while pending.size:
        dd, cc = d[pending], c[pending]
        x = rng.standard_normal(pending.size)
        u = 1.0 - rng.random(pending.size)
        v = 1.0 + cc * x
        ok = v > 0.0
        v = np.where(ok, v * v * v, 1.0)
        x2 = x * x
        accept = ok & (
            (u < 1.0 - 0.0331 * x2 * x2)
            | (np.log(u) < 0.5 * x2 + dd * (1.0 - v + np.log(v)))
        )
        out[pending[accept]] = dd[accept] * v[accept]
        pending = pending[~accept]

    if np.any(boost):
        idx = np.flatnonzero(boost)
        u = 1.0 - rng.random(idx.size)
        out[idx] *= u ** (1.0 / a[idx])
    return out.reshape(size)
