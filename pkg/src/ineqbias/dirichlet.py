"""Dirichlet moment identities and a gamma-normalization sampler."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .sampling import make_rng, standard_gamma
from .specfun import digamma, ln_gamma

__all__ = ["DirichletParams", "mixed_moment", "log_weighted_moment", "sample_dirichlet"]


@dataclass(frozen=True, eq=False)
class DirichletParams:
    alpha: np.ndarray

    def __post_init__(self):
        a = np.array(self.alpha, dtype=float).ravel()
        if a.size < 2:
            raise ParameterError("a Dirichlet needs at least two concentrations")
        if not np.all(np.isfinite(a)) or np.any(a <= 0.0):
            raise ParameterError("concentrations must be finite and > 0", alpha=a.tolist())
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @property
    def n(self):
        return self.alpha.size


def _exponents(params, d, name):
    d = np.asarray(d, dtype=float).ravel()
    if d.size != params.n:
        raise ParameterError(f"{name} has length {d.size}, expected {params.n}")
    if not np.all(np.isfinite(d)) or np.any(d < 0.0):
        raise DomainError(f"{name} entries must be finite and >= 0")
    return d


def _log_mixed_moment(alpha, d):
    total = float(np.sum(alpha))
    return (ln_gamma(total) - ln_gamma(total + float(np.sum(d)))
            + float(np.sum(ln_gamma(alpha + d) - ln_gamma(alpha))))


def mixed_moment(params, d):
    """``E[prod_j D_j**d_j]`` for ``D ~ Dirichlet(alpha)``, evaluated in log space."""
    d = _exponents(params, d, "d")
    return float(np.exp(_log_mixed_moment(params.alpha, d)))


def log_weighted_moment(params, c, r):
    """``E[P**r * log P]`` with ``P = prod_j D_j**c_j``.

    The closed form is the derivative in ``r`` of :func:`mixed_moment` at
    exponents ``r*c``::

        M(r c) * [sum_j c_j psi(alpha_j + r c_j) - (sum_j c_j) psi(sum_j alpha_j + r sum_j c_j)]

    An all-zero ``c`` makes ``P`` the constant 1 and returns 0.
    """
    c = _exponents(params, c, "c")
    r = float(r)
    if not np.isfinite(r) or r < 0.0:
        raise DomainError("r must be finite and >= 0", r=r)
    if not np.any(c > 0.0):
        return 0.0
    alpha = params.alpha
    shifted = alpha + r * c
    bracket = (float(np.sum(c * digamma(shifted)))
               - float(np.sum(c)) * digamma(float(np.sum(shifted))))
    return float(np.exp(_log_mixed_moment(alpha, r * c))) * bracket


def sample_dirichlet(params, seed, size=None):
    """Draw from Dirichlet(alpha) by normalizing independent unit-rate gammas.

    Returns one probability vector, or an array of shape ``(size, n)`` when
    `size` is given. `seed` may be an integer or a ``numpy.random.Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    shape = (params.n,) if size is None else (int(size), params.n)
    z = standard_gamma(np.broadcast_to(params.alpha, shape), rng)
    return z / np.sum(z, axis=-1, keepdims=True)
