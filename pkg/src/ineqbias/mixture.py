"""Finite gamma mixtures with a shared rate.

A GM(pi, alpha, lam) variable is drawn by choosing component ``j`` with
probability ``pi[j]`` and then drawing Gamma(alpha[j], rate=lam).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MixingProportionError, ParameterError
from .sampling import make_rng, standard_gamma
from .specfun import ln_gamma, reg_upper_gamma_q

__all__ = [
    "MixtureParams",
    "Sample",
    "canonicalize",
    "pdf",
    "cdf",
    "moment",
    "mean",
    "variance",
    "draw",
    "sample",
]

PI_SUM_TOL = 1e-9
SHAPE_MERGE_RTOL = 1e-12


def _frozen(values):
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MixtureParams:
    """Canonical mixture parameters. Build with :func:`canonicalize`.

    Attributes
    ----------
    pi : ndarray
        Mixing proportions, positive, summing to 1.
    alpha : ndarray
        Component shapes in strictly ascending order.
    lam : float
        Common rate.
    """

    pi: np.ndarray
    alpha: np.ndarray
    lam: float

    @property
    def m(self):
        return len(self.alpha)

    def __eq__(self, other):
        if not isinstance(other, MixtureParams):
            return NotImplemented
        return (self.lam == other.lam
                and np.array_equal(self.pi, other.pi)
                and np.array_equal(self.alpha, other.alpha))

    def __hash__(self):
        return hash((tuple(self.pi), tuple(self.alpha), self.lam))

    def __repr__(self):
        return f"MixtureParams(pi={self.pi.tolist()}, alpha={self.alpha.tolist()}, lam={self.lam})"

    def to_dict(self):
        return {"pi": self.pi.tolist(), "alpha": self.alpha.tolist(), "lambda": self.lam}


@dataclass(frozen=True, eq=False)
class Sample:
    """A sample of strictly positive observations."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen(np.ravel(self.values))
        if arr.size < 1:
            raise ParameterError("a sample needs at least one observation")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise DomainError("sample values must be finite and > 0")
        object.__setattr__(self, "values", arr)

    @property
    def n(self):
        return self.values.size

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def canonicalize(raw_pi, raw_alpha, raw_lambda):
    """Validate raw parameters and put them in canonical form.

    Components are sorted by ascending shape and components whose shapes
    agree to a relative 1e-12 are merged by adding their proportions. A
    proportion vector whose sum is within 1e-9 of one is renormalized;
    anything further off is rejected.

    Raises
    ------
    MixingProportionError
        Nonpositive proportions or a sum too far from one.
    ParameterError
        Empty or mismatched vectors, nonpositive shapes or rate.
    """
    pi = np.atleast_1d(np.asarray(raw_pi, dtype=float))
    alpha = np.atleast_1d(np.asarray(raw_alpha, dtype=float))
    if pi.ndim != 1 or alpha.ndim != 1:
        raise ParameterError("pi and alpha must be vectors")
    if pi.size == 0 or alpha.size == 0:
        raise ParameterError("pi and alpha must be nonempty")
    if pi.size != alpha.size:
        raise ParameterError("pi and alpha differ in length", len_pi=int(pi.size),
                             len_alpha=int(alpha.size))
    if not np.all(np.isfinite(pi)) or np.any(pi <= 0.0):
        raise MixingProportionError("mixing proportions must be finite and > 0",
                                    pi=pi.tolist())
    total = float(np.sum(pi))
    if abs(total - 1.0) > PI_SUM_TOL:
        raise MixingProportionError(f"mixing proportions sum to {total!r}, not 1",
                                    pi=pi.tolist(), sum=total)
    if not np.all(np.isfinite(alpha)) or np.any(alpha <= 0.0):
        raise ParameterError("shapes must be finite and > 0", alpha=alpha.tolist())
    try:
        lam = float(raw_lambda)
    except (TypeError, ValueError):
        raise ParameterError("rate must be a number", value=repr(raw_lambda)) from None
    if not np.isfinite(lam) or lam <= 0.0:
        raise ParameterError("rate must be finite and > 0", value=lam)

    order = np.argsort(alpha, kind="stable")
    alpha, pi = alpha[order], pi[order]
    merged_alpha = [alpha[0]]
    merged_pi = [pi[0]]
    for a, p in zip(alpha[1:], pi[1:]):
        if abs(a - merged_alpha[-1]) <= SHAPE_MERGE_RTOL * max(a, merged_alpha[-1]):
            merged_pi[-1] += p
        else:
            merged_alpha.append(a)
            merged_pi.append(p)
    merged_pi = np.array(merged_pi)
    merged_pi /= np.sum(merged_pi)
    return MixtureParams(_frozen(merged_pi), _frozen(merged_alpha), lam)


def _component_log_pdf(params, x):
    a = params.alpha[:, None]
    lx = np.log(x)[None, :]
    return (a * np.log(params.lam) + (a - 1.0) * lx - params.lam * x[None, :]
            - ln_gamma(params.alpha)[:, None])


def pdf(params, x):
    """Mixture density at ``x > 0``."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0.0)):
        raise DomainError("pdf requires x > 0")
    flat = np.ravel(xa)
    dens = params.pi @ np.exp(_component_log_pdf(params, flat))
    if xa.ndim == 0:
        return float(dens[0])
    return dens.reshape(xa.shape)


def cdf(params, x):
    """Mixture CDF, ``sum_j pi_j (1 - Q(alpha_j, lam x))``, for ``x >= 0``."""
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)) or np.any(xa < 0.0):
        raise DomainError("cdf requires x >= 0")
    flat = np.ravel(xa)
    q = reg_upper_gamma_q(params.alpha[:, None], params.lam * flat[None, :])
    out = 1.0 - params.pi @ q
    out = np.clip(out, 0.0, 1.0)
    if xa.ndim == 0:
        return float(out[0])
    return out.reshape(xa.shape)


def moment(params, p):
    """Raw moment ``E[X**p]``, defined for ``p > -min(alpha)``."""
    p = float(p)
    if not p > -params.alpha[0]:
        raise DomainError(f"moment of order {p} does not exist (need p > {-params.alpha[0]})",
                          p=p, alpha_min=float(params.alpha[0]))
    log_ratio = ln_gamma(params.alpha + p) - ln_gamma(params.alpha)
    return float(np.sum(params.pi * np.exp(log_ratio)) * params.lam ** (-p))


def mean(params):
    return float(np.dot(params.pi, params.alpha)) / params.lam


def variance(params):
    s1 = float(np.dot(params.pi, params.alpha))
    s2 = float(np.dot(params.pi, params.alpha * (params.alpha + 1.0)))
    return (s2 - s1 * s1) / params.lam ** 2


def draw(params, size, rng):
    """Raw array of i.i.d. mixture draws with the given ``size``, using ``rng``."""
    u = rng.random(size)
    comp = np.searchsorted(np.cumsum(params.pi), u, side="right")
    comp = np.minimum(comp, params.m - 1)
    return standard_gamma(params.alpha[comp], rng) / params.lam


def sample(params, n, seed):
    """Draw a :class:`Sample` of size ``n``; identical seeds give identical samples."""
    if int(n) < 1:
        raise ParameterError("sample size must be >= 1", n=n)
    return Sample(draw(params, int(n), make_rng(seed)))
