"""Population inequality and dispersion indices of a gamma mixture.

Theil and Atkinson indices depend on ``(pi, alpha)`` only; the rate cancels.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import mixture
from .errors import DomainError
from .specfun import digamma

__all__ = [
    "IndexReport",
    "theil_t",
    "theil_l",
    "atkinson_eps",
    "atkinson_1",
    "atkinson_inf",
    "vmr",
    "index_report",
]


@dataclass(frozen=True)
class IndexReport:
    theil_t: float
    theil_l: float
    atkinson_1: float
    atkinson_inf: float
    vmr: float

    def to_dict(self):
        return asdict(self)


def _weighted_shape(params):
    return float(np.dot(params.pi, params.alpha))


def theil_t(params):
    s = _weighted_shape(params)
    num = float(np.dot(params.pi * params.alpha, digamma(params.alpha))) + 1.0
    return num / s - math.log(s)


def theil_l(params):
    return math.log(_weighted_shape(params)) - float(np.dot(params.pi, digamma(params.alpha)))


def atkinson_eps(params, eps):
    """Atkinson index for aversion ``eps >= 0``, ``eps != 1``.

    Needs the moment of order ``1 - eps`` to exist, i.e. ``1 - eps > -min(alpha)``.
    Use :func:`atkinson_1` for the ``eps -> 1`` limit.
    """
    eps = float(eps)
    if not eps >= 0.0:
        raise DomainError("eps must be >= 0", eps=eps)
    if eps == 1.0:
        raise DomainError("eps = 1 is the logarithmic limit; use atkinson_1", eps=eps)
    p = 1.0 - eps
    # rate-free: work with lam = 1
    unit = mixture.MixtureParams(params.pi, params.alpha, 1.0)
    power_mean = mixture.moment(unit, p) ** (1.0 / p)
    return 1.0 - power_mean / _weighted_shape(params)


def atkinson_1(params):
    return 1.0 - math.exp(float(np.dot(params.pi, digamma(params.alpha)))) / _weighted_shape(params)


def atkinson_inf(params):
    """The ``eps -> infinity`` limit, which is 1 for every gamma mixture."""
    return 1.0


def vmr(params):
    s1 = _weighted_shape(params)
    s2 = float(np.dot(params.pi, params.alpha * (params.alpha + 1.0)))
    return (s2 - s1 * s1) / (params.lam * s1)


def index_report(params):
    return IndexReport(
        theil_t=theil_t(params),
        theil_l=theil_l(params),
        atkinson_1=atkinson_1(params),
        atkinson_inf=atkinson_inf(params),
        vmr=vmr(params),
    )
