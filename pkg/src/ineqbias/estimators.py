"""Sample estimators of the indices.

Every function takes a :class:`~ineqbias.mixture.Sample` or an array of
positive observations. Arrays may be 2-D, in which case each row is one
sample and an array of estimates is returned.
"""

import numpy as np

from .errors import DomainError, ParameterError
from .mixture import Sample

__all__ = [
    "theil_t_hat",
    "theil_l_hat",
    "atkinson_eps_hat",
    "atkinson_1_hat",
    "atkinson_inf_hat",
    "vmr_hat",
    "ESTIMATORS",
]

_CLAMP = 1e-12


def _values(sample, min_n=1):
    if isinstance(sample, Sample):
        x = sample.values
    else:
        x = np.asarray(sample, dtype=float)
        if x.ndim == 0 or x.ndim > 2:
            raise ParameterError("expected a 1-D sample or a 2-D stack of samples")
        if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
            raise DomainError("observations must be finite and > 0")
    if x.shape[-1] < min_n:
        raise ParameterError(f"need at least {min_n} observations", n=int(x.shape[-1]))
    return x


def _finish(value, x):
    # all-equal samples are exactly 0; rounding elsewhere can land a hair below zero
    value = np.where((value < 0.0) & (value > -_CLAMP), 0.0, value)
    value = np.where(np.all(x == x[..., :1], axis=-1), 0.0, value)
    return float(value) if np.ndim(value) == 0 else value


def theil_t_hat(sample):
    """Theil T from income shares: ``sum_i D_i log D_i + log n`` with ``D_i = X_i / S_n``."""
    x = _values(sample)
    n = x.shape[-1]
    d = x / np.sum(x, axis=-1, keepdims=True)
    return _finish(np.sum(d * np.log(d), axis=-1) + np.log(n), x)


def theil_l_hat(sample):
    """Theil L (mean log deviation): ``log(mean X) - mean(log X)``."""
    x = _values(sample)
    return _finish(np.log(np.mean(x, axis=-1)) - np.mean(np.log(x), axis=-1), x)


def atkinson_eps_hat(sample, eps):
    """Atkinson estimator ``1 - M_{1-eps}(X) / mean(X)`` for ``eps != 1``.

    The power mean is taken of ``X / mean(X)`` so large or tiny observations
    do not overflow.
    """
    eps = float(eps)
    if not eps >= 0.0:
        raise DomainError("eps must be >= 0", eps=eps)
    if eps == 1.0:
        raise DomainError("eps = 1 is the logarithmic limit; use atkinson_1_hat", eps=eps)
    x = _values(sample)
    p = 1.0 - eps
    y = x / np.mean(x, axis=-1, keepdims=True)
    power_mean = np.mean(y ** p, axis=-1) ** (1.0 / p)
    return _finish(1.0 - power_mean, x)


def atkinson_1_hat(sample):
    """``1 - GM(X) / AM(X)`` with the geometric mean taken as exp(mean log)."""
    x = _values(sample)
    log_gm = np.mean(np.log(x), axis=-1)
    return _finish(1.0 - np.exp(log_gm - np.log(np.mean(x, axis=-1))), x)


def atkinson_inf_hat(sample):
    x = _values(sample)
    return _finish(1.0 - np.min(x, axis=-1) / np.mean(x, axis=-1), x)


def vmr_hat(sample):
    """Sample variance (denominator n - 1) over sample mean; needs n >= 2."""
    x = _values(sample, min_n=2)
    xbar = np.mean(x, axis=-1, keepdims=True)
    s2 = np.sum((x - xbar) ** 2, axis=-1) / (x.shape[-1] - 1)
    out = np.where(np.all(x == x[..., :1], axis=-1), 0.0, s2 / xbar[..., 0])
    return float(out) if np.ndim(out) == 0 else out


ESTIMATORS = {
    "theil_t": theil_t_hat,
    "theil_l": theil_l_hat,
    "atkinson_1": atkinson_1_hat,
    "atkinson_inf": atkinson_inf_hat,
    "vmr": vmr_hat,
}
