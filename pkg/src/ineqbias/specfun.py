"""Special functions: log-gamma, digamma and the regularized upper incomplete gamma.

All three accept a scalar or an array and return the same kind of object.
"""

import math

import numpy as np

from .errors import DomainError

__all__ = ["ln_gamma", "digamma", "reg_upper_gamma_q", "reg_lower_gamma_p"]

_EPS = np.finfo(float).eps
_TINY = 1e-300
_MAX_ITER = 100_000

# B_{2k} / (2k) for k = 1..8
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)
_DIGAMMA_SHIFT = 10.0

_lgamma_vec = np.vectorize(math.lgamma, otypes=[float])


def _as_positive(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"{name} must be finite and > 0", value=_preview(arr))
    return arr


def _preview(arr):
    flat = np.ravel(arr)
    return flat.tolist() if flat.size <= 8 else flat[:8].tolist()


def _wrap(result, like):
    if np.ndim(like) == 0:
        return float(result)
    return result


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    arr = _as_positive(x, "x")
    if arr.ndim == 0:
        return math.lgamma(float(arr))
    return _lgamma_vec(arr)


def digamma(x):
    """Digamma function psi(x) for ``x > 0``.

    Arguments below 10 are shifted up with ``psi(x) = psi(x + 1) - 1/x``;
    the asymptotic Bernoulli series is then summed to eight terms.
    """
    arr = _as_positive(x, "x")
    z = np.array(arr, dtype=float, copy=True)
    acc = np.zeros_like(z)
    while True:
        low = z < _DIGAMMA_SHIFT
        if not np.any(low):
            break
        acc = np.where(low, acc - 1.0 / np.where(low, z, 1.0), acc)
        z = np.where(low, z + 1.0, z)
    inv2 = 1.0 / (z * z)
    series = np.zeros_like(z)
    for coef in reversed(_DIGAMMA_ASYMPTOTIC):
        series = (series + coef) * inv2
    result = np.log(z) - 0.5 / z - series + acc
    return _wrap(result, x)


# Stirling series for lgamma(a) - [(a - 1/2) log a - a + log(2 pi)/2], a >= 10
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_correction(a):
    inv2 = 1.0 / (a * a)
    acc = np.zeros_like(a)
    for coef in reversed(_STIRLING):
        acc = acc * inv2 + coef
    return acc / a


def _log_prefactor(a, x):
    # log(x^a e^{-x} / Gamma(a)) for x > 0; the large-a branch avoids
    # cancelling a*log(x) against lgamma(a)
    out = np.empty_like(a)
    big = a >= 10.0
    small = ~big
    if np.any(small):
        aa, xx = a[small], x[small]
        out[small] = aa * np.log(xx) - xx - _lgamma_vec(aa)
    if np.any(big):
        aa, xx = a[big], x[big]
        t = (xx - aa) / aa
        # log(x/a) - t, via log1p near x = a
        core = np.where(t > -0.5, np.log1p(np.maximum(t, -0.5)), np.log(xx) - np.log(aa)) - t
        out[big] = (aa * core + 0.5 * np.log(aa)
                    - _HALF_LOG_2PI - _stirling_correction(aa))
    return out


_EULER_GAMMA = 0.57721566490153286061
# zeta(k) for k = 2..26
_ZETA = (
    1.6449340668482264, 1.2020569031595942, 1.0823232337111381, 1.03692775514337,
    1.0173430619844492, 1.008349277381923, 1.0040773561979444, 1.0020083928260821,
    1.000994575127818, 1.0004941886041194, 1.000246086553308, 1.0001227133475785,
    1.0000612481350588, 1.000030588236307, 1.0000152822594086, 1.0000076371976379,
    1.000003817293265, 1.0000019082127165, 1.0000009539620338, 1.0000004769329869,
    1.0000002384505027, 1.000000119219926, 1.000000059608189, 1.0000000298035034,
    1.0000000149015549,
)
_SMALL_A = 0.2


def _lgamma1p_small(a):
    """log Gamma(1 + a) for 0 < a <= 0.2 by its Taylor series at 1."""
    acc = np.zeros_like(a)
    for k in range(len(_ZETA) + 1, 1, -1):
        acc = acc * a + (-1.0) ** k * _ZETA[k - 2] / k
    return a * (acc * a - _EULER_GAMMA)


def _upper_small_a(a, x):
    """Q(a, x) for small a and x < a + 1, without forming 1 - P.

    Uses Q = 1 - x^a / Gamma(a+1) + x^a / Gamma(a) * sum_{k>=1} (-1)^(k+1) x^k / (k! (a+k)).
    """
    u = a * np.log(x) - _lgamma1p_small(a)
    head = -np.expm1(u)
    term = np.ones_like(x)
    total = np.zeros_like(x)
    active = np.ones(a.shape, dtype=bool)
    for k in range(1, _MAX_ITER):
        term = term * (-x / k)
        inc = np.where(active, -term / (a + k), 0.0)
        total = total + inc
        active = active & (np.abs(inc) > np.abs(total) * _EPS)
        if not np.any(active):
            break
    # x^a / Gamma(a) = a * exp(u)
    return head + a * np.exp(u) * total


def _lower_series(a, x):
    """Sum of the series for P(a, x) without its prefactor (valid for all x, fast for x < a+1)."""
    ap = a.copy()
    term = 1.0 / a
    total = term.copy()
    active = np.ones(a.shape, dtype=bool)
    for _ in range(_MAX_ITER):
        ap = ap + 1.0
        term = np.where(active, term * x / ap, 0.0)
        total = total + term
        active = active & (np.abs(term) > np.abs(total) * _EPS)
        if not np.any(active):
            return total
    raise DomainError("incomplete gamma series failed to converge", a=_preview(a), x=_preview(x))


def _upper_fraction(a, x):
    """Modified Lentz evaluation of the continued fraction for Q(a, x), without prefactor."""
    b = x + 1.0 - a
    c = np.full(a.shape, 1.0 / _TINY)
    d = 1.0 / np.where(np.abs(b) < _TINY, _TINY, b)
    h = d.copy()
    active = np.ones(a.shape, dtype=bool)
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = b + an / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active = active & (np.abs(delta - 1.0) > _EPS)
        if not np.any(active):
            return h
    raise DomainError("incomplete gamma continued fraction failed to converge",
                      a=_preview(a), x=_preview(x))


def _incomplete(a, x):
    """Return (P, Q) regularized incomplete gamma pair, broadcast over a and x."""
    a_arr = _as_positive(a, "a")
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(x_arr)) or np.any(x_arr < 0.0):
        raise DomainError("x must be >= 0", value=_preview(x_arr))
    a_b, x_b = np.broadcast_arrays(a_arr, x_arr)
    a_b = np.array(a_b, dtype=float).reshape(-1)
    x_b = np.array(x_b, dtype=float).reshape(-1)
    shape = np.broadcast_shapes(a_arr.shape, x_arr.shape)

    p = np.zeros(a_b.shape)
    q = np.ones(a_b.shape)
    inf = np.isinf(x_b)
    p[inf], q[inf] = 1.0, 0.0

    positive = (x_b > 0.0) & ~inf
    use_small = positive & (a_b <= _SMALL_A) & (x_b < a_b + 1.0)
    use_series = positive & ~use_small & (x_b < a_b + 1.0)
    use_fraction = positive & (x_b >= a_b + 1.0)
    if np.any(use_small):
        aa, xx = a_b[use_small], x_b[use_small]
        qs = np.clip(_upper_small_a(aa, xx), 0.0, 1.0)
        q[use_small] = qs
        p[use_small] = 1.0 - qs
    if np.any(use_series):
        aa, xx = a_b[use_series], x_b[use_series]
        ps = np.exp(_log_prefactor(aa, xx)) * _lower_series(aa, xx)
        ps = np.minimum(ps, 1.0)
        p[use_series] = ps
        q[use_series] = 1.0 - ps
    if np.any(use_fraction):
        aa, xx = a_b[use_fraction], x_b[use_fraction]
        qs = np.exp(_log_prefactor(aa, xx)) * _upper_fraction(aa, xx)
        qs = np.minimum(qs, 1.0)
        q[use_fraction] = qs
        p[use_fraction] = 1.0 - qs
    return p.reshape(shape), q.reshape(shape)


def reg_upper_gamma_q(a, x):
    """Regularized upper incomplete gamma ``Q(a, x) = Gamma(a, x) / Gamma(a)``.

    Series for the lower function when ``x < a + 1``, continued fraction for
    the upper function otherwise. For ``a <= 0.2`` the series region uses a
    direct expansion of Q so that small upper tails keep relative accuracy.

    Parameters
    ----------
    a : float or array_like
        Shape, ``a > 0``.
    x : float or array_like
        Argument, ``x >= 0``. Broadcast against `a`.

    Returns
    -------
    float or ndarray
        Survival function of a unit-rate Gamma(a) variable evaluated at `x`.
    """
    _, q = _incomplete(a, x)
    if np.ndim(a) == 0 and np.ndim(x) == 0:
        return float(q)
    return q


def reg_lower_gamma_p(a, x):
    """Regularized lower incomplete gamma ``P(a, x) = 1 - Q(a, x)``."""
    p, _ = _incomplete(a, x)
    if np.ndim(a) == 0 and np.ndim(x) == 0:
        return float(p)
    return p
