r"""Bessel functions of the first kind for real order :math:`\nu \ge -1/2`.

Three evaluation branches are used, chosen element by element so that a
value never depends on which other arguments it was batched with:

* ascending power series for small arguments,
* Miller's backward recurrence normalised with the Neumann sum
  :math:`(x/2)^{\nu_0} = \sum_k (\nu_0 + 2k)\,\Gamma(\nu_0 + k)/k!\,J_{\nu_0+2k}(x)`,
* Hankel's asymptotic expansion for :math:`x > \max(12, 2|\nu|)`, falling
  back to the recurrence whenever the smallest asymptotic term is not
  negligible.

The scaled function :math:`x^{-\nu} J_\nu(x)` is the form used by the transform
kernels; it is computed from a series in :math:`x^2` near the origin so the
0/0 limit is never formed.
"""

from dataclasses import dataclass
import math

import numpy as np
from numba import njit

from .errors import AccuracyLoss, OrderOutOfRange, ValidationError

__all__ = ["BesselEval", "bessel_j", "scaled_bessel", "bessel_eval"]

_SERIES_TERMS = 40
_ASYMPTOTIC_TOL = 1e-16
_MILLER_MAX_X = 1.0e5
_MILLER_PAD = 20.0
_MILLER_SQRT = 4.0
_ACCURACY_LIMIT = 1e-9


@njit(cache=True)
def _scaled_series(nu, x):
    # sum_k (-x^2/4)^k / (2^nu k! Gamma(k+nu+1))
    y = -0.25 * x * x
    term = 1.0 / (math.pow(2.0, nu) * math.gamma(nu + 1.0))
    total = term
    for k in range(1, _SERIES_TERMS):
        term *= y / (k * (k + nu))
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


@njit(cache=True)
def _miller(nu, x):
    n = int(math.floor(nu))
    nu0 = nu - n
    top = max(float(n), x)
    start = int(top + _MILLER_PAD + _MILLER_SQRT * math.sqrt(top))
    if start % 2 == 1:
        start += 1
    j_next = 0.0
    j_cur = 1e-30
    norm = 0.0
    target = 0.0
    found = False
    # g = Gamma(nu0 + k) / k!, stepped downward in k
    k = start // 2
    g = math.exp(math.lgamma(nu0 + k) - math.lgamma(k + 1.0))
    for m in range(start, 0, -1):
        if m % 2 == 0:
            norm += (nu0 + 2.0 * k) * g * j_cur
            if k > 1:
                g *= k / (nu0 + k - 1.0)
            k -= 1
        if m == n:
            target = j_cur
            found = True
        j_prev = 2.0 * (nu0 + m) / x * j_cur - j_next
        j_next = j_cur
        j_cur = j_prev
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            norm *= 1e-250
            target *= 1e-250
    # j_cur is now the m = 0 member
    norm += math.gamma(nu0 + 1.0) * j_cur
    if n == 0:
        target = j_cur
    elif n == -1:
        target = 2.0 * nu0 / x * j_cur - j_next
    elif not found:
        target = 0.0
    return target * math.pow(0.5 * x, nu0) / norm


@njit(cache=True)
def _hankel_asymptotic(nu, x):
    mu4 = 4.0 * nu * nu
    p_sum = 1.0
    q_sum = 0.0
    term = 1.0
    last = 1.0
    k = 1
    while k < 200:
        term *= (mu4 - (2.0 * k - 1.0) ** 2) / (k * 8.0 * x)
        mag = abs(term)
        if mag > last:
            break
        last = mag
        if k % 2 == 1:
            q_sum += term if (k // 2) % 2 == 0 else -term
        else:
            p_sum += term if (k // 2) % 2 == 0 else -term
        if mag < _ASYMPTOTIC_TOL:
            break
        k += 1
    chi = x - (0.5 * nu + 0.25) * math.pi
    amp = math.sqrt(2.0 / (math.pi * x))
    return amp * (p_sum * math.cos(chi) - q_sum * math.sin(chi)), amp * last


@njit(cache=True)
def _jv_scalar(nu, x):
    """Return (J_nu(x), error_estimate)."""
    if x == 0.0:
        if nu == 0.0:
            return 1.0, 0.0
        if nu > 0.0:
            return 0.0, 0.0
        return math.inf, 0.0
    if x <= 2.0 or 0.25 * x * x <= 0.25 * (nu + 1.0):
        return math.pow(x, nu) * _scaled_series(nu, x), 0.0
    if x > max(12.0, 2.0 * abs(nu)):
        val, err = _hankel_asymptotic(nu, x)
        if err <= 1e-15 or x > _MILLER_MAX_X:
            return val, err
    return _miller(nu, x), 0.0


@njit(cache=True)
def _sjv_scalar(nu, x):
    """Return (x^-nu J_nu(x), error_estimate)."""
    if x <= 2.0 or 0.25 * x * x <= 0.25 * (nu + 1.0):
        return _scaled_series(nu, x), 0.0
    val, err = _jv_scalar(nu, x)
    scale = math.pow(x, -nu)
    return val * scale, err * scale


@njit(cache=True)
def _jv_array(nu, x, scaled):
    out = np.empty(x.shape[0])
    worst = 0.0
    for i in range(x.shape[0]):
        if scaled:
            v, e = _sjv_scalar(nu, x[i])
        else:
            v, e = _jv_scalar(nu, x[i])
        out[i] = v
        if e > worst:
            worst = e
    return out, worst


def _evaluate(order, x, scaled):
    order = float(order)
    if not order >= -0.5:
        raise OrderOutOfRange(f"Bessel order {order} is below -1/2")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValidationError("Bessel argument must be finite and nonnegative")
    flat = np.ascontiguousarray(arr.ravel())
    values, worst = _jv_array(order, flat, scaled)
    if worst > _ACCURACY_LIMIT:
        raise AccuracyLoss(
            f"J_{order} error estimate {worst:.2e} exceeds {_ACCURACY_LIMIT:.0e}"
        )
    values = values.reshape(arr.shape)
    return values if values.ndim else float(values)


def bessel_j(order, x):
    r"""Bessel function of the first kind :math:`J_\nu(x)`.

    Parameters
    ----------
    order : float
        Real order, at least -1/2.
    x : float or array_like
        Nonnegative arguments.

    Returns
    -------
    float or ndarray
        Same shape as ``x``.
    """
    return _evaluate(order, x, scaled=False)


def scaled_bessel(order, x):
    r""":math:`x^{-\nu} J_\nu(x)`, continued to :math:`1/(2^\nu \Gamma(\nu+1))` at 0."""
    return _evaluate(order, x, scaled=True)


@dataclass(frozen=True)
class BesselEval:
    order: float
    argument: float
    value: float
    scaled_value: float


def bessel_eval(order, x):
    x = float(x)
    return BesselEval(
        order=float(order),
        argument=x,
        value=bessel_j(order, x),
        scaled_value=scaled_bessel(order, x),
    )
