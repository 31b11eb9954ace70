r"""The translation kernel :math:`D^\theta_{\nu,\mu}` and the translation :math:`\tau^\theta_t`.

With :math:`j(x) = x^{-\mu}J_\nu(x)` and :math:`\sigma = s\csc\theta` the kernel is

.. math::

    D(t,\omega,z) = \bar C e^{-i(z^2+t^2+\omega^2)\cot\theta/2}
        \int_0^\infty j(z\sigma) j(t\sigma) j(\omega\sigma) s^{1+3\mu-\nu}\,ds .

The s-integral is only conditionally convergent, so :func:`d_kernel` damps it
with :math:`e^{-\varepsilon s^2}` and Richardson-extrapolates in
:math:`\varepsilon`.  :func:`translate` instead integrates over ``z`` first
(the z-chirps cancel), which leaves an absolutely convergent integral

.. math::

    \tau_t\psi(\omega) = |C|^2 e^{-i(t^2+\omega^2)\cot\theta/2}
        \int_0^\infty j(t\sigma) j(\omega\sigma) s^{1+3\mu-\nu}\Phi(s)\,ds,\qquad
    \Phi(s) = \int_0^\infty \psi(z) j(z\sigma) z^{\mu+\nu+1}\,dz .
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Chebyshev

from .errors import ParameterUnsupported, ValidationError
from .frht import LazyTransform, transform_chirp_sum
from .model import ComplexSignal, RadialGrid, TransformParams, as_chirp_sum, kernel_constant
from .quadrature import QuadratureSpec, integrate
from .specialfn import scaled_bessel

__all__ = [
    "TranslationKernelPoint",
    "PhiFunction",
    "d_kernel",
    "translate",
    "translation_values",
]

DEFAULT_EPS = 1e-3
# two levels leave an O(eps^2) error near 1e-5 at eps = 1e-3; three remove it
RICHARDSON_LEVELS = 3
MAX_NODES = 32


@dataclass(frozen=True)
class TranslationKernelPoint:
    params: TransformParams
    t: float
    omega: float
    z: float
    value: complex


def _check(params: TransformParams):
    if params.is_identity:
        raise ValidationError("translation needs a Generic or Classical angle")
    if 1.0 + 3.0 * params.mu - params.nu <= -1.0:
        raise ParameterUnsupported("translation needs 1 + 3 mu - nu > -1")


def _j(params, x):
    """``x^(nu-mu) S_nu(x)`` = ``x^-mu J_nu(x)``."""
    return np.power(x, params.nu - params.mu) * scaled_bessel(params.nu, x)


def d_kernel(params: TransformParams, t: float, omega: float, z,
             spec: Optional[QuadratureSpec] = None, eps: float = DEFAULT_EPS,
             levels: int = RICHARDSON_LEVELS):
    """Translation kernel value(s); ``z`` may be an array.

    The damped integral is computed at ``eps, eps/2, ..., eps/2**(levels-1)``
    and Richardson-extrapolated to ``eps -> 0`` assuming an expansion in
    integer powers of ``eps``.  ``levels=1`` returns the damped value itself.
    """
    _check(params)
    spec = spec or QuadratureSpec()
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    if not (t > 0 and omega > 0 and np.all(zs > 0)):
        raise ValidationError("kernel arguments must be positive")
    csc = params.csc
    power = 1.0 + 3.0 * params.mu - params.nu
    if levels < 1:
        raise ValidationError("need at least one damping level")
    epsilons = tuple(eps * 0.5**k for k in range(levels))

    def integrand(s):
        sig = s * csc
        common = _j(params, t * sig) * _j(params, omega * sig) * np.power(s, power)
        jz = _j(params, zs[:, None] * sig[None, :])
        rows = [jz * (common * np.exp(-e * s * s))[None, :] for e in epsilons]
        return np.concatenate(rows, axis=0)

    freq = (t + omega + float(zs.max())) * csc
    res = integrate(integrand, spec, frequency=freq,
                    context={"t": t, "omega": omega, "eps": eps})
    vals = np.asarray(res.value).reshape(len(epsilons), zs.size)
    value = _richardson(vals)
    chirp = np.exp(-0.5j * params.cot * (zs**2 + t * t + omega * omega))
    out = kernel_constant(params, conjugate=True) * chirp * value
    return out if np.ndim(z) else complex(out[0])


def _richardson(rows: np.ndarray) -> np.ndarray:
    """Extrapolate rows computed at eps / 2**k to eps -> 0."""
    table = [np.asarray(r) for r in rows]
    for order in range(1, len(table)):
        f = 2.0**order
        table = [(f * table[i + 1] - table[i]) / (f - 1.0) for i in range(len(table) - 1)]
    return table[0]


class PhiFunction:
    r""":math:`\Phi(s) = \int_0^\infty \psi(z) j(zs\csc\theta) z^{\mu+\nu+1} dz`.

    Uses, in order of preference: the Watson closed form (every term of
    ``psi`` has power 0), a Chebyshev interpolant in ``u = s^2/2`` of the
    smooth factor ``E(s) = Phi(s) / (s csc)^(nu-mu)``, or direct quadrature.
    """

    def __init__(self, params: TransformParams, psi, spec: Optional[QuadratureSpec] = None,
                 interpolate: bool = True):
        _check(params)
        self.params = params
        self.psi = as_chirp_sum(psi)
        self.spec = spec or QuadratureSpec()
        self.zero = self.psi.is_zero
        # z^(nu-mu) e^(-i z^2 cot/2) psi; its forward transform is C e^(i s^2 cot/2) Phi
        self._modified = self.psi.times_power(params.nu - params.mu).times_chirp(-params.cot)
        self.mode = "zero"
        if not self.zero:
            if all(g.power == 0.0 for g in self.psi.terms):
                self.mode = "closed"
                self._closed = transform_chirp_sum(params, self._modified)
            else:
                self._lazy = LazyTransform(params, self._modified, self.spec)
                self.mode = "quadrature"
                if interpolate:
                    self._build_chebyshev()

    def _smooth_direct(self, s):
        """``E(s)`` by quadrature."""
        p = self.params
        vals = self._lazy(s) * np.exp(-0.5j * p.cot * s * s) / kernel_constant(p)
        return vals / np.power(s * p.csc, p.nu - p.mu)

    def _build_chebyshev(self, tol: float = 1e-11):
        # cut-off where the envelope has decayed below tol relative to its peak
        probe = np.linspace(0.25, 64.0, 256)
        env = np.abs(self._smooth_direct(probe))
        peak = env.max()
        alive = np.nonzero(env > tol * peak)[0]
        smax = probe[min(alive[-1] + 1, probe.size - 1)] if alive.size else probe[0]
        umax = 0.5 * smax * smax

        def func(u):
            s = np.sqrt(2.0 * np.maximum(u, 1e-300))
            return self._smooth_direct(s)

        deg = 16
        while True:
            re = Chebyshev.interpolate(lambda u: func(u).real, deg, domain=[0.0, umax])
            im = Chebyshev.interpolate(lambda u: func(u).imag, deg, domain=[0.0, umax])
            tail = max(np.abs(re.coef[-4:]).max(), np.abs(im.coef[-4:]).max())
            if tail <= tol * peak or deg >= 512:
                break
            deg *= 2
        self._cheb = (re, im, umax)
        self.mode = "chebyshev"

    def smooth(self, s):
        """``E(s)``, the factor left after removing ``(s csc)^(nu-mu)``."""
        s = np.asarray(s, dtype=float)
        p = self.params
        if self.mode == "zero":
            return np.zeros(s.shape, dtype=complex)
        if self.mode == "closed":
            vals = self._closed(s) * np.exp(-0.5j * p.cot * s * s) / kernel_constant(p)
            return vals / np.power(s * p.csc, p.nu - p.mu)
        if self.mode == "chebyshev":
            re, im, umax = self._cheb
            u = 0.5 * s * s
            out = re(u) + 1j * im(u)
            return np.where(u <= umax, out, 0.0)
        return self._smooth_direct(s)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        p = self.params
        return np.power(s * p.csc, p.nu - p.mu) * self.smooth(s)


def translation_values(params: TransformParams, phi: PhiFunction, t, omega,
                       spec: Optional[QuadratureSpec] = None) -> np.ndarray:
    """``tau_t psi(omega)`` for paired arrays ``t``, ``omega`` (one shared s-integral)."""
    spec = spec or QuadratureSpec()
    t = np.atleast_1d(np.asarray(t, dtype=float))
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if t.shape != omega.shape:
        raise ValidationError("t and omega must pair up")
    if phi.zero or t.size == 0:
        return np.zeros(t.shape, dtype=complex)
    csc = params.csc
    nu, mu = params.nu, params.mu
    # j(t sig) j(w sig) s^(1+3mu-nu) Phi(s)
    #   = (t w)^(nu-mu) csc^(3(nu-mu)) s^(1+2nu) S(t sig) S(w sig) E(s)
    pref = np.power(t * omega, nu - mu) * csc ** (3.0 * (nu - mu))

    def integrand(s):
        sig = s * csc
        base = np.power(s, 1.0 + 2.0 * nu) * phi.smooth(s)
        st = scaled_bessel(nu, t[:, None] * sig[None, :])
        sw = scaled_bessel(nu, omega[:, None] * sig[None, :])
        return st * sw * base[None, :]

    freq = float((t + omega).max()) * csc
    res = integrate(integrand, spec, frequency=freq, context={"t": t.tolist()})
    value = pref * np.asarray(res.value).reshape(t.shape)
    mag = abs(kernel_constant(params)) ** 2
    return mag * np.exp(-0.5j * params.cot * (t * t + omega * omega)) * value


def translate(params: TransformParams, psi, t: float, omega_grid: RadialGrid,
              spec: Optional[QuadratureSpec] = None, max_nodes: int = MAX_NODES,
              phi: Optional[PhiFunction] = None) -> ComplexSignal:
    """Fractional Hankel translation ``tau_t psi`` on ``omega_grid``."""
    _check(params)
    if not t > 0:
        raise ValidationError("translation parameter t must be positive")
    if len(omega_grid) > max_nodes:
        raise ValidationError(
            f"translation grid has {len(omega_grid)} nodes (cap {max_nodes})"
        )
    spec = spec or QuadratureSpec()
    phi = phi or PhiFunction(params, psi, spec)
    w = omega_grid.nodes
    vals = translation_values(params, phi, np.full(w.shape, float(t)), w, spec)
    return ComplexSignal(omega_grid, vals, params)
