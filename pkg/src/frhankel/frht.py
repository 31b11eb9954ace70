r"""Forward and inverse fractional Hankel transform.

.. math::

    \tilde f^\theta(\omega) = \int_0^\infty K^\theta(t, \omega) f(t)\,dt,\qquad
    K^\theta(t,\omega) = C\,e^{i(t^2+\omega^2)\cot\theta/2}
        (t\omega\csc\theta)^{-\mu} J_\nu(t\omega\csc\theta)\,t^{1+2\mu}

with :math:`C = e^{i(1+\nu)(\theta-\pi/2)}/\sin^{1+\mu}\theta`.  The inverse uses
the conjugate kernel (and conjugate constant) with the weight on the
integration variable.

Output nodes are integrated in fixed chunks that share one set of panels
(a vector-valued integral), so results do not depend on the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    IdentityAngle,
    NoConvergence,
    ParameterUnsupported,
    TruncationFailure,
    UnsupportedFamily,
    ValidationError,
)
from .model import (
    ComplexSignal,
    GaussChirp,
    GaussChirpSum,
    RadialGrid,
    TransformParams,
    as_chirp_sum,
    kernel_constant,
)
from .quadrature import QuadratureSpec, integrate
from .specialfn import scaled_bessel

__all__ = [
    "KernelPoint",
    "kernel",
    "kernel_matrix",
    "forward",
    "inverse",
    "forward_lazy",
    "inverse_lazy",
    "transform_chirp_sum",
    "LazyTransform",
    "oracle_forward",
    "oracle_inverse",
    "parseval_defect",
    "parseval_defects",
    "weighted_inner",
]

CHUNK = 64


@dataclass(frozen=True)
class KernelPoint:
    params: TransformParams
    t: float
    omega: float
    value: complex


def kernel_matrix(params: TransformParams, t, omega, conjugate: bool = False):
    """Kernel values ``K(t_j, omega_i)`` as an array of shape ``(len(omega), len(t))``.

    ``t`` is the integration variable and carries the weight ``t**(1+2mu)``.
    With ``conjugate=True`` this is the inverse kernel.
    """
    if params.is_identity:
        raise IdentityAngle("kernel at theta = n*pi is a delta distribution")
    t = np.asarray(t, dtype=float)
    omega = np.asarray(omega, dtype=float)
    nu, mu = params.nu, params.mu
    x = omega[:, None] * params.csc * t[None, :]
    # (t w csc)^-mu J_nu(.) t^(1+2mu) = t^(1+nu+mu) (w csc)^(nu-mu) S_nu(x)
    radial = (
        np.power(t, 1.0 + nu + mu)[None, :]
        * np.power(omega * params.csc, nu - mu)[:, None]
        * scaled_bessel(nu, x)
    )
    if params.cot != 0.0:
        phase = 0.5 * params.cot * (t[None, :] ** 2 + omega[:, None] ** 2)
        if conjugate:
            phase = -phase
        radial = radial * np.exp(1j * phase)
    return kernel_constant(params, conjugate) * radial


def kernel(params: TransformParams, t: float, omega: float) -> complex:
    """Pointwise forward kernel ``K^theta(t, omega)``."""
    if not (t > 0 and omega > 0):
        raise ValidationError("kernel arguments must be positive")
    return complex(kernel_matrix(params, [t], [omega])[0, 0])


# -- input adapters ---------------------------------------------------------


@dataclass(frozen=True)
class _Input:
    func: Callable[[np.ndarray], np.ndarray]
    radius: Optional[float]  # integration stops here (sampled inputs)
    chirp: float  # local chirp rate estimate, coefficient of i t^2 / 2
    power: float  # leading power of t near 0, for integrability checks
    zero: bool = False


def _spline_in_u(signal: ComplexSignal):
    u = 0.5 * signal.nodes**2
    spline = CubicSpline(u, signal.values, bc_type="natural", extrapolate=True)
    last = signal.nodes[-1]

    def func(t):
        t = np.asarray(t, dtype=float)
        out = spline(0.5 * t * t)
        return np.where(t <= last, out, 0.0)

    return func


def _adapt(f) -> _Input:
    if isinstance(f, (GaussChirp, GaussChirpSum)):
        f = as_chirp_sum(f)
        if f.is_zero:
            return _Input(f, None, 0.0, 0.0, zero=True)
        chirp = max((g.chirp for g in f.terms), key=abs)
        power = min(g.power for g in f.terms)
        return _Input(f, None, chirp, power)
    if isinstance(f, ComplexSignal):
        if not np.any(f.values):
            return _Input(_spline_in_u(f), f.nodes[-1], 0.0, 0.0, zero=True)
        return _Input(_spline_in_u(f), float(f.nodes[-1]), 0.0, 0.0)
    if isinstance(f, LazyTransform):
        if len(f.inputs) != 1:
            raise ValidationError("a multi-input lazy transform cannot be an input")
        chirp = 0.0 if f.params.is_identity else (
            -f.params.cot if f.conjugate else f.params.cot
        )
        return _Input(f, None, chirp, 0.0, zero=f.inputs[0].zero)
    if callable(f):
        return _Input(f, None, 0.0, 0.0)
    raise ValidationError(f"cannot transform object of type {type(f).__name__}")


def _check_integrable(params: TransformParams, inp: _Input):
    total = 1.0 + params.nu + params.mu + inp.power
    if total <= -1.0:
        raise ParameterUnsupported(
            f"integrand behaves like t^{total:g} at 0 and is not integrable"
        )


class LazyTransform:
    """Transform evaluated on demand at arbitrary nodes.

    Calling the object with an array of nodes returns the transform values
    there (shape ``(n,)``, or ``(len(inputs), n)`` for several inputs).  It is
    used where a transform is itself integrated, so no interpolation error
    enters.
    """

    def __init__(self, params: TransformParams, inputs, spec: QuadratureSpec,
                 conjugate: bool = False, workers: int = 1):
        self.params = params
        self.single = not isinstance(inputs, (list, tuple))
        raw = [inputs] if self.single else list(inputs)
        self.inputs = [_adapt(f) for f in raw]
        self._raw = raw
        self.spec = spec
        self.conjugate = conjugate
        self.workers = max(1, int(workers))
        self.stats = {"max_error_estimate": 0.0, "panels": 0, "integrals": 0}
        if not params.is_identity:
            for inp in self.inputs:
                _check_integrable(params, inp)

    def _chunk(self, omega: np.ndarray) -> np.ndarray:
        params = self.params
        live = [i for i, inp in enumerate(self.inputs) if not inp.zero]
        out = np.zeros((len(self.inputs), omega.size), dtype=complex)
        if not live:
            return out
        kchirp = -params.cot if self.conjugate else params.cot
        rate = max(abs(kchirp + self.inputs[i].chirp) for i in live)
        wmax = float(omega.max()) * params.csc

        def freq(t):
            return rate * t + wmax

        radii = {self.inputs[i].radius for i in live}
        radius = max(radii) if None not in radii else None
        spec = self.spec.with_radius(radius) if radius is not None else self.spec
        funcs = [self.inputs[i].func for i in live]

        def integrand(t):
            k = kernel_matrix(params, t, omega, self.conjugate)
            vals = np.stack([np.asarray(f(t), dtype=complex) for f in funcs])
            return (vals[:, None, :] * k[None, :, :]).reshape(-1, t.size)

        ctx = {"omega": omega.tolist(), "inverse": self.conjugate}
        try:
            res = integrate(integrand, spec, frequency=freq, context=ctx)
        except (NoConvergence, TruncationFailure) as exc:
            exc.context.setdefault("omega", omega.tolist())
            raise
        out[live] = np.asarray(res.value).reshape(len(live), omega.size)
        self._record(res)
        return out

    def _record(self, res):
        st = self.stats
        st["max_error_estimate"] = max(st["max_error_estimate"], res.error_estimate)
        st["panels"] = max(st["panels"], res.panels_used)
        st["integrals"] += 1

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        shape = omega.shape
        flat = omega.ravel()
        if np.any(flat <= 0):
            raise ValidationError("transform nodes must be positive")
        if self.params.is_identity:
            vals = np.stack([np.asarray(inp.func(flat), dtype=complex)
                             for inp in self.inputs])
        else:
            order = np.argsort(flat, kind="stable")
            chunks = [order[i:i + CHUNK] for i in range(0, order.size, CHUNK)]
            if self.workers > 1 and len(chunks) > 1:
                with ThreadPoolExecutor(self.workers) as pool:
                    parts = list(pool.map(lambda c: self._chunk(flat[c]), chunks))
            else:
                parts = [self._chunk(flat[c]) for c in chunks]
            vals = np.empty((len(self.inputs), flat.size), dtype=complex)
            for c, part in zip(chunks, parts):
                vals[:, c] = part
        vals = vals.reshape((len(self.inputs),) + shape)
        return vals[0] if self.single else vals


def forward_lazy(params: TransformParams, f, spec: Optional[QuadratureSpec] = None,
                 workers: int = 1) -> LazyTransform:
    return LazyTransform(params, f, spec or QuadratureSpec(), False, workers)


def inverse_lazy(params: TransformParams, F, spec: Optional[QuadratureSpec] = None,
                 workers: int = 1) -> LazyTransform:
    return LazyTransform(params, F, spec or QuadratureSpec(), True, workers)


def _on_grid(params, f, out_grid: RadialGrid, spec, conjugate, workers):
    spec = spec or QuadratureSpec()
    if params.is_identity and isinstance(f, ComplexSignal) and f.grid == out_grid:
        return ComplexSignal(out_grid, f.values, params)
    lazy = LazyTransform(params, f, spec, conjugate, workers)
    return ComplexSignal(out_grid, lazy(out_grid.nodes), params)


def forward(params: TransformParams, f: Union[ComplexSignal, GaussChirpSum],
            out_grid: RadialGrid, spec: Optional[QuadratureSpec] = None,
            workers: int = 1) -> ComplexSignal:
    """Forward transform of ``f`` sampled on ``out_grid``.

    Sampled inputs are interpolated by a natural cubic spline in
    ``u = t**2 / 2`` and the integral is truncated at the last sample.
    At the identity angle the input is returned (interpolated if needed).
    """
    return _on_grid(params, f, out_grid, spec, False, workers)


def inverse(params: TransformParams, F: Union[ComplexSignal, GaussChirpSum],
            out_grid: RadialGrid, spec: Optional[QuadratureSpec] = None,
            workers: int = 1) -> ComplexSignal:
    """Inverse transform; kernel is the conjugate of the forward kernel."""
    return _on_grid(params, F, out_grid, spec, True, workers)


# -- closed forms -----------------------------------------------------------


def _watson(params: TransformParams, p: float, chirp: float, amplitude: complex,
            conjugate: bool) -> GaussChirp:
    nu, mu = params.nu, params.mu
    kc = -params.cot if conjugate else params.cot
    P = complex(p, -0.5 * (chirp + kc))
    if not P.real > 0:
        raise ValidationError("oracle needs a positive decay")
    const = kernel_constant(params, conjugate)
    amp = amplitude * const * params.csc ** (nu - mu) * (2.0 * P) ** (-nu - 1.0)
    z = 0.5j * kc - params.csc**2 / (4.0 * P)
    return GaussChirp(amp, nu - mu, -z.real, 2.0 * z.imag)


def _oracle(params, s_extra, p, chirp, amplitude, conjugate):
    if params.is_identity:
        raise IdentityAngle("no closed form is needed at the identity angle")
    if s_extra != 0:
        raise UnsupportedFamily("closed form is only available for s_extra = 0")
    if chirp is None:
        chirp = params.cot if conjugate else -params.cot
    return GaussChirpSum.of(_watson(params, float(p), float(chirp), amplitude, conjugate))


def oracle_forward(params: TransformParams, s_extra: float = 0.0, p: float = 0.5,
                   chirp: Optional[float] = None, amplitude: complex = 1.0) -> GaussChirpSum:
    r"""Closed-form transform of ``t**(nu-mu) exp(-p t**2) exp(i c t**2/2)``.

    ``c`` defaults to ``-cot(theta)``, which cancels the kernel chirp.  With
    ``P = p - i(c + cot)/2`` the Watson integral gives

    .. math:: C e^{i\omega^2\cot\theta/2} (\omega\csc\theta)^{\nu-\mu}
              (2P)^{-\nu-1} e^{-\omega^2\csc^2\theta/(4P)}.
    """
    return _oracle(params, s_extra, p, chirp, amplitude, False)


def oracle_inverse(params: TransformParams, s_extra: float = 0.0, p: float = 0.5,
                   chirp: Optional[float] = None, amplitude: complex = 1.0) -> GaussChirpSum:
    """Closed-form inverse transform; ``c`` defaults to ``+cot(theta)``."""
    return _oracle(params, s_extra, p, chirp, amplitude, True)


def transform_chirp_sum(params: TransformParams, f: GaussChirpSum,
                        conjugate: bool = False) -> GaussChirpSum:
    """Exact transform of a sum whose terms all have power ``nu - mu``."""
    f = as_chirp_sum(f)
    out = GaussChirpSum.zero()
    for g in f.terms:
        if not math.isclose(g.power, params.nu - params.mu, rel_tol=0, abs_tol=1e-14):
            raise UnsupportedFamily(
                f"term power {g.power} differs from nu - mu = {params.nu - params.mu}"
            )
        out = out + GaussChirpSum.of(_watson(params, g.decay, g.chirp, g.amplitude, conjugate))
    return out


# -- Parseval ---------------------------------------------------------------


def _pair_integral(evaluate, pairs, weight, spec, radius, rate):
    def integrand(t):
        vals = evaluate(t)
        tw = np.power(t, weight)
        return np.stack([vals[i] * np.conj(vals[j]) * tw for i, j in pairs])

    s = spec.with_radius(radius) if radius is not None else spec
    res = integrate(integrand, s, frequency=lambda t: rate * t)
    return np.asarray(res.value).reshape(len(pairs))


def weighted_inner(params: TransformParams, fs: Sequence, pairs,
                   spec: Optional[QuadratureSpec] = None):
    """``int f_i conj(f_j) t^(1+2mu) dt`` for each ``(i, j)`` in ``pairs``."""
    spec = spec or QuadratureSpec()
    ins = [_adapt(f) for f in fs]
    if all(inp.zero for inp in ins):
        return np.zeros(len(pairs), dtype=complex)
    radii = [inp.radius for inp in ins if inp.radius is not None]
    radius = max(radii) if radii else None
    rate = 2.0 * max(abs(inp.chirp) for inp in ins)

    def evaluate(t):
        return [np.asarray(inp.func(t), dtype=complex) for inp in ins]

    return _pair_integral(evaluate, pairs, 1.0 + 2.0 * params.mu, spec, radius, rate)


def parseval_defects(params: TransformParams, fs: Sequence, pairs,
                     spec: Optional[QuadratureSpec] = None):
    """Relative Parseval defects for several pairs sharing one set of transforms.

    The transforms are evaluated lazily inside the outer integral, so the
    spectral side carries only quadrature error.
    """
    spec = spec or QuadratureSpec()
    pairs = [tuple(p) for p in pairs]
    lhs = weighted_inner(params, fs, pairs, spec)
    if params.is_identity:
        return np.zeros(len(pairs))
    lazy = LazyTransform(params, list(fs), spec, False)
    if all(inp.zero for inp in lazy.inputs):
        rhs = np.zeros(len(pairs), dtype=complex)
    else:
        # transforms of Gauss-chirps carry a chirp of rate cot, which cancels in F conj(G)
        rhs = _pair_integral(lazy, pairs, 1.0 + 2.0 * params.mu, spec, None, 0.0)
    denom = np.maximum(np.abs(lhs), spec.abs_tol)
    return np.abs(lhs - rhs) / denom


def parseval_defect(params: TransformParams, f, g,
                    spec: Optional[QuadratureSpec] = None) -> float:
    """``|<f, g> - <F, G>| / max(|<f, g>|, abs_tol)`` in the weighted inner product."""
    return float(parseval_defects(params, [f, g], [(0, 1)], spec)[0])
