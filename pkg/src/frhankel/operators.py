r"""The operator :math:`M_{\nu,\mu,\theta}` and pointwise operator identities.

.. math::

    M_{\nu,\mu,\theta} = -e^{-ix^2\cot\theta/2} x^{\nu-\mu} D_x\,
        e^{ix^2\cot\theta/2} x^{\mu-\nu}

acts exactly on Gauss-chirp sums.  The identity checks compare a symbolic
side against an independent quadrature side at a few probe points.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Optional, Sequence

import numpy as np

from .errors import ValidationError
from .frht import LazyTransform, transform_chirp_sum
from .model import AngleClass, GaussChirpSum, TransformParams, as_chirp_sum, radial_derivative
from .quadrature import QuadratureSpec

__all__ = [
    "MOperatorChain",
    "LemmaPart",
    "apply_M",
    "apply_M_chain",
    "lemma_i_rhs",
    "verify_lemma_1_7",
    "leibniz_defect",
]

DEFAULT_PROBES = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class MOperatorChain:
    """``M_{nu+k-1} ... M_{nu}``, innermost order first.

    ``sign=-1`` builds the chain for angle ``-theta`` (cot flips sign).
    """

    params: TransformParams
    length: int
    sign: int = 1

    def __post_init__(self):
        if self.length < 0:
            raise ValidationError("chain length must be nonnegative")
        if self.sign not in (1, -1):
            raise ValidationError("sign must be +1 or -1")
        if self.params.is_identity:
            raise ValidationError("M is defined for Generic or Classical angles")

    @property
    def order_offsets(self):
        return tuple(self.params.nu + j for j in range(self.length))


def apply_M(order: float, mu: float, cot: float, f) -> GaussChirpSum:
    f = as_chirp_sum(f)
    inner = f.times_chirp(cot).times_power(mu - order)
    return -inner.dx().times_power(order - mu).times_chirp(-cot)


def apply_M_chain(chain: MOperatorChain, f) -> GaussChirpSum:
    cot = chain.sign * chain.params.cot
    out = as_chirp_sum(f)
    for order in chain.order_offsets:
        out = apply_M(order, chain.params.mu, cot, out)
    return out


def lemma_i_rhs(params: TransformParams, f, k: int, sign: int = 1) -> GaussChirpSum:
    """``(-1)^k x^(nu-mu+k) e^(-i x^2 cot/2) (x^-1 D)^k [e^(i x^2 cot/2) x^(mu-nu) f]``."""
    cot = sign * params.cot
    inner = as_chirp_sum(f).times_chirp(cot).times_power(params.mu - params.nu)
    out = radial_derivative(inner, k)
    return out.times_power(params.nu - params.mu + k).times_chirp(-cot).scale((-1) ** k)


class LemmaPart(str, Enum):
    I = "i"
    II = "ii"
    III = "iii"


def _relative(lhs, rhs, abs_tol):
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    return float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), abs_tol)))


def _inverse_at(params, order, f, y, spec):
    return LazyTransform(params.with_order(order), f, spec, conjugate=True)(y)


def verify_lemma_1_7(part, params: TransformParams, psi, q: int = 0, k: int = 0,
                     probe_points: Sequence[float] = DEFAULT_PROBES,
                     spec: Optional[QuadratureSpec] = None) -> float:
    """Maximum relative defect of one part of the M-operator lemma.

    * ``i``: the chain of length ``k`` against the closed radial-derivative
      form, both symbolic.
    * ``ii``: the chain of length ``q`` applied to the exact inverse transform
      of ``psi`` against ``(csc e^{i(theta-pi/2)})^q`` times the quadrature
      inverse of order ``nu+q`` of ``x^q psi``.  ``psi`` must have terms of
      power ``nu - mu`` so its inverse transform is known in closed form.
    * ``iii``: quadrature inverse of order ``nu+q+k`` of ``x^q`` times the
      ``-theta`` chain applied to ``psi``, against
      ``(y csc e^{-i(theta-pi/2)})^k`` times the order ``nu+q`` inverse of
      ``x^q psi``.
    """
    part = LemmaPart(part)
    spec = spec or QuadratureSpec()
    psi = as_chirp_sum(psi)
    y = np.asarray(probe_points, dtype=float)
    if np.any(y <= 0):
        raise ValidationError("probe points must be positive")
    if params.is_identity:
        raise ValidationError("the lemma needs a Generic or Classical angle")
    classical = params.kind is AngleClass.CLASSICAL
    phase = 1.0 if classical else np.exp(1j * (params.theta - 0.5 * np.pi))

    if part is LemmaPart.I:
        if k < 1:
            raise ValidationError("part (i) needs k >= 1")
        lhs = apply_M_chain(MOperatorChain(params, k), psi)(y)
        rhs = lemma_i_rhs(params, psi, k)(y)
        return _relative(lhs, rhs, spec.abs_tol)

    if part is LemmaPart.II:
        if q < 1:
            raise ValidationError("part (ii) needs q >= 1")
        exact = transform_chirp_sum(params, psi, conjugate=True)
        lhs = apply_M_chain(MOperatorChain(params, q), exact)(y)
        factor = (params.csc * phase) ** q
        rhs = factor * _inverse_at(params, params.nu + q, psi.times_power(q), y, spec)
        return _relative(lhs, rhs, spec.abs_tol)

    if q < 1 or k < 1:
        raise ValidationError("part (iii) needs q, k >= 1")
    chained = apply_M_chain(MOperatorChain(params, k, sign=-1), psi).times_power(q)
    lhs = _inverse_at(params, params.nu + q + k, chained, y, spec)
    factor = (y * params.csc * np.conj(phase)) ** k
    rhs = factor * _inverse_at(params, params.nu + q, psi.times_power(q), y, spec)
    return _relative(lhs, rhs, spec.abs_tol)


def leibniz_defect(params: TransformParams, f, g, n: int,
                   probe_points: Sequence[float] = DEFAULT_PROBES) -> float:
    """Product-rule defect for ``(t^-1 D)^n [e^(-i t^2 cot/2) t^(mu-nu) f g]``."""
    if not 0 <= n <= 6:
        raise ValidationError("Leibniz check supports 0 <= n <= 6")
    t = np.asarray(probe_points, dtype=float)
    cot = 0.0 if params.is_identity else params.cot
    left = as_chirp_sum(f).times_chirp(-cot).times_power(params.mu - params.nu)
    g = as_chirp_sum(g)
    lhs = radial_derivative(left * g, n)(t)
    rhs = np.zeros_like(lhs)
    for r in range(n + 1):
        rhs = rhs + comb(n, r) * radial_derivative(left, r)(t) * radial_derivative(g, n - r)(t)
    return _relative(lhs, rhs, 1e-300) if np.any(lhs) or np.any(rhs) else 0.0
