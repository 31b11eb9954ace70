"""Adaptive panel quadrature on (0, R] and (0, inf).

Each panel uses the 15-point Kronrod rule with its embedded 7-point
Gauss-Legendre rule; the difference of the two is the panel error estimate.
Panels that fail their share of the tolerance are bisected, all at once per
sweep, so the integrand is called with large batches of abscissae.

Integrands may be vector valued: ``f(t)`` returning shape ``(m, len(t))``
integrates ``m`` functions over one shared set of panels.  Refinement stops
when every component meets ``max(abs_tol, rel_tol * |value|)``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Callable, Optional, Union

import numpy as np

from .errors import NoConvergence, TruncationFailure, ValidationError

__all__ = ["QuadratureSpec", "QuadratureResult", "integrate"]

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
# Gauss nodes sit at odd positions 1, 3, ..., 13 of NODES
GAUSS_WEIGHTS = np.concatenate([_WG[:-1], [_WG[-1]], _WG[-2::-1]])
_GAUSS_INDEX = np.arange(1, 15, 2)

R0 = 8.0
RADIUS_CAP = 1.0e4
BASE_WIDTH = 1.0
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and truncation policy.

    ``radius=None`` means auto-decay truncation: start at ``R0 = 8`` and
    double while the outermost eighth of the range still contributes.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_panels: int = 4096
    radius: Optional[float] = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValidationError("quadrature tolerances must be positive")
        if self.max_panels < 1:
            raise ValidationError("max_panels must be positive")
        if self.radius is not None and not self.radius > 0:
            raise ValidationError("fixed truncation radius must be positive")

    @property
    def truncation(self):
        return "auto_decay" if self.radius is None else ("fixed_radius", self.radius)

    @classmethod
    def fixed(cls, radius: float, **kw) -> "QuadratureSpec":
        return cls(radius=float(radius), **kw)

    def with_radius(self, radius: Optional[float]) -> "QuadratureSpec":
        return QuadratureSpec(self.rel_tol, self.abs_tol, self.max_panels, radius)


@dataclass(frozen=True)
class QuadratureResult:
    value: Union[complex, np.ndarray]
    error_estimate: float
    panels_used: int
    truncation_radius: float


Frequency = Union[None, float, Callable[[float], float]]


def _local_frequency(frequency: Frequency, t: float) -> float:
    if frequency is None:
        return 0.0
    if callable(frequency):
        return float(np.max(frequency(np.asarray([t], dtype=float))))
    return float(frequency)


def _partition(a: float, b: float, frequency: Frequency) -> np.ndarray:
    """Breakpoints with widths capped at max(1, x/8) and a quarter local wavelength."""
    breaks = [a]
    x = a
    while x < b:
        w = min(max(BASE_WIDTH, 0.125 * x), b - x)
        for _ in range(2):
            f = max(_local_frequency(frequency, x), _local_frequency(frequency, x + w))
            if f > 0:
                w = min(w, 0.5 * math.pi / f)
        x = b if b - (x + w) < 1e-9 * w else x + w
        breaks.append(x)
    return np.asarray(breaks)


class _Panels:
    """Panel store for one integration; columns are panels."""

    def __init__(self, integrand, ncomp_hint=None):
        self.f = integrand
        self.lo = np.empty(0)
        self.hi = np.empty(0)
        self.k = None  # (m, P) Kronrod estimates
        self.err = None  # (m, P) |K - G|
        self.l1 = None  # (m, P) Kronrod estimate of integral of |f|
        self.scalar = None

    def _evaluate(self, lo, hi):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        t = (mid[:, None] + half[:, None] * NODES[None, :]).ravel()
        vals = np.asarray(self.f(t), dtype=complex)
        if vals.ndim == 1:
            if self.scalar is None:
                self.scalar = True
            vals = vals[None, :]
        elif self.scalar is None:
            self.scalar = False
        vals = vals.reshape(vals.shape[0], lo.size, NODES.size)
        if not np.all(np.isfinite(vals)):
            raise ValidationError("integrand returned non-finite values")
        k = (vals @ KRONROD_WEIGHTS) * half
        g = (vals[:, :, _GAUSS_INDEX] @ GAUSS_WEIGHTS) * half
        l1 = (np.abs(vals) @ KRONROD_WEIGHTS) * np.abs(half)
        return k, np.abs(k - g), l1

    def add(self, lo, hi):
        k, err, l1 = self._evaluate(lo, hi)
        if self.k is None:
            self.lo, self.hi, self.k, self.err, self.l1 = lo, hi, k, err, l1
        else:
            self.lo = np.concatenate([self.lo, lo])
            self.hi = np.concatenate([self.hi, hi])
            self.k = np.concatenate([self.k, k], axis=1)
            self.err = np.concatenate([self.err, err], axis=1)
            self.l1 = np.concatenate([self.l1, l1], axis=1)

    def replace(self, keep, lo, hi):
        self.lo, self.hi = self.lo[keep], self.hi[keep]
        self.k, self.err, self.l1 = self.k[:, keep], self.err[:, keep], self.l1[:, keep]
        self.add(lo, hi)

    @property
    def count(self):
        return self.lo.size

    def totals(self):
        # sort by position so the summation order is independent of refinement history
        order = np.argsort(self.lo, kind="stable")
        return self.k[:, order].sum(axis=1), self.err[:, order].sum(axis=1)


def _tolerance(spec: QuadratureSpec, total: np.ndarray) -> np.ndarray:
    return np.maximum(spec.abs_tol, spec.rel_tol * np.abs(total))


def _refine(panels: _Panels, spec: QuadratureSpec, context):
    while True:
        total, err = panels.totals()
        tol = _tolerance(spec, total)
        if np.all(err <= tol):
            return
        length = np.sum(panels.hi - panels.lo)
        share = tol[:, None] * (panels.hi - panels.lo)[None, :] / length
        floor = 50.0 * _EPS * panels.l1
        bad = np.any((panels.err > share) & (panels.err > floor), axis=0)
        if not np.any(bad):
            return  # remaining error is at the rounding floor
        if panels.count + np.count_nonzero(bad) > spec.max_panels:
            value = total if not panels.scalar else complex(total[0])
            raise NoConvergence(
                f"panel budget {spec.max_panels} exhausted "
                f"(error {float(np.max(err)):.3e} > tolerance)",
                value=value,
                error_estimate=float(np.max(err)),
                context=context,
            )
        lo, hi = panels.lo[bad], panels.hi[bad]
        mid = 0.5 * (lo + hi)
        panels.replace(~bad, np.concatenate([lo, mid]), np.concatenate([mid, hi]))


def integrate(
    integrand: Callable[[np.ndarray], np.ndarray],
    spec: Optional[QuadratureSpec] = None,
    *,
    frequency: Frequency = None,
    context: Optional[dict] = None,
) -> QuadratureResult:
    """Integrate ``integrand`` over ``(0, inf)`` or ``(0, R]``.

    Parameters
    ----------
    integrand : callable
        Maps a 1-D array of abscissae to values of shape ``(n,)`` or ``(m, n)``.
    spec : QuadratureSpec, optional
    frequency : float or callable, optional
        Bound on the local angular frequency of the integrand; panels are kept
        no wider than a quarter of the local wavelength.
    context : dict, optional
        Attached to raised errors (e.g. the output node being computed).

    Raises
    ------
    NoConvergence
        Panel budget exhausted; carries the best value and error estimate.
    TruncationFailure
        Auto-decay radius passed 1e4 without the tail dying out.
    """
    spec = spec or QuadratureSpec()
    context = dict(context or {})
    panels = _Panels(integrand)
    radius = spec.radius if spec.radius is not None else R0
    breaks = _partition(0.0, radius, frequency)
    if breaks.size - 1 > spec.max_panels:
        raise NoConvergence(
            f"oscillation needs {breaks.size - 1} panels, budget is {spec.max_panels}",
            context=context,
        )
    panels.add(breaks[:-1], breaks[1:])
    _refine(panels, spec, context)

    if spec.radius is None:
        while True:
            total, _ = panels.totals()
            tail = panels.hi > radius * (7.0 / 8.0)
            tail_l1 = panels.l1[:, tail].sum(axis=1)
            if np.all(tail_l1 <= _tolerance(spec, total)):
                break
            if 2.0 * radius > RADIUS_CAP:
                raise TruncationFailure(
                    f"integrand tail not decaying by radius {radius:g}",
                    radius=radius,
                    context=context,
                )
            breaks = _partition(radius, 2.0 * radius, frequency)
            if panels.count + breaks.size - 1 > spec.max_panels:
                raise NoConvergence(
                    f"panel budget {spec.max_panels} exhausted while extending to "
                    f"radius {2 * radius:g}",
                    value=total,
                    context=context,
                )
            panels.add(breaks[:-1], breaks[1:])
            radius *= 2.0
            _refine(panels, spec, context)

    total, err = panels.totals()
    value = complex(total[0]) if panels.scalar else total
    return QuadratureResult(value, float(np.max(err)), panels.count, radius)
