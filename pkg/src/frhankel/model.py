"""Domain types shared by the transform, operator and diagnostics modules.

The analytic test family is the Gauss-chirp ``A t**s exp(-p t**2) exp(i c t**2 / 2)``.
It is closed under multiplication by powers of ``t``, by chirps, and under the
radial derivative ``t**-1 d/dt``; that closure is what lets the operator
identities be checked symbolically instead of by finite differences.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
import math
from typing import Iterable

import numpy as np

from .errors import DegenerateAngle, OrderOutOfRange, ValidationError

ANGLE_EPS = 1e-8
# tolerance for recognising theta as exactly n*pi or pi/2 after reduction mod 2*pi
EXACT_ANGLE_TOL = 1e-12


class AngleClass(str, Enum):
    IDENTITY = "identity"
    CLASSICAL = "classical"
    GENERIC = "generic"


@dataclass(frozen=True)
class TransformParams:
    """Order ``nu``, weight exponent ``mu`` and angle ``theta`` of the transform.

    Build instances with :func:`make_params`; it classifies the angle and
    caches ``cot``/``csc``.
    """

    nu: float
    mu: float
    theta: float
    kind: AngleClass
    cot: float
    csc: float

    @property
    def is_identity(self) -> bool:
        return self.kind is AngleClass.IDENTITY

    def with_order(self, nu: float) -> "TransformParams":
        return make_params(nu, self.mu, self.theta)


def make_params(nu: float, mu: float, theta: float) -> TransformParams:
    nu, mu, theta = float(nu), float(mu), float(theta)
    if not all(math.isfinite(v) for v in (nu, mu, theta)):
        raise ValidationError("nu, mu and theta must be finite")
    if nu < -0.5:
        raise OrderOutOfRange(f"order nu={nu} violates nu >= -1/2")
    n = round(theta / math.pi)
    if abs(theta - n * math.pi) <= EXACT_ANGLE_TOL * max(1.0, abs(theta)):
        return TransformParams(nu, mu, theta, AngleClass.IDENTITY, math.nan, math.nan)
    reduced = math.fmod(theta, 2.0 * math.pi)
    if reduced < 0:
        reduced += 2.0 * math.pi
    s = math.sin(theta)
    if abs(s) < ANGLE_EPS:
        raise DegenerateAngle(
            f"theta={theta!r} is within {ANGLE_EPS:g} of a multiple of pi"
        )
    if s < 0:
        # the kernel needs sin(theta) > 0 (principal powers of csc(theta))
        raise DegenerateAngle(f"theta={theta!r} has sin(theta) < 0; use 0 < theta < pi")
    if abs(reduced - 0.5 * math.pi) <= EXACT_ANGLE_TOL:
        return TransformParams(nu, mu, theta, AngleClass.CLASSICAL, 0.0, 1.0)
    return TransformParams(
        nu, mu, theta, AngleClass.GENERIC, math.cos(theta) / s, 1.0 / s
    )


def kernel_constant(params: TransformParams, conjugate: bool = False) -> complex:
    """``exp(i(1+nu)(theta-pi/2)) / sin(theta)**(1+mu)``; exactly 1 at pi/2.

    ``conjugate=True`` gives the constant of the inverse kernel, which is the
    complex conjugate of the forward one.
    """
    if params.is_identity:
        raise ValidationError("the identity angle has no kernel constant")
    if params.kind is AngleClass.CLASSICAL:
        return 1.0 + 0.0j
    phase = (1.0 + params.nu) * (params.theta - 0.5 * math.pi)
    mag = params.csc ** (1.0 + params.mu)
    value = mag * complex(math.cos(phase), math.sin(phase))
    return value.conjugate() if conjugate else value


class Spacing(str, Enum):
    LINEAR = "linear"
    LOG = "logarithmic"


@dataclass(frozen=True)
class RadialGrid:
    nodes: np.ndarray
    spacing: Spacing = Spacing.LINEAR

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).copy()
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValidationError("a radial grid needs at least 2 nodes")
        if not np.all(np.isfinite(nodes)) or nodes[0] <= 0:
            raise ValidationError("radial grid nodes must be finite and > 0")
        if np.any(np.diff(nodes) <= 0):
            raise ValidationError("radial grid nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "spacing", Spacing(self.spacing))

    def __len__(self):
        return self.nodes.size

    @classmethod
    def linear(cls, start: float, stop: float, n: int) -> "RadialGrid":
        return cls(np.linspace(start, stop, int(n)), Spacing.LINEAR)

    @classmethod
    def log(cls, start: float, stop: float, n: int) -> "RadialGrid":
        if start <= 0:
            raise ValidationError("logarithmic grids need start > 0")
        return cls(np.geomspace(start, stop, int(n)), Spacing.LOG)

    def __eq__(self, other):
        if not isinstance(other, RadialGrid):
            return NotImplemented
        return self.spacing == other.spacing and np.array_equal(self.nodes, other.nodes)

    def __hash__(self):
        return hash((self.spacing, self.nodes.tobytes()))


@dataclass(frozen=True)
class ComplexSignal:
    grid: RadialGrid
    values: np.ndarray
    params: TransformParams | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex).copy()
        if values.shape != (len(self.grid),):
            raise ValidationError(
                f"signal has {values.size} values for {len(self.grid)} grid nodes"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes


@dataclass(frozen=True)
class GaussChirp:
    """``amplitude * t**power * exp(-decay t**2) * exp(1j * chirp t**2 / 2)``."""

    amplitude: complex = 1.0
    power: float = 0.0
    decay: float = 0.5
    chirp: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        for name in ("power", "decay", "chirp"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.decay > 0:
            raise ValidationError(f"GaussChirp decay must be > 0, got {self.decay}")

    @property
    def exponent(self) -> complex:
        """Coefficient ``z`` of ``t**2`` in the exponent, ``-p + i c / 2``."""
        return complex(-self.decay, 0.5 * self.chirp)

    def __call__(self, t):
        return gausschirp_eval(self, t)


def gausschirp_eval(g: GaussChirp, t):
    t = np.asarray(t, dtype=float)
    t2 = t * t
    out = g.amplitude * np.power(t, g.power) * np.exp(g.exponent * t2)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class GaussChirpSum:
    """Finite sum of :class:`GaussChirp` terms.

    Terms may carry different ``(decay, chirp)`` pairs; like terms (same
    power, decay and chirp) are merged on construction and zero terms dropped.
    """

    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", _merge(self.terms))

    @classmethod
    def of(cls, *terms: GaussChirp) -> "GaussChirpSum":
        return cls(tuple(terms))

    @classmethod
    def zero(cls) -> "GaussChirpSum":
        return cls(())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for g in self.terms:
            out += gausschirp_eval(g, t)
        return out if out.ndim else complex(out)

    def __add__(self, other):
        other = as_chirp_sum(other)
        return GaussChirpSum(self.terms + other.terms)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-as_chirp_sum(other))

    def scale(self, factor: complex) -> "GaussChirpSum":
        return GaussChirpSum(
            tuple(_replace(g, amplitude=g.amplitude * factor) for g in self.terms)
        )

    def __mul__(self, other):
        if isinstance(other, (GaussChirp, GaussChirpSum)):
            other = as_chirp_sum(other)
            return GaussChirpSum(
                tuple(_product(a, b) for a in self.terms for b in other.terms)
            )
        return self.scale(complex(other))

    __rmul__ = __mul__

    def times_power(self, k: float) -> "GaussChirpSum":
        """Multiply by ``t**k``."""
        return GaussChirpSum(tuple(_replace(g, power=g.power + k) for g in self.terms))

    def times_chirp(self, a: float) -> "GaussChirpSum":
        """Multiply by ``exp(1j * a * t**2 / 2)``."""
        return GaussChirpSum(tuple(_replace(g, chirp=g.chirp + a) for g in self.terms))

    def conj(self) -> "GaussChirpSum":
        return GaussChirpSum(
            tuple(
                _replace(g, amplitude=g.amplitude.conjugate(), chirp=-g.chirp)
                for g in self.terms
            )
        )

    def radial_derivative(self, q: int = 1) -> "GaussChirpSum":
        return radial_derivative(self, q)

    def dx(self) -> "GaussChirpSum":
        """Ordinary derivative ``d/dt`` = ``t * (t**-1 d/dt)``."""
        return radial_derivative(self, 1).times_power(1.0)

    def max_chirp(self) -> float:
        return max((abs(g.chirp) for g in self.terms), default=0.0)

    def min_decay(self) -> float:
        return min((g.decay for g in self.terms), default=math.inf)


def as_chirp_sum(f) -> GaussChirpSum:
    if isinstance(f, GaussChirpSum):
        return f
    if isinstance(f, GaussChirp):
        return GaussChirpSum((f,))
    raise TypeError(f"expected GaussChirp or GaussChirpSum, got {type(f).__name__}")


def _replace(g: GaussChirp, **changes) -> GaussChirp:
    return GaussChirp(
        changes.get("amplitude", g.amplitude),
        changes.get("power", g.power),
        changes.get("decay", g.decay),
        changes.get("chirp", g.chirp),
    )


def _product(a: GaussChirp, b: GaussChirp) -> GaussChirp:
    return GaussChirp(
        a.amplitude * b.amplitude, a.power + b.power, a.decay + b.decay, a.chirp + b.chirp
    )


def _merge(terms: Iterable[GaussChirp]) -> tuple:
    acc: "OrderedDict[tuple, complex]" = OrderedDict()
    for g in terms:
        if not isinstance(g, GaussChirp):
            raise TypeError("GaussChirpSum terms must be GaussChirp instances")
        key = (g.power, g.decay, g.chirp)
        acc[key] = acc.get(key, 0j) + g.amplitude
    return tuple(
        GaussChirp(amp, *key) for key, amp in acc.items() if amp != 0
    )


def radial_derivative(g, q: int) -> GaussChirpSum:
    """Apply ``(t**-1 d/dt)**q`` exactly.

    Uses ``(t**-1 D)[t**s e^{z t^2}] = (s t**(s-2) + 2 z t**s) e^{z t^2}``
    with ``z = -p + i c / 2``.
    """
    if q < 0:
        raise ValidationError("derivative order must be nonnegative")
    f = as_chirp_sum(g)
    for _ in range(int(q)):
        out = []
        for term in f.terms:
            if term.power != 0:
                out.append(_replace(term, amplitude=term.amplitude * term.power,
                                    power=term.power - 2.0))
            out.append(_replace(term, amplitude=term.amplitude * 2.0 * term.exponent))
        f = GaussChirpSum(tuple(out))
    return f


def oracle_family(params: TransformParams, decay: float, chirp: float | None = None,
                  amplitude: complex = 1.0, order: float | None = None) -> GaussChirpSum:
    """``t**(nu-mu) exp(-decay t**2) exp(i chirp t**2/2)``; chirp defaults to ``-cot``.

    This is the input family whose transform has a closed form.
    """
    nu = params.nu if order is None else order
    if chirp is None:
        chirp = -params.cot if not params.is_identity else 0.0
    return GaussChirpSum.of(GaussChirp(amplitude, nu - params.mu, decay, chirp))


def grid_from_spec(text: str) -> RadialGrid:
    """Parse ``min:max:n`` or ``min:max:n:log``."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ValidationError(f"grid spec {text!r} is not min:max:n[:log]")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError(f"grid spec {text!r}: {exc}") from None
    if len(parts) == 4:
        if parts[3] not in ("log", "lin", "linear"):
            raise ValidationError(f"unknown grid spacing {parts[3]!r}")
        if parts[3] == "log":
            return RadialGrid.log(lo, hi, n)
    return RadialGrid.linear(lo, hi, n)
