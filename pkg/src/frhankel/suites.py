"""Bundled verification sweeps.

Each suite returns a :class:`SuiteReport` listing every case with its
measured defect and threshold.  The sweeps are sized to finish in seconds
to minutes on one core.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .errors import ValidationError
from .frht import forward_lazy, inverse, oracle_forward, parseval_defects, transform_chirp_sum
from .model import (
    GaussChirp,
    GaussChirpSum,
    RadialGrid,
    kernel_constant,
    make_params,
    oracle_family,
)
from .operators import leibniz_defect, verify_lemma_1_7
from .quadrature import QuadratureSpec
from .type_s import (
    check_inequality_1_19,
    check_sequence,
    growth_trend,
    seminorm_table,
    sequence_family,
)
from .wavelet import cwt_direct_batch, cwt_spectral, decay_check

__all__ = ["CaseResult", "SuiteReport", "SUITES", "run_suite"]

PI = math.pi
SWEEP_NU = (0.0, 0.5, 1.0)
SWEEP_MU = (0.0, 0.25)
SWEEP_THETA = (PI / 4, PI / 3, PI / 2)
SWEEP_P = (0.5, 1.0)
ORACLE_PROBES = np.geomspace(0.1, 4.0, 10)
ROUNDTRIP_GRID = RadialGrid.linear(0.2, 4.0, 20)
CWT_B = (0.25, 0.5, 1.0, 2.0)
CWT_A = (0.5, 1.0, 2.0)


@dataclass(frozen=True)
class CaseResult:
    case: str
    value: float
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)
    relation: str = "<="  # how value must compare with threshold

    def as_dict(self):
        out = {"case": self.case, "value": _num(self.value), "relation": self.relation,
               "threshold": _num(self.threshold), "passed": bool(self.passed)}
        if self.details:
            out["details"] = self.details
        return out


@dataclass
class SuiteReport:
    suite: str
    cases: List[CaseResult]
    elapsed: float = 0.0
    summary: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def worst(self) -> Optional[CaseResult]:
        """First failing case, else the ``<=`` case closest to its threshold."""
        failed = [c for c in self.cases if not c.passed]
        if failed:
            return failed[0]
        finite = [c for c in self.cases if c.relation == "<=" and c.threshold > 0
                  and math.isfinite(c.value)]
        return max(finite, key=lambda c: c.value / c.threshold, default=None)

    def as_dict(self):
        return {"suite": self.suite, "passed": self.passed, "n_cases": len(self.cases),
                "elapsed_s": round(self.elapsed, 3), "summary": self.summary,
                "cases": [c.as_dict() for c in self.cases]}


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _check(case, value, threshold, **details):
    value = float(value)
    return CaseResult(case, value, threshold, bool(value <= threshold), details)


def _label(nu, mu, theta, **extra):
    parts = [f"nu={nu:g}", f"mu={mu:g}", f"theta={theta:.6g}"]
    parts += [f"{k}={v:g}" for k, v in extra.items()]
    return ",".join(parts)


def sweep(with_p: bool = True):
    """The standard (nu, mu, theta[, p]) sweep."""
    if with_p:
        return list(itertools.product(SWEEP_NU, SWEEP_MU, SWEEP_THETA, SWEEP_P))
    return list(itertools.product(SWEEP_NU, SWEEP_MU, SWEEP_THETA))


# -- transform suites -------------------------------------------------------


def suite_oracle(spec: QuadratureSpec, workers: int = 1, **_):
    cases = []
    for nu, mu, theta, p in sweep():
        P = make_params(nu, mu, theta)
        f = oracle_family(P, p)
        got = forward_lazy(P, f, spec, workers)(ORACLE_PROBES)
        want = oracle_forward(P, p=p)(ORACLE_PROBES)
        err = np.max(np.abs(got - want) / np.abs(want))
        cases.append(_check(_label(nu, mu, theta, p=p), err, 1e-8))
    return cases, {"max_relative_error": max(c.value for c in cases)}


def suite_roundtrip(spec: QuadratureSpec, workers: int = 1, **_):
    cases = []
    t = ROUNDTRIP_GRID.nodes
    for nu, mu, theta, p in sweep():
        P = make_params(nu, mu, theta)
        f = oracle_family(P, p)
        back = inverse(P, forward_lazy(P, f, spec), ROUNDTRIP_GRID, spec, workers)
        err = np.max(np.abs(back.values - f(t)) / np.abs(f(t)))
        cases.append(_check(_label(nu, mu, theta, p=p), err, 1e-6))
    return cases, {"max_relative_error": max(c.value for c in cases)}


def parseval_functions(P) -> list:
    """Four test functions; the six unordered pairs are checked.

    Powers are ``nu - mu`` plus even integers, so every transform decays
    like a Gaussian and the spectral integral stays short.
    """
    s = P.nu - P.mu
    return [
        oracle_family(P, 0.5),
        oracle_family(P, 1.0),
        GaussChirpSum.of(GaussChirp(1.0, s + 2.0, 0.75, 0.3)),
        GaussChirpSum.of(GaussChirp(0.5 - 0.25j, s + 4.0, 0.6, -0.8),
                         GaussChirp(1.0, s, 1.2, 0.0)),
    ]


def suite_parseval(spec: QuadratureSpec, **_):
    cases = []
    pairs = list(itertools.combinations(range(4), 2))
    for nu, mu, theta in sweep(with_p=False):
        P = make_params(nu, mu, theta)
        defects = parseval_defects(P, parseval_functions(P), pairs, spec)
        for (i, j), d in zip(pairs, defects):
            cases.append(_check(_label(nu, mu, theta) + f",pair=({i},{j})", d, 1e-6))
    return cases, {"max_defect": max(c.value for c in cases)}


# -- identities -------------------------------------------------------------

LEMMA_NU = (0.0, 0.5)
LEMMA_THETA = (PI / 4, PI / 3)


def lemma_psi(P):
    """Wavelet whose inverse transform is known in closed form."""
    return oracle_family(P, 0.5, chirp=P.cot)


def suite_lemma17(spec: QuadratureSpec, **_):
    cases = []
    for nu, theta in itertools.product(LEMMA_NU, LEMMA_THETA):
        P = make_params(nu, 0.0, theta)
        psi = lemma_psi(P)
        lab = _label(nu, 0.0, theta)
        for k in range(1, 5):
            d = verify_lemma_1_7("i", P, psi, k=k, spec=spec)
            cases.append(_check(f"i,{lab},k={k}", d, 1e-9))
        for q in (1, 2):
            d = verify_lemma_1_7("ii", P, psi, q=q, spec=spec)
            cases.append(_check(f"ii,{lab},q={q}", d, 1e-5))
        for q, k in itertools.product((1, 2), (1, 2)):
            d = verify_lemma_1_7("iii", P, psi, q=q, k=k, spec=spec)
            cases.append(_check(f"iii,{lab},q={q},k={k}", d, 1e-5))
    return cases, {"max_defect": max(c.value for c in cases)}


def leibniz_pairs(P):
    f = oracle_family(P, 0.5)
    return [
        (f, GaussChirpSum.of(GaussChirp(1.0, 1.0, 0.7, 0.4))),
        (GaussChirpSum.of(GaussChirp(1.0, 2.0, 0.3, -0.5)),
         GaussChirpSum.of(GaussChirp(0.3j, 0.0, 0.5, 1.0), GaussChirp(1.0, 1.0, 1.0, 0.0))),
    ]


def suite_leibniz(spec: QuadratureSpec, **_):
    cases = []
    for nu, mu, theta in sweep(with_p=False):
        P = make_params(nu, mu, theta)
        for idx, (f, g) in enumerate(leibniz_pairs(P)):
            for n in range(5):
                d = leibniz_defect(P, f, g, n)
                cases.append(_check(_label(nu, mu, theta) + f",pair={idx},n={n}", d, 1e-8))
    return cases, {"max_defect": max(c.value for c in cases)}


def suite_ineq119(**_):
    cases = []
    for m, n, q in itertools.product(range(1, 13), repeat=3):
        ok = check_inequality_1_19(m, n, q)
        cases.append(CaseResult(f"m={m},n={n},q={q}", float(not ok), 0.0, ok))
    return cases, {"cases_true": sum(c.passed for c in cases)}


# -- sequences --------------------------------------------------------------

SEQUENCE_K_MAX = 30


def _sequence_cases(name: str, k_max: int):
    rep = check_sequence(sequence_family(name), k_max)
    w = rep.worst
    lab = f"{name}"
    cases = [
        CaseResult(f"{lab},axiom1", w["axiom1"], 0.0, rep.axiom1),
        CaseResult(f"{lab},axiom2", w["axiom2"], 0.0, rep.axiom2),
        CaseResult(f"{lab},shift_bound", w["shift_bound"], 0.0, rep.shift_bound),
        CaseResult(f"{lab},axiom5", rep.raabe, 1.0, rep.axiom5_converges,
                   {"partial_sum": rep.partial_sum, "sum_estimate": _num(rep.sum_estimate)},
                   relation=">"),
    ]
    return cases, rep


def suite_sequences(seq: Optional[Sequence[str]] = None, k_max: int = SEQUENCE_K_MAX, **_):
    names = list(seq) if seq else ["factorial_pow:2"]
    cases, reports = [], {}
    for name in names:
        c, rep = _sequence_cases(name, k_max)
        cases += c
        reports[name] = rep.as_dict()
    # the [5] classifier must separate (k!)^2 from k!
    for s, expect in ((2, True), (1, False)):
        rep = check_sequence(sequence_family(f"factorial_pow:{s}"), k_max)
        cases.append(CaseResult(f"classifier,factorial_pow:{s},convergent={expect}",
                                rep.raabe, 1.0, rep.axiom5_converges == expect,
                                relation=">" if expect else "<="))
    return cases, {"reports": reports}


# -- wavelets ---------------------------------------------------------------


def cwt_inputs():
    f = GaussChirpSum.of(GaussChirp(1.0, 0.0, 0.5, 0.0))
    psi = GaussChirpSum.of(GaussChirp(1.0, 0.0, 1.0, 0.0))
    return f, psi


def suite_cwt_crosspath(spec: QuadratureSpec, **_):
    f, psi = cwt_inputs()
    direct_spec = QuadratureSpec(rel_tol=max(spec.rel_tol, 1e-8), abs_tol=spec.abs_tol,
                                 max_panels=spec.max_panels)
    b_grid = RadialGrid(np.array(CWT_B))
    cases = []
    for theta, thr in ((PI / 2, 1e-3), (PI / 3, 5e-3)):
        P = make_params(0.0, 0.0, theta)
        for a in CWT_A:
            direct = cwt_direct_batch(P, f, psi, CWT_B, a, direct_spec)
            spectral = cwt_spectral(P, f, psi, b_grid, a, spec).values
            for b, d, s in zip(CWT_B, direct, spectral):
                err = abs(d - s) / max(abs(d), spec.abs_tol)
                cases.append(_check(f"theta={theta:.6g},a={a:g},b={b:g}", err, thr,
                                    direct=[d.real, d.imag], spectral=[s.real, s.imag]))
    return cases, {"max_defect": max(c.value for c in cases)}


DECAY_GRID = RadialGrid.linear(0.05, 6.0, 120)


def suite_decay(spec: QuadratureSpec, **_):
    P = make_params(0.0, 0.0, PI / 3)
    psi = GaussChirpSum.of(GaussChirp(1.0, 0.0, 0.5, 0.0))
    t = DECAY_GRID.nodes
    closed = np.conj(kernel_constant(P)) * np.exp(-0.5 * t * t * P.csc**2)
    cases = []
    for method in ("symbolic", "quadrature"):
        rep = decay_check(P, psi, 2, 0.0, DECAY_GRID, method=method)
        cases.append(CaseResult(f"{method},passes", 0.0, 0.0, rep.passes,
                                {"constants": list(rep.constants)}))
        err = np.max(np.abs(rep.values[0] - closed)) / np.max(np.abs(closed))
        cases.append(_check(f"{method},closed_form", err, 1e-6))
    return cases, {}


def growth_inputs():
    """(params, input) for the growth-trend sweep."""
    out = []
    for (nu, mu, theta), p in (((0.0, 0.0, PI / 2), 0.5), ((0.5, 0.0, PI / 4), 1.0),
                               ((1.0, 0.25, PI / 3), 0.25)):
        P = make_params(nu, mu, theta)
        out.append((P, oracle_family(P, p)))
    return out


def suite_growth(k_max: int = 12, q_max: int = 12, **_):
    cases = []
    for P, f in growth_inputs():
        tin = seminorm_table(f, P, -1, k_max, q_max)
        F = transform_chirp_sum(P, f, conjugate=False)
        tout = seminorm_table(F, P, 1, k_max, q_max)
        rep = growth_trend(tin, tout)
        cases.append(CaseResult(
            _label(P.nu, P.mu, P.theta), rep.beta_out, rep.bound, rep.holds,
            {"alpha_in": rep.alpha_in, "beta_out": rep.beta_out,
             "residual_in": rep.residual_in, "residual_out": rep.residual_out}))
    return cases, {}


SUITES: Dict[str, Callable] = {
    "lemma17": suite_lemma17,
    "parseval": suite_parseval,
    "roundtrip": suite_roundtrip,
    "leibniz": suite_leibniz,
    "ineq119": suite_ineq119,
    "sequences": suite_sequences,
    "cwt-crosspath": suite_cwt_crosspath,
    "decay": suite_decay,
    "growth": suite_growth,
    "oracle": suite_oracle,
}


def run_suite(name: str, spec: Optional[QuadratureSpec] = None, workers: int = 1,
              **options) -> SuiteReport:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    start = time.perf_counter()
    cases, summary = fn(spec=spec or QuadratureSpec(), workers=workers, **options)
    return SuiteReport(name, cases, time.perf_counter() - start, summary)
