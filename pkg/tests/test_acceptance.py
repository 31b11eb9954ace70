"""End-to-end acceptance checks.

Each test prints one ``PASS``/``FAIL`` line (shown even without ``-s``) and
then asserts.  Run with ``pytest tests/test_acceptance.py -v``.
"""

import itertools
import math
import sys
import time

import numpy as np
import pytest

from frhankel.frht import forward_lazy, inverse, oracle_forward, parseval_defects, transform_chirp_sum
from frhankel.model import GaussChirp, GaussChirpSum, RadialGrid, kernel_constant, make_params, oracle_family
from frhankel.operators import leibniz_defect, verify_lemma_1_7
from frhankel.quadrature import QuadratureSpec
from frhankel.type_s import (
    check_inequality_1_19,
    check_sequence,
    growth_trend,
    seminorm_table,
    sequence_family,
)
from frhankel.wavelet import cwt_direct_batch, cwt_spectral, decay_check

PI = math.pi
SWEEP = list(itertools.product((0.0, 0.5, 1.0), (0.0, 0.25), (PI / 4, PI / 3, PI / 2), (0.5, 1.0)))
TRIPLES = sorted({(nu, mu, th) for nu, mu, th, _ in SWEEP})


@pytest.fixture
def report(capsys):
    def emit(number, title, passed, detail):
        with capsys.disabled():
            sys.stdout.write(f"\n[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}: {detail}\n")
    return emit


def test_criterion_01_oracle_forward(report):
    probes = np.geomspace(0.1, 4.0, 10)
    start = time.perf_counter()
    worst = 0.0
    for nu, mu, theta, p in SWEEP:
        P = make_params(nu, mu, theta)
        got = forward_lazy(P, oracle_family(P, p))(probes)
        want = oracle_forward(P, p=p)(probes)
        worst = max(worst, float(np.max(np.abs(got - want) / np.abs(want))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed <= 30
    report(1, "oracle forward", ok, f"max rel err {worst:.3e} (<= 1e-8) over {len(SWEEP)} tuples "
                                    f"in {elapsed:.1f}s (<= 30s)")
    assert ok


def test_criterion_02_round_trip(report):
    grid = RadialGrid.linear(0.2, 4.0, 20)
    t = grid.nodes
    start = time.perf_counter()
    worst = 0.0
    for nu, mu, theta, p in SWEEP:
        P = make_params(nu, mu, theta)
        f = oracle_family(P, p)
        back = inverse(P, forward_lazy(P, f), grid).values
        worst = max(worst, float(np.max(np.abs(back - f(t)) / np.abs(f(t)))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed <= 120
    report(2, "round trip on [0.2, 4]", ok,
           f"max rel err {worst:.3e} (<= 1e-6) in {elapsed:.1f}s (<= 120s)")
    assert ok


def _parseval_functions(P):
    s = P.nu - P.mu
    return [
        oracle_family(P, 0.5),
        oracle_family(P, 1.0),
        GaussChirpSum.of(GaussChirp(1.0, s + 2.0, 0.75, 0.3)),
        GaussChirpSum.of(GaussChirp(0.5 - 0.25j, s + 4.0, 0.6, -0.8), GaussChirp(1.0, s, 1.2, 0.0)),
    ]


def test_criterion_03_parseval(report):
    pairs = list(itertools.combinations(range(4), 2))
    assert len(pairs) == 6
    worst, count = 0.0, 0
    for nu, mu, theta in TRIPLES:
        P = make_params(nu, mu, theta)
        d = parseval_defects(P, _parseval_functions(P), pairs, QuadratureSpec())
        worst = max(worst, float(np.max(d)))
        count += len(d)
    ok = worst <= 1e-6
    report(3, "Parseval", ok, f"max defect {worst:.3e} (<= 1e-6) over {count} pairs")
    assert ok


def test_criterion_04_lemma(report):
    worst_i = worst_23 = 0.0
    for nu, theta in itertools.product((0.0, 0.5), (PI / 4, PI / 3)):
        P = make_params(nu, 0.0, theta)
        psi = oracle_family(P, 0.5, chirp=P.cot)
        for k in range(1, 5):
            worst_i = max(worst_i, verify_lemma_1_7("i", P, psi, k=k))
        for q in (1, 2):
            worst_23 = max(worst_23, verify_lemma_1_7("ii", P, psi, q=q))
            for k in (1, 2):
                worst_23 = max(worst_23, verify_lemma_1_7("iii", P, psi, q=q, k=k))
    ok = worst_i <= 1e-9 and worst_23 <= 1e-5
    report(4, "M-operator lemma", ok,
           f"part i {worst_i:.3e} (<= 1e-9), parts ii/iii {worst_23:.3e} (<= 1e-5)")
    assert ok


def test_criterion_05_cwt_cross_path(report):
    f = GaussChirpSum.of(GaussChirp(1.0, 0.0, 0.5, 0.0))
    psi = GaussChirpSum.of(GaussChirp(1.0, 0.0, 1.0, 0.0))
    bs = (0.25, 0.5, 1.0, 2.0)
    b_grid = RadialGrid(np.array(bs))
    direct_spec = QuadratureSpec(rel_tol=1e-8)
    start = time.perf_counter()
    worst = {}
    for theta in (PI / 2, PI / 3):
        P = make_params(0.0, 0.0, theta)
        w = 0.0
        for a in (0.5, 1.0, 2.0):
            d = cwt_direct_batch(P, f, psi, bs, a, direct_spec)
            s = cwt_spectral(P, f, psi, b_grid, a).values
            w = max(w, float(np.max(np.abs(d - s) / np.maximum(np.abs(d), 1e-10))))
        worst[theta] = w
    elapsed = time.perf_counter() - start
    ok = worst[PI / 2] <= 1e-3 and worst[PI / 3] <= 5e-3 and elapsed <= 600
    report(5, "wavelet cross-path", ok,
           f"classical {worst[PI / 2]:.3e} (<= 1e-3), pi/3 {worst[PI / 3]:.3e} (<= 5e-3) "
           f"in {elapsed:.1f}s (<= 600s)")
    assert ok


def test_criterion_06_inequality_and_leibniz(report):
    truths = [check_inequality_1_19(m, n, q) for m, n, q in itertools.product(range(1, 13), repeat=3)]
    worst = 0.0
    for nu, mu, theta in TRIPLES:
        P = make_params(nu, mu, theta)
        pairs = [
            (oracle_family(P, 0.5), GaussChirpSum.of(GaussChirp(1.0, 1.0, 0.7, 0.4))),
            (GaussChirpSum.of(GaussChirp(1.0, 2.0, 0.3, -0.5)),
             GaussChirpSum.of(GaussChirp(0.3j, 0.0, 0.5, 1.0), GaussChirp(1.0, 1.0, 1.0, 0.0))),
        ]
        for (f, g), n in itertools.product(pairs, range(5)):
            worst = max(worst, leibniz_defect(P, f, g, n))
    ok = all(truths) and worst <= 1e-8
    report(6, "inequality sweep and Leibniz rule", ok,
           f"{sum(truths)}/{len(truths)} inequality cases true, Leibniz max defect {worst:.3e} (<= 1e-8)")
    assert ok


def test_criterion_07_gaussian_seminorms(report):
    P = make_params(0.0, 0.0, PI / 2)
    table = seminorm_table(GaussChirpSum.of(GaussChirp(1.0, 0.0, 0.5, 0.0)), P, 1, 12, 0)
    k = np.arange(1, 13)
    exact = (k / math.e) ** (k / 2)
    err = float(np.max(np.abs(table.S[1:, 0] - exact) / exact))
    alpha = table.fit_k.alpha
    ok = err <= 1e-4 and abs(alpha - 0.5) <= 0.05
    report(7, "Gaussian seminorm closed form", ok,
           f"max rel err {err:.3e} (<= 1e-4), alpha {alpha:.4f} (0.5 +- 0.05)")
    assert ok


def test_criterion_08_growth_trend(report):
    lines, ok = [], True
    for (nu, mu, theta), p in (((0.0, 0.0, PI / 2), 0.5), ((0.5, 0.0, PI / 4), 1.0),
                               ((1.0, 0.25, PI / 3), 0.25)):
        P = make_params(nu, mu, theta)
        f = oracle_family(P, p)
        rep = growth_trend(seminorm_table(f, P, -1, 12, 12),
                           seminorm_table(transform_chirp_sum(P, f), P, 1, 12, 12))
        ok &= bool(rep.beta_out <= 2 * rep.alpha_in + 0.3)
        lines.append(f"(nu={nu:g},mu={mu:g},theta={theta:.4f}) alpha={rep.alpha_in:.3f} "
                     f"beta={rep.beta_out:.3f} res_in={rep.residual_in:.2e} "
                     f"res_out={rep.residual_out:.2e}")
    report(8, "growth trend beta <= 2 alpha + 0.3", ok, "; ".join(lines))
    assert ok


def test_criterion_09_sequences(report):
    sq = check_sequence(sequence_family("factorial_pow:2"), 30)
    fact = check_sequence(sequence_family("factorial_pow:1"), 30)
    ok = sq.axiom1 and sq.axiom2 and sq.shift_bound and sq.axiom5_converges and not fact.axiom5_converges
    report(9, "sequence axioms", ok,
           f"(k!)^2: [1]={sq.axiom1} [2]={sq.axiom2} shift_bound={sq.shift_bound}, "
           f"[5] Raabe s=2 {sq.raabe:.3f} (convergent), s=1 {fact.raabe:.3f} (divergent)")
    assert ok


def test_criterion_10_decay(report):
    P = make_params(0.0, 0.0, PI / 3)
    psi = GaussChirpSum.of(GaussChirp(1.0, 0.0, 0.5, 0.0))
    grid = RadialGrid.linear(0.05, 6.0, 120)
    t = grid.nodes
    closed = np.conj(kernel_constant(P)) * np.exp(-0.5 * t * t * P.csc**2)
    passes, worst = True, 0.0
    for method in ("symbolic", "quadrature"):
        rep = decay_check(P, psi, 2, 0.0, grid, method=method)
        passes &= rep.passes
        worst = max(worst, float(np.max(np.abs(rep.values[0] - closed)) / np.max(np.abs(closed))))
    ok = passes and worst <= 1e-6
    report(10, "wavelet decay condition", ok,
           f"passes={passes}, closed-form deviation {worst:.3e} (<= 1e-6)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
