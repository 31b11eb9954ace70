import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import jv

from frhankel.errors import (
    IdentityAngle,
    NoConvergence,
    ParameterUnsupported,
    UnsupportedFamily,
)
from frhankel.frht import (
    forward,
    forward_lazy,
    inverse,
    kernel,
    kernel_matrix,
    oracle_forward,
    oracle_inverse,
    parseval_defect,
    transform_chirp_sum,
    weighted_inner,
)
from frhankel.model import (
    ComplexSignal,
    GaussChirp,
    GaussChirpSum,
    RadialGrid,
    kernel_constant,
    make_params,
    oracle_family,
)
from frhankel.quadrature import QuadratureSpec

PI = math.pi
CLASSICAL = make_params(0, 0, PI / 2)
GAUSS = GaussChirpSum.of(GaussChirp(1, 0, 0.5, 0))


def test_kernel_examples():
    assert kernel(CLASSICAL, 1.0, 1e-12) == pytest.approx(1.0, abs=1e-12)
    assert abs(kernel(CLASSICAL, 2.0, 1.202412778847887)) <= 1e-9
    assert kernel_constant(make_params(0, 0, PI / 3)) == pytest.approx(1 - 0.5773502691896258j)


def test_kernel_identity_angle():
    with pytest.raises(IdentityAngle):
        kernel(make_params(0, 0, PI), 1.0, 1.0)


def test_kernel_against_scipy():
    P = make_params(0.75, 0.3, 1.1)
    t = np.array([0.3, 1.0, 2.5])
    w = np.array([0.5, 1.7])
    x = w[:, None] * t[None, :] * P.csc
    want = (kernel_constant(P) * np.exp(0.5j * P.cot * (t[None, :] ** 2 + w[:, None] ** 2))
            * x ** (-P.mu) * jv(P.nu, x) * t[None, :] ** (1 + 2 * P.mu))
    np.testing.assert_allclose(kernel_matrix(P, t, w), want, rtol=1e-13)
    np.testing.assert_allclose(kernel_matrix(P, t, w, conjugate=True), np.conj(want), rtol=1e-13)


def test_classical_and_generic_half_pi_agree():
    generic = make_params(0.5, 0.2, PI / 2 + 1e-6)
    classical = make_params(0.5, 0.2, PI / 2)
    t, w = np.linspace(0.1, 3, 5), np.linspace(0.2, 2, 4)
    np.testing.assert_allclose(kernel_matrix(generic, t, w), kernel_matrix(classical, t, w),
                               rtol=1e-5)


def test_forward_classical_gaussian():
    out = forward(CLASSICAL, GAUSS, RadialGrid(np.array([0.5, 1.0, 2.0])))
    assert out.values[1] == pytest.approx(0.6065307, abs=1e-7)
    np.testing.assert_allclose(out.values, np.exp(-out.nodes**2 / 2), rtol=1e-8)


def test_forward_identity_copies_samples():
    P = make_params(0, 0, PI)
    g = RadialGrid.linear(0.1, 4, 9)
    sig = ComplexSignal(g, np.arange(9) + 1j, P)
    assert np.array_equal(forward(P, sig, g).values, sig.values)
    assert np.array_equal(inverse(P, sig, g).values, sig.values)


def test_forward_matches_oracle_pi_3():
    P = make_params(0, 0, PI / 3)
    f = GaussChirpSum.of(GaussChirp(1, 0, 0.5, -P.cot))
    w = np.array([0.5, 1.0, 2.0])
    got = forward_lazy(P, f)(w)
    want = oracle_forward(P, p=0.5)(w)
    np.testing.assert_allclose(got, want, rtol=1e-8)


def test_oracle_examples():
    w = np.linspace(0.2, 3, 6)
    np.testing.assert_allclose(oracle_forward(CLASSICAL, p=0.5)(w), np.exp(-w**2 / 2), rtol=1e-14)
    P1 = make_params(1, 0, PI / 2)
    assert oracle_forward(P1, p=0.5)(np.array([1.0]))[0] == pytest.approx(math.exp(-0.5), rel=1e-14)
    P3 = make_params(0, 0, PI / 3)
    mag = abs(oracle_forward(P3, p=0.5)(np.array([1.0]))[0])
    assert mag == pytest.approx(2 / math.sqrt(3) * math.exp(-2 / 3), rel=1e-13)
    with pytest.raises(UnsupportedFamily):
        oracle_forward(P3, s_extra=1.0)


def test_oracle_inverse_undoes_oracle_forward():
    P = make_params(0.5, 0, PI / 4)
    F = oracle_forward(P, p=0.7)
    g = RadialGrid.linear(0.2, 4, 10)
    back = inverse(P, F, g)
    f = oracle_family(P, 0.7)
    np.testing.assert_allclose(back.values, f(g.nodes), rtol=1e-6)
    # the closed-form inverse of the closed-form forward is exact
    np.testing.assert_allclose(transform_chirp_sum(P, F, conjugate=True)(g.nodes), f(g.nodes),
                               rtol=1e-12)
    assert isinstance(oracle_inverse(P), GaussChirpSum)


def test_round_trip_gaussian():
    g = RadialGrid.linear(0.2, 4, 16)
    back = inverse(CLASSICAL, forward_lazy(CLASSICAL, GAUSS), g)
    assert np.max(np.abs(back.values - GAUSS(g.nodes)) / GAUSS(g.nodes)) <= 1e-6


def test_sampled_input_uses_spline():
    P = make_params(0.5, 0.25, PI / 3)
    f = oracle_family(P, 0.5)
    g = RadialGrid.linear(0.02, 8, 200)
    out = RadialGrid.linear(0.25, 3, 12)
    got = forward(P, ComplexSignal(g, f(g.nodes), P), out).values
    want = oracle_forward(P, p=0.5)(out.nodes)
    assert np.max(np.abs(got - want) / np.abs(want)) <= 1e-4


def test_parseval_examples():
    spec = QuadratureSpec()
    assert weighted_inner(CLASSICAL, [GAUSS], [(0, 0)], spec)[0] == pytest.approx(0.5, rel=1e-12)
    assert parseval_defect(CLASSICAL, GAUSS, GAUSS) <= 1e-7
    zero = GaussChirpSum.zero()
    assert parseval_defect(CLASSICAL, zero, zero) == 0.0
    P = make_params(1, 0, PI / 2)
    f = GaussChirpSum.of(GaussChirp(1, 1, 1, 0))
    assert parseval_defect(P, f, GAUSS) <= 1e-6


def test_parseval_generic_chirped_pair():
    P = make_params(0.5, 0.25, PI / 4)
    f = GaussChirpSum.of(GaussChirp(1, 2.25, 0.6, 0.9))
    g = oracle_family(P, 1.0)
    assert parseval_defect(P, f, g) <= 1e-8


def test_workers_do_not_change_results():
    P = make_params(0.5, 0, PI / 3)
    g = RadialGrid.linear(0.1, 4, 150)
    f = oracle_family(P, 0.5)
    assert np.array_equal(forward(P, f, g, workers=1).values, forward(P, f, g, workers=3).values)


def test_non_integrable_power_rejected():
    with pytest.raises(ParameterUnsupported):
        forward_lazy(CLASSICAL, GaussChirpSum.of(GaussChirp(1, -2.5, 1, 0)))


def test_no_convergence_carries_node():
    P = make_params(0, 0, PI / 3)
    lazy = forward_lazy(P, GAUSS, QuadratureSpec(rel_tol=1e-15, abs_tol=1e-300, max_panels=16))
    with pytest.raises(NoConvergence) as err:
        lazy(np.array([1.0]))
    assert "omega" in err.value.context


@settings(max_examples=10, deadline=None)
@given(st.floats(0.3, 1.5), st.floats(-1, 1), st.floats(0.3, 1.5), st.floats(-1, 1),
       st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_linearity(p1, c1, p2, c2, alpha):
    P = make_params(0.5, 0.25, PI / 3)
    f = GaussChirpSum.of(GaussChirp(1, 0.25, p1, c1))
    g = GaussChirpSum.of(GaussChirp(1, 2.25, p2, c2))
    w = np.array([0.3, 1.0, 2.2])
    lhs = forward_lazy(P, f.scale(alpha) + g)(w)
    rhs = alpha * forward_lazy(P, f)(w) + forward_lazy(P, g)(w)
    assert np.max(np.abs(lhs - rhs)) <= 1e-8 * (np.max(np.abs(rhs)) + abs(alpha) + 1)
