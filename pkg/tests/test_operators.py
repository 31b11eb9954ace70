import math

import numpy as np
import pytest

from frhankel.errors import ValidationError
from frhankel.model import GaussChirp, GaussChirpSum, make_params
from frhankel.operators import (
    LemmaPart,
    MOperatorChain,
    apply_M_chain,
    leibniz_defect,
    lemma_i_rhs,
    verify_lemma_1_7,
)

PI = math.pi
GAUSS = GaussChirpSum.of(GaussChirp(1, 0, 0.5, 0))


def test_single_M_hand_example():
    P = make_params(0.5, 0.25, PI / 3)
    # chosen so that e^{i x^2 cot/2} x^{mu-nu} f = e^{-x^2/2}
    f = GaussChirpSum.of(GaussChirp(1, P.nu - P.mu, 0.5, -P.cot))
    x = np.linspace(0.2, 3, 9)
    got = apply_M_chain(MOperatorChain(P, 1), f)(x)
    want = x ** (P.nu - P.mu + 1) * np.exp(-0.5j * P.cot * x**2) * np.exp(-x**2 / 2)
    np.testing.assert_allclose(got, want, rtol=1e-13)


def test_empty_chain_is_identity():
    P = make_params(0, 0, PI / 3)
    f = GaussChirpSum.of(GaussChirp(1, 0.5, 0.7, 0.2))
    x = np.linspace(0.2, 3, 5)
    np.testing.assert_array_equal(apply_M_chain(MOperatorChain(P, 0), f)(x), f(x))


def test_chain_of_two_matches_closed_form():
    P = make_params(0.5, 0.25, PI / 3)
    f = GaussChirpSum.of(GaussChirp(1, 0.25, 0.8, -0.3))
    x = np.random.default_rng(0).uniform(0.2, 4, 10)
    lhs = apply_M_chain(MOperatorChain(P, 2), f)(x)
    rhs = lemma_i_rhs(P, f, 2)(x)
    assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) <= 1e-9


def test_chain_validation():
    with pytest.raises(ValidationError):
        MOperatorChain(make_params(0, 0, PI / 3), -1)
    with pytest.raises(ValidationError):
        MOperatorChain(make_params(0, 0, PI), 1)
    with pytest.raises(ValidationError):
        MOperatorChain(make_params(0, 0, PI / 3), 1, sign=0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_lemma_part_i(k):
    P = make_params(0.5, 0.25, PI / 4)
    psi = GaussChirpSum.of(GaussChirp(1, 0.25, 0.5, P.cot))
    assert verify_lemma_1_7(LemmaPart.I, P, psi, k=k) <= 1e-9


def test_lemma_parts_ii_iii_examples():
    P = make_params(0, 0, PI / 3)
    psi = GaussChirpSum.of(GaussChirp(1, 0, 0.5, P.cot))
    assert verify_lemma_1_7("ii", P, psi, q=1) <= 1e-6
    assert verify_lemma_1_7("iii", P, psi, q=1, k=1) <= 1e-6


def test_lemma_classical_angle():
    P = make_params(0.5, 0, PI / 2)
    psi = GaussChirpSum.of(GaussChirp(1, 0.5, 0.5, 0))
    assert verify_lemma_1_7("ii", P, psi, q=2) <= 1e-6
    assert verify_lemma_1_7("iii", P, psi, q=1, k=2) <= 1e-6


def test_lemma_validation():
    P = make_params(0, 0, PI / 3)
    with pytest.raises(ValidationError):
        verify_lemma_1_7("i", P, GAUSS, k=0)
    with pytest.raises(ValidationError):
        verify_lemma_1_7("iii", P, GAUSS, q=1, k=0)
    with pytest.raises(ValidationError):
        verify_lemma_1_7("ii", P, GAUSS, q=1, probe_points=[0.0, 1.0])
    with pytest.raises(ValueError):
        verify_lemma_1_7("iv", P, GAUSS, k=1)


def test_leibniz_examples():
    g2 = GaussChirpSum.of(GaussChirp(1, 2, 1, 0))
    assert leibniz_defect(make_params(0, 0, PI / 3), GAUSS, g2, 0) == 0.0
    assert leibniz_defect(make_params(0, 0, PI / 2), GAUSS, GAUSS, 1) <= 1e-10
    assert leibniz_defect(make_params(0, 0, PI / 3), GAUSS, g2, 3) <= 1e-8


def test_leibniz_range():
    with pytest.raises(ValidationError):
        leibniz_defect(make_params(0, 0, PI / 3), GAUSS, GAUSS, 7)
