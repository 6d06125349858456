import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cstar_ineq import inequalities as ineq
from cstar_ineq.convexity import ScalarFunction
from cstar_ineq.errors import DomainError, PreconditionError, ReproductionError
from cstar_ineq.linalg import hermitian_eig, matrix_power, psd_verdict
from cstar_ineq.states import DiagonalAlgebraElement, make_state, random_state

from conftest import random_psd

X1, T1 = np.array([[1.0, 1.0], [0.0, 1.0]]), np.array([[2.0, 1.0], [1.0, 2.0]])
X2, T2 = np.array([[9.0, 9.0], [1.0, -25.0]]), np.array([[125.0, 75.0], [75.0, 45.0]])
HALF = make_state(np.eye(2) / 2)
PHI = (1 + 5 ** 0.5) / 2


# -- Hilbert space --------------------------------------------------------------


def test_hilbert_examples():
    x = np.array([1.0, 1.0]) / 2 ** 0.5
    rep = ineq.check_hilbert_mccarty(np.eye(2), x, 2)
    assert rep.lhs == pytest.approx(1) and rep.rhs == pytest.approx(1) and rep.holds
    rep = ineq.check_hilbert_mccarty(np.diag([1.0, 3.0]), x, 2)
    assert rep.lhs == pytest.approx(4) and rep.rhs == pytest.approx(5) and rep.holds
    rep = ineq.check_hilbert_mccarty(T1, [1.0, 2.0], 1)
    assert rep.difference == pytest.approx(0, abs=1e-12)
    with pytest.raises(PreconditionError):
        ineq.check_hilbert_mccarty(np.diag([1.0, -1.0]), x, 2)
    with pytest.raises(PreconditionError):
        ineq.check_hilbert_mccarty(T1, x, 0)


# -- states -----------------------------------------------------------------------


def test_mond_pecaric_examples():
    ident = ScalarFunction(lambda u: u * 1.0, (-5, 5), "id")
    rep = ineq.check_mond_pecaric_state(T1, HALF, X1, ident)
    assert rep.difference == pytest.approx(0, abs=1e-12)
    rep = ineq.check_mond_pecaric_state(T1, HALF, np.eye(2), "pow:3")
    # x0 = I: lhs = (rho(t))^3 = 8, rhs = rho(t^3) = 14
    assert rep.lhs == pytest.approx(8) and rep.rhs == pytest.approx(14) and rep.holds
    rep = ineq.check_mond_pecaric_state(T2, random_state(2, 1), X2, "negpow:0.5")
    assert rep.holds


def test_mond_pecaric_errors():
    with pytest.raises(PreconditionError):
        ineq.check_mond_pecaric_state(T1, HALF, X1, ScalarFunction(lambda u: -(u**2), (0, 3)))
    with pytest.raises(DomainError):
        ineq.check_mond_pecaric_state(T1, HALF, X1, ScalarFunction(np.square, (0, 2)))
    with pytest.raises(DomainError):
        ineq.check_mond_pecaric_state(np.diag([-1.0, 1.0]), HALF, X1, "pow:1.5")


def test_state_mccarty_examples():
    rep = ineq.check_state_mccarty(T1, HALF, X1, 1)
    assert rep.difference == pytest.approx(0, abs=1e-12)
    # direct evaluation: rho(<tx,x>) = 4, rho(<t^3 x,x>) = 34, ||x|| = phi
    rep = ineq.check_state_mccarty(T1, HALF, X1, 3)
    assert rep.lhs == pytest.approx(64) and rep.rhs == pytest.approx(PHI**4 * 34) and rep.holds
    rho = make_state(np.diag([1.0, 0.0]))
    rep = ineq.check_state_mccarty(T1, rho, np.array([[0.0, 1.0], [0.0, 2.0]]), 3)
    assert rep.degenerate and rep.holds
    assert rep.lhs == pytest.approx(0) and rep.rhs == pytest.approx(0)


def test_norm_mccarty_examples():
    assert ineq.check_norm_mccarty(T1, X1, 1).difference == pytest.approx(0, abs=1e-12)
    rep = ineq.check_norm_mccarty(T1, X1, 3)
    assert rep.lhs == pytest.approx((4 + 13 ** 0.5) ** 3)
    assert rep.rhs == pytest.approx(PHI**4 * (68 + 4516 ** 0.5) / 2)
    assert rep.lhs == pytest.approx(439.9, abs=0.05) and rep.rhs == pytest.approx(463.3, abs=0.05)
    assert rep.holds
    assert ineq.check_norm_mccarty(T2, X2, 0.25).holds


# -- Loewner order ------------------------------------------------------------------


def test_loewner_first_counterexample():
    rep = ineq.check_loewner_mccarty(T1, X1, 3)
    np.testing.assert_allclose(rep.lhs, [[98, 183], [183, 342]], atol=1e-9)
    np.testing.assert_allclose(rep.rhs, [[95.9574, 185.0608], [185.0608, 370.1215]], atol=2e-3)
    np.testing.assert_allclose(rep.difference, [[-2.0426, 2.0608], [2.0608, 28.1215]], atol=2e-3)
    assert not rep.holds
    # independent oracle: B = phi^4 x* t^3 x with t^3 = [[14,13],[13,14]]
    b = PHI**4 * X1.T @ np.array([[14, 13], [13, 14]]) @ X1
    np.testing.assert_allclose(rep.rhs, b, atol=1e-9)
    assert rep.min_eigenvalue == pytest.approx(np.linalg.eigvalsh(b - rep.lhs.real)[0], abs=1e-9)


def test_loewner_r_equal_one_is_exact(rng):
    for _ in range(20):
        t, x = random_psd(rng, 3), rng.standard_normal((3, 3))
        rep = ineq.check_loewner_mccarty(t, x, 1.0)
        assert not np.any(rep.difference) and rep.holds


def _second_instance_oracle():
    """Exact C = A - B for the rank-one t of the second published instance.

    t = 170 P with P = v v*, v = (5, 3)/sqrt(34). With w = x* v,
    x* t x = 170 w w*, so A = 170^(1/4) |w|^(-3/2) w w*, and
    t^(1/4) = 170^(1/4) P gives B = ||x||^(-3/2) 170^(1/4) w w*.
    """
    v = np.array([5.0, 3.0]) / 34 ** 0.5
    w = X2.T @ v
    nw = np.linalg.norm(w)
    nx = np.linalg.norm(X2, 2)
    kappa = 170 ** 0.25 * (nw ** -1.5 - nx ** -1.5)
    return kappa * np.outer(w, w), kappa


def test_second_counterexample_against_exact_oracle():
    c_exact, kappa = _second_instance_oracle()
    assert kappa > 0  # so C = kappa w w* is PSD with det 0
    rep = ineq.check_loewner_mccarty(T2, X2, 0.25)
    np.testing.assert_allclose(rep.difference, c_exact, atol=1e-12)
    assert rep.holds
    assert abs(np.linalg.det(rep.difference)) < 1e-10
    # the published A, B, C entries agree to their printed precision
    np.testing.assert_allclose(rep.lhs, [[8.0901, -5.0563], [-5.0563, 3.1602]], atol=2e-3)
    np.testing.assert_allclose(rep.rhs, [[1.7772, -1.1105], [-1.1105, 0.6956]], atol=2e-3)


def test_second_counterexample_rounding_artifact():
    """A spurious positive null eigenvalue of t reproduces the published det(C)."""
    dec = hermitian_eig(T2)
    assert abs(dec.eigenvalues[0]) < 1e-12
    lam = np.array([7.1e-15, dec.eigenvalues[1]])
    v = dec.eigenvectors
    t_quarter = (v * lam**0.25) @ v.conj().T
    a = matrix_power(X2.T @ T2 @ X2, 0.25)
    b = np.linalg.norm(X2, 2) ** -1.5 * X2.T @ t_quarter @ X2
    det = np.linalg.det(a - b).real
    assert det == pytest.approx(-0.0108, abs=2e-3)


def test_commutative_examples():
    rep = ineq.check_commutative_loewner(np.diag([1.0, 4.0]), np.eye(2), 2)
    np.testing.assert_allclose(np.diag(rep.lhs), [1, 16])
    np.testing.assert_allclose(rep.difference, 0, atol=1e-12)
    rep = ineq.check_commutative_loewner(np.diag([2.0, 3.0]), np.diag([1.0, 2.0]), 3)
    assert rep.holds
    # coordinate oracle |x_k|^(2r) t_k^r <= ||x||^(2(r-1)) |x_k|^2 t_k^r
    for k, (t, x) in enumerate([(2.0, 1.0), (3.0, 2.0)]):
        assert rep.lhs[k, k] == pytest.approx(x ** 6 * t**3)
        assert rep.rhs[k, k] == pytest.approx(4**2 * x**2 * t**3)
    with pytest.raises(PreconditionError):
        ineq.check_commutative_loewner(np.diag([-1.0, 1.0]), np.eye(2), 2)
    rep = ineq.check_commutative_loewner(DiagonalAlgebraElement([1.0, 5.0]), DiagonalAlgebraElement([2, 3j]), 1)
    np.testing.assert_allclose(rep.difference, 0, atol=1e-12)


def test_reproduction_reports():
    reps = ineq.reproduce_paper_counterexamples(strict=False)
    assert len(reps) == 2
    first = reps[0]
    assert not first.holds and first.extras["mismatches"] == []
    assert first.difference[0, 0].real == pytest.approx(-2.0426, abs=2e-3)
    second = reps[1]
    # the published det(C) = -0.0108 does not survive exact arithmetic
    assert second.holds and second.extras["mismatches"]
    with pytest.raises(ReproductionError, match="r=1/4"):
        ineq.reproduce_paper_counterexamples(strict=True)


# -- theorem properties ----------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)
exponents = st.floats(0.05, 5).filter(lambda r: abs(r - 1) > 1e-3)


@given(seeds, st.integers(1, 4), exponents)
def test_hilbert_mccarty_property(seed, n, r):
    rng = np.random.default_rng(seed)
    assert ineq.check_hilbert_mccarty(random_psd(rng, n), rng.standard_normal(n) + 1j, r).holds


@given(seeds, st.integers(1, 3), st.integers(1, 3), exponents)
def test_state_and_norm_property(seed, m, n, r):
    rng = np.random.default_rng(seed)
    t = random_psd(rng, m, rank=int(rng.integers(1, m + 1)))
    x = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    assert ineq.check_state_mccarty(t, random_state(n, seed), x, r).holds
    assert ineq.check_norm_mccarty(t, x, r).holds


@given(seeds, st.integers(1, 3), st.integers(1, 3),
       st.sampled_from(["pow:2", "exp", "abs:0.3", "hinge:0.3", "pow:1.5", "negpow:0.25"]))
def test_mond_pecaric_property(seed, m, n, label):
    rng = np.random.default_rng(seed)
    t = random_psd(rng, m)
    x = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    assert ineq.check_mond_pecaric_state(t, random_state(n, seed), x, label).holds


@given(seeds, st.integers(1, 4), exponents)
def test_loewner_diagonal_and_scalar_reductions(seed, n, r):
    rng = np.random.default_rng(seed)
    tv, xv = rng.exponential(size=n), rng.standard_normal(n) + 1j * rng.standard_normal(n)
    lo = ineq.check_loewner_mccarty(np.diag(tv), np.diag(xv), r)
    co = ineq.check_commutative_loewner(np.diag(tv), np.diag(xv), r)
    assert lo.holds and co.holds
    s = ineq.check_loewner_mccarty([[tv[0]]], [[xv[0]]], r)
    h = ineq.check_hilbert_mccarty([[tv[0]]], [xv[0]], r)
    assert s.holds == h.holds


@given(seeds, exponents)
def test_loewner_sides_are_psd(seed, r):
    rng = np.random.default_rng(seed)
    a, b = ineq.loewner_sides(random_psd(rng, 2), rng.standard_normal((2, 2)), r)
    assert psd_verdict(a).is_psd and psd_verdict(b).is_psd
    assert not math.isnan(float(np.abs(a).max()))
