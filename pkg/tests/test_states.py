import numpy as np
import pytest
from hypothesis import given, strategies as st

from cstar_ineq.errors import DimensionError, StateError, SymmetryError
from cstar_ineq.linalg import psd_verdict, spectral_norm_hermitian
from cstar_ineq.states import (
    eigenvector_state, eval_state, make_state, norm_via_states, pure_states_diagonal, random_state,
)

from conftest import random_hermitian


def test_make_state():
    assert make_state(np.eye(2) / 2).dim == 2
    assert make_state(np.diag([1.0, 0.0])).dim == 2
    with pytest.raises(StateError):
        make_state(np.eye(2))
    with pytest.raises(StateError):
        make_state(np.diag([1.5, -0.5]))
    with pytest.raises(StateError):
        make_state([[0.5, 1], [0, 0.5]])


def test_eval_state():
    a = np.array([[2, 3], [3, 6]])
    assert eval_state(make_state(np.eye(2) / 2), a) == pytest.approx(4)
    assert eval_state(make_state(np.diag([1.0, 0.0])), a) == pytest.approx(2)
    assert eval_state(make_state(np.eye(2) / 2), np.zeros((2, 2))) == 0
    with pytest.raises(DimensionError):
        eval_state(make_state(np.eye(2) / 2), np.eye(3))


def test_eval_state_is_trace_pairing(rng):
    for _ in range(50):
        d = random_state(3, int(rng.integers(1 << 30))).density
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert eval_state(make_state(d), a) == pytest.approx(np.trace(d @ a), abs=1e-12)


def test_eigenvector_state():
    s = eigenvector_state(np.diag([1.0, 3.0]))
    np.testing.assert_allclose(s.density, np.diag([0, 1]), atol=1e-15)
    assert eval_state(s, np.diag([1.0, 3.0])).real == pytest.approx(3)
    assert eval_state(eigenvector_state([[2, 1], [1, 2]]), [[2, 1], [1, 2]]).real == pytest.approx(3)
    assert abs(eval_state(eigenvector_state(-np.eye(2)), -np.eye(2))) == pytest.approx(1)
    with pytest.raises(SymmetryError):
        eigenvector_state([[0, 1], [0, 0]])


def test_norm_via_states():
    assert norm_via_states(np.eye(2), 10, 3) == pytest.approx(1)
    assert norm_via_states([[2, 1], [1, 2]], 100, 42) == pytest.approx(3, abs=1e-8)
    assert norm_via_states(np.zeros((2, 2)), 5, 0) == 0


def test_pure_states_diagonal():
    (only,) = pure_states_diagonal(1)
    assert only.density.tolist() == [[1]]
    with pytest.raises(DimensionError):
        pure_states_diagonal(0)


def test_random_state_determinism():
    a, b = random_state(3, 7), random_state(3, 7)
    assert np.array_equal(a.density, b.density)
    assert not np.array_equal(random_state(2, 7).density, random_state(2, 8).density)


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_random_state_is_valid(n, seed):
    assert make_state(random_state(n, seed).density).dim == n


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_states_bounded_by_norm(n, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, n)
    rho = random_state(n, seed)
    assert abs(eval_state(rho, a)) <= spectral_norm_hermitian(a) * (1 + 1e-12)
    # positive elements have non-negative expectation
    p = a @ a
    assert eval_state(rho, p).real >= -1e-12 * max(1.0, np.abs(p).max())
    assert psd_verdict(rho.density).is_psd


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_state_cauchy_schwarz(m, n, seed):
    from cstar_ineq.hilbert_module import inner_product, random_element

    rng = np.random.default_rng(seed)
    x, y = random_element(rng, m, n), random_element(rng, m, n)
    rho = random_state(n, seed)
    lhs = abs(eval_state(rho, inner_product(x, y))) ** 2
    rhs = eval_state(rho, inner_product(x, x)).real * eval_state(rho, inner_product(y, y)).real
    assert lhs <= rhs + 1e-9 * max(1.0, rhs)


@given(st.integers(1, 5), st.integers(0, 2**32 - 1), st.sampled_from([0.25, 1 / 3, 0.5, 2.0, 3.0]))
def test_pure_states_are_multiplicative(n, seed, s):
    from cstar_ineq.linalg import matrix_power

    d = np.diag(np.random.default_rng(seed).exponential(size=n))
    ds = matrix_power(d, s)
    for rho in pure_states_diagonal(n):
        assert eval_state(rho, ds).real == pytest.approx(eval_state(rho, d).real ** s, abs=1e-9)


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_eigenvector_state_attains_norm(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n)
    norm = spectral_norm_hermitian(a)
    assert abs(eval_state(eigenvector_state(a), a)) == pytest.approx(norm, abs=1e-8)
    assert norm_via_states(a, 5, seed) == pytest.approx(norm, abs=1e-8)
    for k in range(5):
        assert abs(eval_state(random_state(n, [seed, k]), a)) <= norm + 1e-9
