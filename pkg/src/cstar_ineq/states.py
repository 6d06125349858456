"""
States on finite-dimensional C*-algebras.

A state on ``M_n`` is a density matrix ``D`` acting by ``rho(a) = tr(D a)``.
The commutative case is the diagonal subalgebra, whose pure states are the
coordinate evaluations.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, StateError
from .linalg import as_matrix, hermitian_eig, is_hermitian, psd_verdict, require_hermitian

TRACE_ATOL = 1e-10


@dataclass(frozen=True)
class State:
    density: np.ndarray

    @property
    def dim(self):
        return self.density.shape[0]

    def __call__(self, a):
        return eval_state(self, a)


@dataclass(frozen=True)
class DiagonalAlgebraElement:
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.complex128).ravel())

    @property
    def dim(self):
        return self.values.shape[0]

    @property
    def matrix(self):
        return np.diag(self.values)

    @property
    def is_self_adjoint(self):
        return bool(np.all(self.values.imag == 0))

    @classmethod
    def from_matrix(cls, m):
        m = as_matrix(m)
        if m.shape[0] == 1 or m.shape[1] == 1:
            return cls(m.ravel())
        if m.shape[0] != m.shape[1] or np.any(m - np.diag(np.diag(m))):
            raise DimensionError("matrix is not diagonal")
        return cls(np.diag(m))


def make_state(d):
    """Validate a density matrix and wrap it as a :class:`State`."""
    d = as_matrix(d)
    if d.shape[0] != d.shape[1]:
        raise StateError(f"density matrix must be square, got {d.shape}")
    if not is_hermitian(d):
        raise StateError("density matrix is not Hermitian")
    d = require_hermitian(d)
    tr = np.trace(d).real
    if abs(tr - 1.0) > TRACE_ATOL:
        raise StateError(f"density matrix has trace {tr:.12g}, expected 1")
    verdict = psd_verdict(d)
    if not verdict.is_psd:
        raise StateError(f"density matrix has negative eigenvalue {verdict.min_eigenvalue:.6g}")
    return State(d)


def eval_state(rho, a):
    a = as_matrix(a)
    if a.shape != rho.density.shape:
        raise DimensionError(f"state of dimension {rho.dim} cannot evaluate a {a.shape} matrix")
    # tr(D a) without forming the product
    return complex(np.sum(rho.density.T * a))


def eigenvector_state(a):
    """Vector state at a unit eigenvector for the eigenvalue of largest modulus."""
    dec = hermitian_eig(a)
    k = int(np.argmax(np.abs(dec.eigenvalues)))
    v = dec.eigenvectors[:, k]
    return State(np.outer(v, v.conj()))


def random_state(n, seed):
    """``G* G / tr(G* G)`` for a seeded complex Gaussian ``G``.

    ``seed`` may be an int or a sequence of ints (handed to
    :func:`numpy.random.default_rng`).
    """
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    d = g.conj().T @ g
    d = 0.5 * (d + d.conj().T)
    return State(d / np.trace(d).real)


def norm_via_states(a, trials, seed):
    """``max |rho(a)|`` over the eigenvector state and ``trials`` random states.

    For Hermitian ``a`` this equals ``||a||``: random states never exceed it
    and the eigenvector state attains it.
    """
    a = require_hermitian(a)
    n = a.shape[0]
    best = abs(eval_state(eigenvector_state(a), a))
    for k in range(trials):
        best = max(best, abs(eval_state(random_state(n, [seed, k]), a)))
    return best


def pure_states_diagonal(n):
    if n < 1:
        raise DimensionError("dimension must be positive")
    states = []
    for k in range(n):
        d = np.zeros((n, n), dtype=np.complex128)
        d[k, k] = 1.0
        states.append(State(d))
    return states
