"""
Localization of a Hilbert C*-module at a state.

For a state ``rho`` on ``M_n`` the form ``(x, y) -> rho(<x, y>)`` is a positive
semi-inner product on ``E = C^{m x n}``. Dividing out its null space gives a
finite-dimensional Hilbert space ``E_rho`` (no completion is needed), the
quotient map ``iota`` and, for every operator ``t`` on ``E``, an induced
operator ``T`` with ``T iota(x) = iota(t x)``.

Coordinates: ``x`` is flattened row-major, so index ``i*n + j`` is the matrix
unit ``e_ij``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalError
from .hilbert_module import inner_product
from .linalg import as_matrix, hermitian_eig, matrix_function, operator_norm
from .states import eval_state

RANK_RTOL = 1e-9
WELL_DEFINED_RTOL = 1e-9


@dataclass(frozen=True)
class Localization:
    m: int
    n: int
    state: object
    gram: np.ndarray
    basis: np.ndarray  # columns b_k with b_k* G b_l = delta_kl
    coords: np.ndarray  # rows map vec(x) to iota(x)

    @property
    def dim_quotient(self):
        return self.basis.shape[1]


@dataclass(frozen=True)
class InducedOperator:
    matrix: np.ndarray
    residual: float


def _unit(m, n, k):
    e = np.zeros((m, n), dtype=np.complex128)
    e.flat[k] = 1.0
    return e


def build_localization(m, n, rho):
    """Gram matrix, rank and orthonormal basis of ``E_rho`` for ``E = C^{m x n}``."""
    if rho.dim != n:
        raise DimensionError(f"state has dimension {rho.dim}, module algebra is M_{n}")
    mn = m * n
    units = [_unit(m, n, k) for k in range(mn)]
    gram = np.empty((mn, mn), dtype=np.complex128)
    for p in range(mn):
        for q in range(mn):
            gram[p, q] = eval_state(rho, inner_product(units[p], units[q]))
    gram = 0.5 * (gram + gram.conj().T)

    dec = hermitian_eig(gram)
    lam = dec.eigenvalues
    top = float(np.max(np.abs(lam))) if lam.size else 0.0
    keep = lam > RANK_RTOL * top
    u = dec.eigenvectors[:, keep]
    s = np.sqrt(lam[keep])
    basis = u / s
    coords = (u * s).conj().T
    return Localization(m, n, rho, gram, basis, coords)


def iota(loc, x):
    """Coordinates of the class ``x + N_rho`` in the orthonormal basis."""
    x = as_matrix(x)
    if x.shape != (loc.m, loc.n):
        raise DimensionError(f"element of shape {x.shape} is not in C^({loc.m}x{loc.n})")
    return loc.coords @ x.reshape(-1)


def left_multiplication(t, m, n):
    """Matrix of ``x -> t x`` on row-major ``vec(x)``."""
    return np.kron(as_matrix(t), np.eye(n))


def induced_operator(loc, t):
    """Operator ``T`` on ``E_rho`` determined by ``T iota(e_ij) = iota(t e_ij)``.

    Well-definedness on the quotient (``t`` maps ``N_rho`` into itself) is
    checked rather than assumed.
    """
    t = as_matrix(t)
    if t.shape != (loc.m, loc.m):
        raise DimensionError(f"operator of shape {t.shape} does not act on C^({loc.m}x{loc.n})")
    lt = left_multiplication(t, loc.m, loc.n)
    images = loc.coords @ lt  # column k = iota(t e_k)
    mat = images @ loc.basis
    residual = float(np.max(np.abs(mat @ loc.coords - images))) if images.size else 0.0
    scale = max(1.0, operator_norm(t))
    if residual > WELL_DEFINED_RTOL * scale:
        raise NumericalError(f"induced operator is not well defined on the quotient (residual {residual:.3g})")
    return InducedOperator(mat, residual)


@dataclass(frozen=True)
class TransportReport:
    samples: int
    residual_operator: float
    residual_function: float
    residual_inner: float
    tolerance: float
    norm_t: float
    norm_T: float

    @property
    def passed(self):
        return (
            max(self.residual_operator, self.residual_function, self.residual_inner) <= self.tolerance
            and self.norm_T <= self.norm_t + 1e-8
        )


def verify_transport(loc, t, f, samples, seed):
    """Residuals of ``T iota(x) = iota(t x)``, ``f(T) iota(x) = iota(f(t) x)`` and
    ``<T iota(x), iota(y)> = rho(<t x, y>)`` over seeded random ``x, y``."""
    t = as_matrix(t)
    big_t = induced_operator(loc, t)
    ft = matrix_function(t, f)
    f_big_t = matrix_function(big_t.matrix, f) if loc.dim_quotient else big_t.matrix

    spectrum = hermitian_eig(t).eigenvalues
    sup_f = float(np.max(np.abs(f(np.clip(spectrum, *_domain(f)))))) if spectrum.size else 0.0
    norm_t = operator_norm(t)
    tol = 1e-8 * max(1.0, norm_t, sup_f)

    rng = np.random.default_rng(seed)
    r_op = r_fn = r_in = 0.0
    for _ in range(samples):
        x = rng.standard_normal((loc.m, loc.n)) + 1j * rng.standard_normal((loc.m, loc.n))
        y = rng.standard_normal((loc.m, loc.n)) + 1j * rng.standard_normal((loc.m, loc.n))
        ix, iy = iota(loc, x), iota(loc, y)
        r_op = max(r_op, float(np.max(np.abs(big_t.matrix @ ix - iota(loc, t @ x)), initial=0.0)))
        r_fn = max(r_fn, float(np.max(np.abs(f_big_t @ ix - iota(loc, ft @ x)), initial=0.0)))
        lhs = np.vdot(big_t.matrix @ ix, iy)
        rhs = eval_state(loc.state, inner_product(t @ x, y))
        r_in = max(r_in, abs(lhs - rhs))
    norm_big_t = operator_norm(big_t.matrix) if loc.dim_quotient else 0.0
    return TransportReport(samples, r_op, r_fn, r_in, tol, norm_t, norm_big_t)


def _domain(f):
    dom = getattr(f, "domain", None)
    return (-np.inf, np.inf) if dom is None else dom
