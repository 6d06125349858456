"""
The free Hilbert C*-module ``C^{m x n}`` over ``M_n(C)``.

Elements are ``m x n`` matrices with inner product ``<x, y> = x* y`` and right
action by matrix multiplication. Adjointable operators are left
multiplications by ``m x m`` matrices; for ``m == n`` this is the algebra
viewed as a module over itself.
"""

import numpy as np

from .errors import DimensionError, PreconditionError
from .linalg import as_matrix, is_hermitian, operator_norm, psd_verdict


def inner_product(x, y):
    x, y = as_matrix(x), as_matrix(y)
    if x.shape != y.shape:
        raise DimensionError(f"elements of different modules: {x.shape} vs {y.shape}")
    return x.conj().T @ y


def module_norm(x):
    """``||x|| = ||<x, x>||^(1/2)``, i.e. the operator norm of ``x``."""
    return operator_norm(x)


def op_apply(t, x):
    t, x = as_matrix(t), as_matrix(x)
    if t.shape[0] != t.shape[1] or t.shape[1] != x.shape[0]:
        raise DimensionError(f"operator of shape {t.shape} cannot act on an element of shape {x.shape}")
    return t @ x


def is_self_adjoint(t):
    return is_hermitian(t)


def is_positive(t):
    t = as_matrix(t)
    return t.shape[0] == t.shape[1] and is_hermitian(t) and psd_verdict(t).is_psd


def require_positive(t, what="t"):
    t = as_matrix(t)
    if not is_positive(t):
        raise PreconditionError(f"{what} must be a positive operator")
    return 0.5 * (t + t.conj().T)


def compression(t, x):
    """``<t x, x> = x* t x``, symmetrized when ``t`` is Hermitian."""
    c = inner_product(op_apply(t, x), as_matrix(x))
    if is_hermitian(t):
        c = 0.5 * (c + c.conj().T)
    return c


def positivity_witness(t, x):
    """PSD verdict of ``<t x, x>`` for a positive ``t``."""
    require_positive(t)
    return psd_verdict(compression(t, x))


def random_element(rng, m, n, complex_entries=True):
    x = rng.standard_normal((m, n))
    if complex_entries:
        x = x + 1j * rng.standard_normal((m, n))
    return np.asarray(x, dtype=np.complex128)
