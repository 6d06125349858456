"""
Dense complex matrix arithmetic and Hermitian spectral calculus.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every routine
that needs a spectrum goes through :func:`hermitian_eig`, a cyclic complex
Jacobi solver (compiled kernel when available, pure Python otherwise).
"""

from dataclasses import dataclass

import numpy as np

from . import _kernel
from .convexity import ScalarFunction
from .errors import DimensionError, DomainError, NegativityError, NumericalError, SymmetryError

MAX_SWEEPS = 100
OFFDIAG_RTOL = 1e-12
HERMITIAN_RTOL = 1e-10
CLAMP_RTOL = 1e-10
PSD_RTOL = 1e-9


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order and the unitary whose columns are eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True)
class PsdVerdict:
    is_psd: bool
    min_eigenvalue: float
    tolerance: float


def as_matrix(a):
    """Coerce ``a`` to a finite 2-D ``complex128`` array.

    Scalars become 1x1 matrices and 1-D input becomes a column.
    """
    if isinstance(a, np.ndarray) and a.dtype == np.complex128 and a.ndim == 2:
        m = a
    else:
        m = np.array(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    elif m.ndim != 2:
        raise DimensionError(f"expected a matrix, got an array with {m.ndim} dimensions")
    if not np.isfinite(m).all():
        raise NumericalError("matrix has non-finite entries")
    return m


def _check_square(m):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")


# -- basic ops ---------------------------------------------------------------


def multiply(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def add(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    return a + b


def subtract(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot subtract {b.shape} from {a.shape}")
    return a - b


def adjoint(a):
    return as_matrix(a).conj().T


def scale(alpha, a):
    return complex(alpha) * as_matrix(a)


def max_abs(a):
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def symmetrize(a):
    return 0.5 * (a + a.conj().T)


def _skew_and_scale(a):
    ah = a.conj().T
    if not a.size:
        return ah, 0.0, 0.0
    return ah, float(np.abs(a - ah).max()), float(np.abs(a).max())


def is_hermitian(a, rtol=HERMITIAN_RTOL):
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    _, skew, size = _skew_and_scale(a)
    return skew <= rtol * max(1.0, size)


def require_hermitian(a):
    """Return the symmetrized Hermitian part of ``a`` or raise :class:`SymmetryError`."""
    a = as_matrix(a)
    _check_square(a)
    ah, skew, size = _skew_and_scale(a)
    if skew > HERMITIAN_RTOL * max(1.0, size):
        raise SymmetryError(f"matrix is not Hermitian (max |M - M*| = {skew:.3g})")
    return 0.5 * (a + ah)


# -- spectral decomposition ----------------------------------------------------


def hermitian_eig(m, backend=None):
    """Spectral decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Square Hermitian matrix. Asymmetry up to ``1e-10 * max(1, max|m|)``
        is accepted and symmetrized away.
    backend : {"compiled", "python"}, optional
        Kernel to use; defaults to the compiled one when it was built.

    Returns
    -------
    SpectralDecomposition
        Eigenvalues ascending, eigenvectors as orthonormal columns.
    """
    a = as_matrix(m)
    _check_square(a)
    n = a.shape[0]
    if n == 0:
        return SpectralDecomposition(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    skew, size, sweeps, w, v = _kernel.eigh(a, OFFDIAG_RTOL, MAX_SWEEPS, backend)
    if skew > HERMITIAN_RTOL * max(1.0, size):
        raise SymmetryError(f"matrix is not Hermitian (max |M - M*| = {skew:.3g})")
    if sweeps < 0:
        raise NumericalError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
    return SpectralDecomposition(w, v, sweeps)


def spectral_norm_hermitian(m):
    w = hermitian_eig(m).eigenvalues
    return float(np.max(np.abs(w))) if w.size else 0.0


def operator_norm(m):
    """Largest singular value, via the top eigenvalue of ``M* M``."""
    m = as_matrix(m)
    if m.size == 0:
        return 0.0
    w = hermitian_eig(m.conj().T @ m).eigenvalues
    return float(np.sqrt(max(w[-1], 0.0)))


# -- functional calculus -------------------------------------------------------


def _domain_of(f):
    if isinstance(f, ScalarFunction):
        return f.domain
    return (-np.inf, np.inf)


def _clamp_tolerance(lam):
    return CLAMP_RTOL * max(1.0, abs(float(lam[0])), abs(float(lam[-1])))


def _snap_zero(lam, tol):
    """Eigenvalues within ``tol`` of zero are rounding noise around an exact zero."""
    small = np.abs(lam) <= tol
    return np.where(small, 0.0, lam) if small.any() else lam


def _apply_spectral(dec, values):
    v = dec.eigenvectors
    return symmetrize((v * values) @ v.conj().T)


def matrix_function(m, f, dec=None):
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    ``f`` is any vectorized callable. For a
    :class:`cstar_ineq.convexity.ScalarFunction` eigenvalues lying
    within ``clamp_tol = 1e-10 * max(1, ||M||)`` outside the domain are
    clamped onto it and anything further out raises :class:`DomainError`.
    Eigenvalues with ``|lambda| <= clamp_tol`` are evaluated at exactly 0.
    """
    dec = dec or hermitian_eig(m)
    lam = dec.eigenvalues
    if lam.size:
        lo, hi = _domain_of(f)
        slack = _clamp_tolerance(lam)
        lam = _snap_zero(lam, slack)
        if lam[0] < lo - slack or lam[-1] > hi + slack:
            raise DomainError(
                f"spectrum [{lam[0]:.6g}, {lam[-1]:.6g}] is not inside the domain [{lo:.6g}, {hi:.6g}]"
            )
        lam = np.clip(lam, lo, hi)
    with np.errstate(all="ignore"):
        fl = np.asarray(f(lam), dtype=np.float64)
    if fl.shape != lam.shape:
        fl = np.broadcast_to(fl, lam.shape).astype(np.float64)
    if not np.all(np.isfinite(fl)):
        raise DomainError("function is undefined at some eigenvalue")
    return _apply_spectral(dec, fl)


def matrix_power(m, r, dec=None):
    """Spectral power ``M**r`` of a Hermitian matrix.

    Integer ``r >= 0`` is allowed for any Hermitian ``M``. Other exponents need
    ``M`` positive semidefinite up to ``clamp_tol = 1e-10 * max(1, ||M||)``:
    eigenvalues with ``|lambda| <= clamp_tol`` are set to exactly zero, and an
    eigenvalue below ``-clamp_tol`` raises :class:`NegativityError`.
    """
    r = float(r)
    if r == 1.0:
        return require_hermitian(m)
    dec = dec or hermitian_eig(m)
    lam = dec.eigenvalues
    if not (r.is_integer() and r >= 0) and lam.size:
        clamp_tol = _clamp_tolerance(lam)
        if lam[0] < -clamp_tol:
            raise NegativityError(
                f"fractional power {r:g} of a matrix with eigenvalue {lam[0]:.6g} < 0"
            )
        lam = _snap_zero(lam, clamp_tol)
    with np.errstate(all="ignore"):
        vals = lam**r
    if not np.isfinite(vals).all():
        raise DomainError(f"power {r:g} is undefined on the spectrum")
    return _apply_spectral(dec, vals)


# -- Loewner order -----------------------------------------------------------


def default_psd_tolerance(norm):
    return PSD_RTOL * max(1.0, norm)


def psd_verdict(m, tol=None):
    """Decide ``M >= 0`` in the Loewner order from the smallest eigenvalue."""
    lam = hermitian_eig(m).eigenvalues
    if lam.size == 0:
        return PsdVerdict(True, 0.0, 0.0 if tol is None else float(tol))
    if tol is None:
        tol = default_psd_tolerance(float(np.max(np.abs(lam))))
    lo = float(lam[0])
    return PsdVerdict(lo >= -tol, lo, float(tol))
