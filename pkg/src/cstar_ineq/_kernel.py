"""Backend selection for the Jacobi eigenvalue kernel.

The compiled extension is used when it imports; otherwise the pure-Python
kernel. Setting ``CSTAR_INEQ_PURE_PYTHON=1`` forces the fallback.
"""

import os

import numpy as np

from . import _jacobi_py

try:
    from . import _jacobi_ext
except ImportError:  # extension not built
    _jacobi_ext = None

BACKENDS = ("compiled", "python")


def available_backends():
    return tuple(b for b in BACKENDS if b == "python" or _jacobi_ext is not None)


def default_backend():
    if os.environ.get("CSTAR_INEQ_PURE_PYTHON", "") not in ("", "0"):
        return "python"
    return "compiled" if _jacobi_ext is not None else "python"


_DEFAULT = default_backend()


def _module(backend):
    backend = backend or _DEFAULT
    if backend == "compiled":
        if _jacobi_ext is None:
            raise RuntimeError("compiled Jacobi kernel is not available")
        return _jacobi_ext
    if backend == "python":
        return _jacobi_py
    raise ValueError(f"unknown backend {backend!r}")


def eigh(a, offdiag_rtol, max_sweeps, backend=None):
    """Symmetrize and diagonalize a square ``complex128`` array.

    Returns ``(skew, size, sweeps, eigenvalues, eigenvectors)``; ``sweeps``
    is -1 on non-convergence. ``a`` is not modified.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    return _module(backend).eigh(a, float(offdiag_rtol), int(max_sweeps))


def jacobi_sweeps(ar, ai, vr, vi, tol, max_sweeps, backend=None):
    """Raw in-place sweeps on split real/imaginary planes (numpy arrays)."""
    mod = _module(backend)
    if mod is _jacobi_py:
        planes = [p.tolist() for p in (ar, ai, vr, vi)]
        sweeps = mod.jacobi_sweeps(*planes, float(tol), int(max_sweeps))
        for dst, src in zip((ar, ai, vr, vi), planes):
            dst[...] = src
        return sweeps
    return mod.jacobi_sweeps(ar, ai, vr, vi, float(tol), int(max_sweeps))
