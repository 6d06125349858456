"""
Checkers for the Hoelder-McCarty and Mond-Pecaric families.

Every checker returns an :class:`InequalityReport` whose ``difference`` is
oriented so that "non-negative" (a PSD matrix, or a real >= 0) means the
inequality holds. Theorem families must always report ``holds=True``; the
Loewner-order family (``x* t x)^r`` against ``||x||^(2(r-1)) x* t^r x``) may
legitimately fail for non-commutative algebras.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .convexity import ScalarFunction, catalog_function, convexity_check, natural_domain
from .errors import DomainError, PreconditionError, ReproductionError, UsageError
from .hilbert_module import compression, module_norm, require_positive
from .linalg import (
    as_matrix,
    default_psd_tolerance,
    hermitian_eig,
    matrix_function,
    matrix_power,
    psd_verdict,
    require_hermitian,
)
from .states import DiagonalAlgebraElement, eval_state, pure_states_diagonal

SCALAR_RTOL = 1e-8
DEGENERATE_ATOL = 1e-12

FAMILIES = (
    "hilbert-mccarty",
    "mond-pecaric-state",
    "state-mccarty",
    "norm-mccarty",
    "loewner-mccarty",
    "commutative-loewner",
)


@dataclass
class InequalityReport:
    family: str
    parameter: object  # exponent r or function label
    lhs: object
    rhs: object
    difference: object
    holds: bool
    tolerance: float
    min_eigenvalue: float = math.nan
    degenerate: bool = False
    extras: dict = field(default_factory=dict)


def _scalar_report(family, r, lhs, rhs, forward, tol=None, **kw):
    """``forward``: the claim is ``lhs <= rhs``; otherwise ``lhs >= rhs``."""
    lhs, rhs = float(lhs), float(rhs)
    diff = rhs - lhs if forward else lhs - rhs
    if tol is None:
        tol = SCALAR_RTOL * max(1.0, abs(lhs), abs(rhs))
    return InequalityReport(family, r, lhs, rhs, diff, diff >= -tol, float(tol), **kw)


def _check_exponent(r):
    r = float(r)
    if not r > 0:
        raise PreconditionError(f"exponent must be positive, got {r}")
    return r


def _nonzero(x):
    x = as_matrix(x)
    if not np.any(x):
        raise PreconditionError("x must be nonzero")
    return x


def _real(z, what):
    z = complex(z)
    if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
        raise PreconditionError(f"{what} should be real, got {z}")
    return z.real


# -- Hilbert space ----------------------------------------------------------------


def check_hilbert_mccarty(T, x, r, tol=None):
    """``<T x, x>^r <= ||x||^(2(r-1)) <T^r x, x>`` for ``r >= 1``, reversed for ``0 < r <= 1``."""
    T = require_positive(T, "T")
    x = _nonzero(x).reshape(-1)
    if x.shape[0] != T.shape[0]:
        raise PreconditionError(f"vector of length {x.shape[0]} for a {T.shape} operator")
    r = _check_exponent(r)
    dec = hermitian_eig(T)
    tx = _real(np.vdot(x, T @ x), "<Tx, x>")
    trx = _real(np.vdot(x, matrix_power(T, r, dec) @ x), "<T^r x, x>")
    norm2 = float(np.vdot(x, x).real)
    lhs = max(tx, 0.0) ** r
    rhs = norm2 ** (r - 1.0) * trx
    return _scalar_report("hilbert-mccarty", r, lhs, rhs, r >= 1.0, tol)


# -- states ---------------------------------------------------------------------------


def resolve_function(f, t, positive):
    """Turn a label into a catalog function on ``[0, ||t||]`` for positive ``t``,
    otherwise on ``[-||t||, ||t||]``."""
    if isinstance(f, ScalarFunction):
        return f
    lam = hermitian_eig(t).eigenvalues
    norm = float(np.max(np.abs(lam))) if lam.size else 0.0
    positive = positive or psd_verdict(t).is_psd
    if natural_domain(f)[0] == 0.0 and not positive:
        raise DomainError(f"{f} is only defined for u >= 0 but t is not positive")
    a = 0.0 if positive else -norm
    return catalog_function(f, a, norm)


def check_mond_pecaric_state(t, rho, x, f, tol=None):
    """``f(rho(<t x0, x0>)) <= rho(<f(t) x0, x0>)`` with ``x0`` the
    ``rho``-normalization of ``x``.

    ``f`` is a :class:`ScalarFunction` whose domain contains the spectrum of
    ``t``, or a catalog label (placed on ``[0, ||t||]`` when ``t`` is positive
    and on ``[-||t||, ||t||]`` otherwise).
    """
    t = require_hermitian(t)
    x = _nonzero(x)
    f = resolve_function(f, t, positive=False)
    if not convexity_check(f):
        raise PreconditionError(f"{f.label} is not convex on [{f.a:g}, {f.b:g}]")
    dec = hermitian_eig(t)
    lam = dec.eigenvalues
    slack = 1e-10 * max(1.0, float(np.max(np.abs(lam))))
    if lam[0] < f.a - slack or lam[-1] > f.b + slack:
        raise DomainError(
            f"spectrum [{lam[0]:.6g}, {lam[-1]:.6g}] of t is not inside [{f.a:g}, {f.b:g}]"
        )

    mass = _real(eval_state(rho, compression(np.eye(x.shape[0]), x)), "rho(<x, x>)")
    if mass <= DEGENERATE_ATOL:
        return InequalityReport(
            "mond-pecaric-state", f.label, 0.0, 0.0, 0.0, True, 0.0, degenerate=True
        )
    x0 = x / math.sqrt(mass)
    arg = _real(eval_state(rho, compression(t, x0)), "rho(<t x0, x0>)")
    arg = min(max(arg, f.a), f.b)
    lhs = float(f(arg))
    rhs = _real(eval_state(rho, compression(matrix_function(t, f, dec), x0)), "rho(<f(t) x0, x0>)")
    return _scalar_report("mond-pecaric-state", f.label, lhs, rhs, True, tol)


def check_state_mccarty(t, rho, x, r, tol=None):
    """``rho(<t x, x>)^r <= ||x||^(2(r-1)) rho(<t^r x, x>)`` for ``r >= 1``, reversed below 1."""
    t = require_positive(t)
    x = _nonzero(x)
    r = _check_exponent(r)
    mass = _real(eval_state(rho, compression(np.eye(x.shape[0]), x)), "rho(<x, x>)")
    a = max(_real(eval_state(rho, compression(t, x)), "rho(<t x, x>)"), 0.0)
    b = _real(eval_state(rho, compression(matrix_power(t, r), x)), "rho(<t^r x, x>)")
    norm = module_norm(x)
    lhs = a**r
    rhs = norm ** (2.0 * (r - 1.0)) * b
    return _scalar_report(
        "state-mccarty", r, lhs, rhs, r >= 1.0, tol, degenerate=mass <= DEGENERATE_ATOL
    )


def check_norm_mccarty(t, x, r, tol=None):
    """``||<t x, x>||^r <= ||x||^(2(r-1)) ||<t^r x, x>||`` for ``r >= 1``, reversed below 1."""
    t = require_positive(t)
    x = _nonzero(x)
    r = _check_exponent(r)
    a = _psd_norm(compression(t, x))
    b = _psd_norm(compression(matrix_power(t, r), x))
    norm = module_norm(x)
    return _scalar_report("norm-mccarty", r, a**r, norm ** (2.0 * (r - 1.0)) * b, r >= 1.0, tol)


def _spectrum_is_psd(lam):
    return lam.size == 0 or lam[0] >= -default_psd_tolerance(float(np.max(np.abs(lam))))


def _psd_norm(m):
    lam = hermitian_eig(m).eigenvalues
    return float(np.max(np.abs(lam))) if lam.size else 0.0


# -- Loewner order ---------------------------------------------------------------------


def loewner_sides(t, x, r, dec=None):
    """``A = (x* t x)^r`` and ``B = ||x||^(2(r-1)) x* t^r x``."""
    a = matrix_power(compression(t, x), r)
    norm = module_norm(x)
    b = norm ** (2.0 * (r - 1.0)) * compression(matrix_power(t, r, dec), x)
    b = 0.5 * (b + b.conj().T)
    return a, b


def check_loewner_mccarty(t, x, r, tol=None):
    """Loewner-order form of the McCarty inequality in ``M_n`` viewed as a module over itself.

    For ``r >= 1`` the oriented difference is ``C = B - A``; for ``r < 1`` it
    is ``C = A - B``. The inequality holds iff ``C`` is PSD.
    """
    t = require_hermitian(t)
    dec = hermitian_eig(t)
    if not _spectrum_is_psd(dec.eigenvalues):
        raise PreconditionError("t must be a positive operator")
    x = _nonzero(x)
    r = _check_exponent(r)
    a, b = loewner_sides(t, x, r, dec)
    c = b - a if r >= 1.0 else a - b
    verdict = psd_verdict(c, tol)
    return InequalityReport(
        "loewner-mccarty", r, a, b, c, verdict.is_psd, verdict.tolerance, verdict.min_eigenvalue
    )


def check_commutative_loewner(t, x, r, tol=None):
    """Loewner McCarty inequality in the diagonal algebra, checked at every pure state."""
    if not isinstance(t, DiagonalAlgebraElement):
        t = DiagonalAlgebraElement.from_matrix(t)
    if not isinstance(x, DiagonalAlgebraElement):
        x = DiagonalAlgebraElement.from_matrix(x)
    if t.dim != x.dim:
        raise PreconditionError("t and x live in different algebras")
    if not t.is_self_adjoint or np.any(t.values.real < 0):
        raise PreconditionError("t must have non-negative real entries")
    if not np.any(x.values):
        raise PreconditionError("x must be nonzero")
    r = _check_exponent(r)

    tv = t.values.real
    x2 = np.abs(x.values) ** 2
    norm2 = float(np.max(x2))
    lhs = (x2 * tv) ** r
    rhs = norm2 ** (r - 1.0) * x2 * tv**r
    diff = rhs - lhs if r >= 1.0 else lhs - rhs
    if tol is None:
        tol = SCALAR_RTOL * max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
    states = pure_states_diagonal(t.dim)
    at_states = [eval_state(s, np.diag(diff)).real for s in states]
    lo = float(min(at_states))
    return InequalityReport(
        "commutative-loewner", r, np.diag(lhs), np.diag(rhs), np.diag(diff),
        lo >= -tol, float(tol), lo, extras={"pure_state_values": at_states},
    )


# -- the two published M_2(C) witnesses ------------------------------------------------

PUBLISHED_INSTANCES = (
    {
        "name": "r=3",
        "x": [[1, 1], [0, 1]],
        "t": [[2, 1], [1, 2]],
        "r": 3.0,
        "A": [[98, 183], [183, 342]],
        "B": [[95.9574, 185.0608], [185.0608, 370.1215]],
        "C": [[-2.0426, 2.0608], [2.0608, 28.1215]],
        "det_C": None,
        "A_atol": 1e-9,
    },
    {
        "name": "r=1/4",
        "x": [[9, 9], [1, -25]],
        "t": [[125, 75], [75, 45]],
        "r": 0.25,
        "A": [[8.0901, -5.0563], [-5.0563, 3.1602]],
        "B": [[1.7772, -1.1105], [-1.1105, 0.6956]],
        "C": [[6.3130, -3.9458], [-3.9458, 2.4646]],
        "det_C": -0.0108,
        "A_atol": 2e-3,
    },
)
PRINTED_ATOL = 2e-3


def _compare(name, label, got, want, atol):
    got = np.asarray(got)
    want = np.asarray(want, dtype=np.float64)
    err = np.abs(got - want)
    if np.any(err > atol):
        i, j = np.unravel_index(int(np.argmax(err)), err.shape)
        return f"instance {name}: {label}[{i + 1},{j + 1}] = {got[i, j].real:.6f}, published {want[i, j]:.4f}"
    return None


def reproduce_paper_counterexamples(strict=True):
    """Run the Loewner checker on the two published ``M_2(C)`` witnesses.

    Each report's ``extras`` carries ``det_C`` and ``mismatches``, the list of
    entries that disagree with the published values. With ``strict=True`` the
    first mismatch raises :class:`ReproductionError`.
    """
    reports = []
    for inst in PUBLISHED_INSTANCES:
        rep = check_loewner_mccarty(inst["t"], inst["x"], inst["r"])
        c = np.asarray(rep.difference)
        det_c = float(np.linalg.det(c).real)
        problems = []
        problems.append(_compare(inst["name"], "A", rep.lhs.real, inst["A"], inst["A_atol"]))
        problems.append(_compare(inst["name"], "B", rep.rhs.real, inst["B"], PRINTED_ATOL))
        problems.append(_compare(inst["name"], "C", c.real, inst["C"], PRINTED_ATOL))
        if inst["det_C"] is not None and abs(det_c - inst["det_C"]) > PRINTED_ATOL:
            problems.append(
                f"instance {inst['name']}: det(C) = {det_c:.6g}, published {inst['det_C']}"
            )
        if rep.holds:
            problems.append(
                f"instance {inst['name']}: C is PSD (min eigenvalue {rep.min_eigenvalue:.3g}), "
                "published as a violation"
            )
        problems = [p for p in problems if p]
        rep.extras.update(name=inst["name"], x=np.asarray(inst["x"], dtype=float),
                          t=np.asarray(inst["t"], dtype=float), det_C=det_c,
                          mismatches=problems)
        reports.append(rep)
    if strict:
        for rep in reports:
            if rep.extras["mismatches"]:
                raise ReproductionError(rep.extras["mismatches"][0])
    return reports


# -- counterexample search -------------------------------------------------------------


SEARCH_FAMILIES = ("loewner-r>1", "loewner-r<1")
DISTRIBUTIONS = ("real-gaussian", "complex-gaussian", "integer-small")


@dataclass(frozen=True)
class SearchConfig:
    dim: int
    r_range: tuple
    trials: int
    seed: int
    entry_distribution: str = "real-gaussian"

    def __post_init__(self):
        lo, hi = float(self.r_range[0]), float(self.r_range[1])
        if self.trials < 0:
            raise UsageError("trials must be non-negative")
        if self.dim < 1:
            raise UsageError("dim must be positive")
        if not 0 < lo <= hi:
            raise UsageError(f"bad exponent range [{lo}, {hi}]")
        if lo - 1e-3 < 1.0 < hi + 1e-3:
            raise UsageError("exponent range must stay at least 1e-3 away from r = 1")
        if self.entry_distribution not in DISTRIBUTIONS:
            raise UsageError(f"unknown distribution {self.entry_distribution!r}")
        object.__setattr__(self, "r_range", (lo, hi))


@dataclass(frozen=True)
class Finding:
    index: int
    r: float
    t: np.ndarray
    x: np.ndarray
    min_eigenvalue: float
    tolerance: float


def _draw(rng, dist, n):
    if dist == "real-gaussian":
        return rng.standard_normal((n, n)).astype(np.complex128)
    if dist == "complex-gaussian":
        return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return rng.integers(-3, 4, size=(n, n)).astype(np.complex128)


def search_candidate(cfg, k):
    """Instance number ``k`` of a search; depends only on ``(cfg.seed, k)``."""
    rng = np.random.default_rng([cfg.seed, k])
    g = _draw(rng, cfg.entry_distribution, cfg.dim)
    t = g.conj().T @ g
    x = _draw(rng, cfg.entry_distribution, cfg.dim)
    r = float(rng.uniform(*cfg.r_range))
    return t, x, r


def search_counterexamples(cfg, family):
    """Seeded random search for violations of the Loewner McCarty inequality.

    Returns findings whose oriented difference has smallest eigenvalue below
    ``-10 * tolerance``, sorted by that eigenvalue (most negative first).
    """
    if family not in SEARCH_FAMILIES:
        raise UsageError(
            f"cannot search family {family!r}: only {', '.join(SEARCH_FAMILIES)} can fail"
        )
    lo, hi = cfg.r_range
    if family == "loewner-r>1" and lo <= 1.0:
        raise UsageError("family loewner-r>1 needs exponents above 1")
    if family == "loewner-r<1" and hi >= 1.0:
        raise UsageError("family loewner-r<1 needs exponents below 1")

    findings = []
    for k in range(cfg.trials):
        t, x, r = search_candidate(cfg, k)
        if not np.any(x):
            continue
        rep = check_loewner_mccarty(t, x, r)
        if rep.min_eigenvalue < -10.0 * rep.tolerance:
            findings.append(Finding(k, r, t, x, rep.min_eigenvalue, rep.tolerance))
    findings.sort(key=lambda f: (f.min_eigenvalue, f.index))
    return findings
