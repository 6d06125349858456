"""
Seeded property suites: the theorem families, GNS transport, supporting
lines, scalar/diagonal reductions, the published witnesses and the pinned search
regression. Used by ``cstar-ineq suite`` and by the acceptance tests.
"""

from dataclasses import dataclass, field
import math
import time

import numpy as np

from . import inequalities as ineq
from .convexity import (
    CATALOG_LABELS,
    ScalarFunction,
    catalog_function,
    supporting_line,
    verify_supporting_line,
)
from .errors import CStarIneqError
from .linalg import operator_norm
from .localization import build_localization, verify_transport
from .states import DiagonalAlgebraElement, State, make_state, random_state

CATALOG_DOMAINS = {
    "pow:1": (-1.0, 2.0),
    "pow:1.5": (0.0, 2.0),
    "pow:2": (-1.0, 2.0),
    "pow:3": (0.0, 2.0),
    "negpow:0.25": (0.0, 2.0),
    "negpow:0.5": (0.0, 2.0),
    "negpow:0.75": (0.0, 2.0),
    "exp": (-1.0, 2.0),
    "abs:0.3": (-1.0, 2.0),
    "hinge:0.3": (-1.0, 2.0),
}
# labels that are convex on all of [-||t||, ||t||]; the rest use the positive variant
WHOLE_LINE_CONVEX = ("pow:1", "pow:2", "exp", "abs:0.3", "hinge:0.3")

# frozen from the first run of the pinned search (see tests/test_acceptance.py)
PINNED_SEARCH = dict(dim=2, r_range=(2.5, 3.5), trials=100_000, seed=1, entry_distribution="integer-small")
PINNED_SEARCH_COUNT = 69053
PINNED_SEARCH_TOP = (78968, -22587478.3320097)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    trials: int
    failures: int
    elapsed: float
    limit: float = math.inf
    detail: str = ""
    metrics: dict = field(default_factory=dict)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f" - {self.detail}" if self.detail else ""
        return (f"[{status}] {self.name}: {self.trials} trials, {self.failures} failures, "
                f"{self.elapsed:.2f}s (limit {self.limit:g}s){extra}")


def _finish(name, t0, trials, failures, limit, detail="", **metrics):
    elapsed = time.perf_counter() - t0
    return SuiteResult(name, failures == 0 and elapsed < limit, trials, failures,
                       elapsed, limit, detail, metrics)


def _exponent(rng, lo=0.1, hi=4.0):
    while True:
        r = float(rng.uniform(lo, hi))
        if abs(r - 1.0) >= 1e-3:
            return r


def _psd(rng, n, rank=None):
    k = n if rank is None else rank
    g = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
    t = g.conj().T @ g
    return 0.5 * (t + t.conj().T)


def _hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


def _element(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def _state(rng, n, k):
    if k % 3 == 2:
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        return State(np.outer(v, v.conj()))
    return random_state(n, int(rng.integers(2**31)))


# -- published witnesses ----------------------------------------------------------------------


def published_instance(index):
    """Acceptance check of one published witness; see ``reproduce_paper_counterexamples``."""
    t0 = time.perf_counter()
    rep = ineq.reproduce_paper_counterexamples(strict=False)[index]
    problems = rep.extras["mismatches"]
    name = f"published counterexample {rep.extras['name']}"
    detail = "; ".join(problems) if problems else (
        f"min eigenvalue {rep.min_eigenvalue:.4f}, det(C) {rep.extras['det_C']:.4f}"
    )
    return _finish(name, t0, 1, len(problems), 1.0, detail,
                   min_eigenvalue=rep.min_eigenvalue, det_C=rep.extras["det_C"])


# -- theorem families ---------------------------------------------------------------


def theorem_suite(family, trials=1000, seed=0):
    """``trials`` random valid instances of a theorem family; counts violations."""
    rng = np.random.default_rng([seed, ineq.FAMILIES.index(family)])
    failures = 0
    worst = math.inf
    for k in range(trials):
        r = _exponent(rng)
        if family == "hilbert-mccarty":
            n = int(rng.integers(1, 5))
            rep = ineq.check_hilbert_mccarty(_psd(rng, n), rng.standard_normal(n) + 1j * rng.standard_normal(n), r)
        elif family == "state-mccarty":
            m, n = (int(v) for v in rng.integers(1, 5, size=2))
            rep = ineq.check_state_mccarty(_psd(rng, m), _state(rng, n, k), _element(rng, m, n), r)
        elif family == "norm-mccarty":
            m, n = (int(v) for v in rng.integers(1, 5, size=2))
            rep = ineq.check_norm_mccarty(_psd(rng, m), _element(rng, m, n), r)
        elif family == "mond-pecaric-state":
            m, n = (int(v) for v in rng.integers(1, 5, size=2))
            label = CATALOG_LABELS[k % len(CATALOG_LABELS)]
            t = _hermitian(rng, m) if label in WHOLE_LINE_CONVEX else _psd(rng, m)
            rep = ineq.check_mond_pecaric_state(t, _state(rng, n, k), _element(rng, m, n), label)
        elif family == "commutative-loewner":
            n = int(rng.integers(1, 5))
            t = DiagonalAlgebraElement(rng.exponential(size=n))
            x = DiagonalAlgebraElement(rng.standard_normal(n) + 1j * rng.standard_normal(n))
            rep = ineq.check_commutative_loewner(t, x, r)
        else:
            raise ValueError(f"{family} is not a theorem family")
        margin = float(np.min(np.real(rep.difference))) if np.ndim(rep.difference) == 0 else rep.min_eigenvalue
        worst = min(worst, margin / max(rep.tolerance, 1e-300))
        failures += not rep.holds
    return failures, worst


def theorem_suites(trials=1000, seed=0, limit=30.0):
    t0 = time.perf_counter()
    families = ("hilbert-mccarty", "state-mccarty", "norm-mccarty", "mond-pecaric-state", "commutative-loewner")
    per = {}
    for fam in families:
        per[fam] = theorem_suite(fam, trials, seed)
    failures = sum(f for f, _ in per.values())
    detail = ", ".join(f"{fam}: {f}" for fam, (f, _) in per.items())
    return _finish("theorem families", t0, trials * len(families), failures, limit, detail,
                   per_family={k: v[0] for k, v in per.items()})


# -- GNS transport ----------------------------------------------------------------------


def gns_suite(instances=200, seed=0, samples=5, limit=20.0):
    """Random localizations with the three transport identities and ``||T|| <= ||t||``."""
    t0 = time.perf_counter()
    rng = np.random.default_rng([seed, 101])
    failures = 0
    worst = 0.0
    fails = []
    for k in range(instances):
        m, n = (int(v) for v in rng.integers(1, 4, size=2))
        rho = _state(rng, n, k)
        loc = build_localization(m, n, rho)
        t = _hermitian(rng, m)
        norm = operator_norm(t)
        tp = _psd(rng, m, rank=int(rng.integers(1, m + 1)))
        cases = (
            (t, catalog_function("pow:3", -norm, norm)),
            (tp, catalog_function("pow:0.5", 0.0, operator_norm(tp))),
            (t, catalog_function("exp", -norm, norm)),
        )
        for tt, f in cases:
            rep = verify_transport(loc, tt, f, samples, int(rng.integers(2**31)))
            worst = max(worst, rep.residual_operator / rep.tolerance,
                        rep.residual_function / rep.tolerance, rep.residual_inner / rep.tolerance)
            if not rep.passed:
                failures += 1
                fails.append((k, f.label))
    dims = {
        "faithful": build_localization(2, 2, make_state(np.eye(2) / 2)).dim_quotient,
        "rank-1": build_localization(2, 2, make_state(np.diag([1.0, 0.0]))).dim_quotient,
    }
    if dims != {"faithful": 4, "rank-1": 2}:
        failures += 1
    detail = f"quotient dims {dims['faithful']}/{dims['rank-1']}, worst residual/tolerance {worst:.2e}"
    if fails:
        detail += f", failing {fails[:3]}"
    return _finish("GNS transport", t0, instances, failures, limit, detail, worst_ratio=worst)


# -- supporting lines --------------------------------------------------------------------


def supporting_line_suite(pairs=50, seed=0, limit=10.0):
    t0 = time.perf_counter()
    rng = np.random.default_rng([seed, 202])
    failures = 0
    bad = []
    trials = 0
    for label in CATALOG_LABELS:
        f = catalog_function(label, *CATALOG_DOMAINS[label])
        for _ in range(pairs):
            x0 = float(rng.uniform(f.a, f.b))
            eps = float(10.0 ** rng.uniform(-6, 0))
            line = supporting_line(f, x0, eps)
            ok_i, ok_ii, _ = verify_supporting_line(f, line, x0, eps)
            trials += 1
            if not (ok_i and ok_ii):
                failures += 1
                bad.append((label, x0, eps))
    endpoint_cases = (
        (catalog_function("negpow:0.5", 0.0, 1.0), 0.0, "left-endpoint-infinite"),
        (ScalarFunction(lambda u: -np.sqrt(np.maximum(1.0 - u, 0.0)), (0.0, 1.0), "-(1-u)^1/2"),
         1.0, "right-endpoint-infinite"),
    )
    for f, x0, case in endpoint_cases:
        for eps in (1e-1, 1e-2, 1e-3):
            line = supporting_line(f, x0, eps)
            ok_i, ok_ii, _ = verify_supporting_line(f, line, x0, eps)
            trials += 1
            if not (ok_i and ok_ii and line.case == case):
                failures += 1
                bad.append((f.label, x0, eps))
    detail = f"failing {bad[:3]}" if bad else "conditions (i) and (ii) hold on a 10001-point grid"
    return _finish("supporting lines", t0, trials, failures, limit, detail)


# -- reductions -------------------------------------------------------------------------


def reduction_suite(trials=500, seed=0):
    t0 = time.perf_counter()
    rng = np.random.default_rng([seed, 303])
    scalar_mismatch = 0
    for _ in range(trials):
        r = _exponent(rng)
        t = float(rng.exponential())
        x = complex(rng.standard_normal(), rng.standard_normal())
        lo = ineq.check_loewner_mccarty([[t]], [[x]], r)
        hi = ineq.check_hilbert_mccarty([[t]], [x], r)
        scalar_mismatch += lo.holds != hi.holds
    diag_mismatch = 0
    for _ in range(trials):
        r = _exponent(rng)
        n = int(rng.integers(1, 5))
        tv = rng.exponential(size=n)
        xv = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lo = ineq.check_loewner_mccarty(np.diag(tv), np.diag(xv), r)
        co = ineq.check_commutative_loewner(DiagonalAlgebraElement(tv), DiagonalAlgebraElement(xv), r)
        diag_mismatch += (lo.holds != co.holds) or not lo.holds
    detail = f"scalar mismatches {scalar_mismatch}, diagonal mismatches {diag_mismatch}"
    return _finish("reductions", t0, 2 * trials, scalar_mismatch + diag_mismatch, math.inf, detail)


# -- search regression -------------------------------------------------------------------


def search_regression(expected_count=None, expected_top=None, config=None, limit=60.0):
    """Run the pinned search and compare with the frozen count and top witness."""
    cfg = ineq.SearchConfig(**(config or PINNED_SEARCH))
    expected_count = PINNED_SEARCH_COUNT if expected_count is None else expected_count
    expected_top = PINNED_SEARCH_TOP if expected_top is None else expected_top
    t0 = time.perf_counter()
    findings = ineq.search_counterexamples(cfg, "loewner-r>1")
    top = findings[0] if findings else None
    failures = 0
    if expected_count is not None and len(findings) != expected_count:
        failures += 1
    if expected_top is not None and (
        top is None or top.index != expected_top[0]
        or abs(top.min_eigenvalue - expected_top[1]) > 1e-9 * max(1.0, abs(expected_top[1]))
    ):
        failures += 1
    detail = f"{len(findings)} findings"
    if top is not None:
        detail += f", top witness #{top.index} r={top.r:.6f} min eigenvalue {top.min_eigenvalue:.6g}"
    return _finish("search regression", t0, cfg.trials, failures, limit, detail,
                   count=len(findings), top=None if top is None else (top.index, top.min_eigenvalue))


def run_all(seed=0, search=True):
    results = [published_instance(0), published_instance(1)]
    for fn in (theorem_suites, gns_suite, supporting_line_suite, reduction_suite):
        try:
            results.append(fn(seed=seed))
        except CStarIneqError as exc:
            results.append(SuiteResult(fn.__name__, False, 0, 1, 0.0, detail=f"error: {exc}"))
    if search:
        results.append(search_regression())
    return results
