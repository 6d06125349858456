"""
Convex functions on a closed interval and their supporting lines.

:func:`supporting_line` builds an affine minorant ``l(x) = c x + d`` of a
continuous convex ``f`` on ``[a, b]`` with ``f(x0) < l(x0) + eps``.
At interior points the slope is the left derivative, or the right one
when ``x0`` is too close to ``a`` for difference quotients on the left.
At an endpoint with a finite one-sided derivative the line is the
tangent there. When the one-sided
derivative at the endpoint is infinite, the construction moves to a nearby
point where ``f`` is within ``eps/2`` of its endpoint value and uses the
tangent there instead.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError, PreconditionError, UsageError

VERIFY_GRID = 10001
DIVERGENCE_THRESHOLD = 1e8
STEP_EXPONENTS = range(2, 9)  # h = 1e-2 .. 1e-8 times the interval length
BRACKET_LEVELS = 40
BRACKET_GRID = 1001
CONTRACTION_LIMIT = 0.95
MIN_ROOM = 1e-6  # relative to b - a


@dataclass(frozen=True)
class ScalarFunction:
    """A real function on a closed interval ``[a, b]``.

    ``evaluator`` must accept numpy arrays.
    """

    evaluator: object
    domain: tuple
    label: str = "f"

    def __post_init__(self):
        a, b = float(self.domain[0]), float(self.domain[1])
        if not a <= b:
            raise DomainError(f"empty domain [{a}, {b}]")
        object.__setattr__(self, "domain", (a, b))

    @property
    def a(self):
        return self.domain[0]

    @property
    def b(self):
        return self.domain[1]

    def __call__(self, u):
        with np.errstate(all="ignore"):
            return self.evaluator(np.asarray(u, dtype=np.float64))

    def restrict(self, a, b):
        return ScalarFunction(self.evaluator, (a, b), self.label)

    def grid(self, points=VERIFY_GRID):
        return np.linspace(self.a, self.b, points)


@dataclass(frozen=True)
class SupportingLine:
    c: float
    d: float
    case: str = field(default="", compare=False)

    def __call__(self, x):
        return self.c * np.asarray(x, dtype=np.float64) + self.d


# -- catalog -------------------------------------------------------------------


def _pow(r):
    if float(r).is_integer():
        k = int(r)
        return lambda u: u**k
    return lambda u: np.where(u >= 0, np.abs(u) ** r, np.nan)


def _parse_param(label, text):
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"bad parameter in function label {label!r}") from None


def natural_domain(label):
    """Largest interval on which the catalog function ``label`` is defined."""
    name, _, arg = label.partition(":")
    if name in ("pow", "negpow"):
        r = _parse_param(label, arg)
        if float(r).is_integer() and r >= 0:
            return (-math.inf, math.inf)
        return (0.0, math.inf)
    if name in ("exp", "id", "abs", "hinge"):
        return (-math.inf, math.inf)
    raise UsageError(f"unknown function label {label!r}")


def catalog_function(label, a, b):
    """Catalog function by label, restricted to ``[a, b]``.

    Labels: ``pow:r`` (u^r), ``negpow:r`` (-u^r), ``exp``, ``abs:c0``
    (|u - c0|), ``hinge:c0`` (max(0, u - c0)), ``id``.
    """
    lo, hi = natural_domain(label)
    if a < lo or b > hi:
        raise DomainError(f"{label} is only defined on [{lo}, {hi}], not on [{a}, {b}]")
    name, _, arg = label.partition(":")
    if name == "pow":
        ev = _pow(_parse_param(label, arg))
    elif name == "negpow":
        p = _pow(_parse_param(label, arg))
        ev = lambda u: -p(u)  # noqa: E731
    elif name == "exp":
        ev = np.exp
    elif name == "id":
        ev = lambda u: u * 1.0  # noqa: E731
    elif name == "abs":
        c0 = _parse_param(label, arg)
        ev = lambda u: np.abs(u - c0)  # noqa: E731
    else:
        c0 = _parse_param(label, arg)
        ev = lambda u: np.maximum(0.0, u - c0)  # noqa: E731
    return ScalarFunction(ev, (a, b), label)


CATALOG_LABELS = (
    "pow:1", "pow:1.5", "pow:2", "pow:3",
    "negpow:0.25", "negpow:0.5", "negpow:0.75",
    "exp", "abs:0.3", "hinge:0.3",
)


# -- convexity -------------------------------------------------------------------


def convexity_check(f, grid_points=1001):
    """Midpoint-convexity test on a uniform grid.

    All pairs are tested when the grid has at most 201 points; otherwise all
    pairs of a strided subgrid of at most 201 points plus every consecutive
    triple of the full grid.
    """
    if grid_points < 3:
        raise UsageError("convexity_check needs at least 3 grid points")
    u = f.grid(grid_points)
    fu = f(u)
    if not np.all(np.isfinite(fu)):
        return False

    # consecutive triples: midpoints lie on the grid
    lhs = fu[1:-1]
    rhs = 0.5 * (fu[:-2] + fu[2:])
    slack = 1e-12 * (1.0 + np.abs(fu[:-2]) + np.abs(fu[2:]))
    if np.any(lhs > rhs + slack):
        return False

    stride = max(1, math.ceil((grid_points - 1) / 200))
    sub = u[::stride]
    fs = fu[::stride]
    mid = 0.5 * (sub[:, None] + sub[None, :])
    fm = f(mid)
    avg = 0.5 * (fs[:, None] + fs[None, :])
    slack = 1e-12 * (1.0 + np.abs(fs[:, None]) + np.abs(fs[None, :]))
    return bool(np.all(fm <= avg + slack))


# -- one-sided derivatives --------------------------------------------------------


def _steps(f, x0, side):
    room = (f.b - x0) if side == "right" else (x0 - f.a)
    if room <= 0:
        raise DomainError(f"no room on the {side} of {x0} inside [{f.a}, {f.b}]")
    base = min(f.b - f.a, room)
    h = np.array([base * 10.0**-k for k in STEP_EXPONENTS])
    # steps below the spacing of floats at x0 do not move the abscissa
    sign = 1.0 if side == "right" else -1.0
    h = h[x0 + sign * h != x0]
    return h if h.size else np.array([room])


def difference_quotients(f, x0, side, steps=None):
    """Quotients ``(f(x0 +/- h) - f(x0)) / (+/- h)`` for decreasing ``h``."""
    h = _steps(f, x0, side) if steps is None else np.asarray(steps, dtype=np.float64)
    sign = 1.0 if side == "right" else -1.0
    pts = np.clip(x0 + sign * h, f.a, f.b)
    dh = pts - x0
    return (f(pts) - f(x0)) / dh


def one_sided_derivative(f, x0, side):
    """Left or right derivative of a convex function, possibly infinite.

    Quotients over ``h = 1e-2 .. 1e-8`` (relative to the interval) are
    monotone for convex ``f``. Their successive differences are treated as a
    geometric tail, using the last two differences that stand clear of
    rounding noise. A tail that does not contract, or a limit beyond ``1e8``
    in magnitude, is reported as ``-inf`` (right side) or ``+inf`` (left).
    """
    if side not in ("left", "right"):
        raise UsageError(f"side must be 'left' or 'right', got {side!r}")
    if not f.a <= x0 <= f.b:
        raise DomainError(f"{x0} is outside [{f.a}, {f.b}]")
    h = _steps(f, x0, side)
    q = difference_quotients(f, x0, side, h)
    if not np.all(np.isfinite(q)):
        raise DomainError(f"function is not finite near {x0}")
    infinite = -math.inf if side == "right" else math.inf
    if abs(q[-1]) > DIVERGENCE_THRESHOLD:
        return infinite
    if q.size == 1:
        return float(q[0])

    # rounding floor of each quotient: errors in f and in the abscissa x0 +/- h
    fscale = max(1.0, abs(float(f(x0))))
    noise = 4.0 * np.finfo(float).eps * (fscale + abs(x0) * np.abs(q)) / h
    d = np.diff(q)
    significant = np.abs(d) > 100.0 * (noise[:-1] + noise[1:])
    if not significant.any():
        return float(q[0])
    j = int(np.flatnonzero(significant)[-1])
    ratio = d[j] / d[j - 1] if j >= 1 and significant[j - 1] else 0.0
    if ratio >= CONTRACTION_LIMIT:
        return infinite
    ratio = max(ratio, 0.0)
    est = float(q[j + 1] + d[j] * ratio / (1.0 - ratio))
    if abs(est) > DIVERGENCE_THRESHOLD:
        return infinite
    return est


# -- supporting lines --------------------------------------------------------------


def _tangent(f, x, slope, case):
    fx = float(f(x))
    return SupportingLine(float(slope), fx - float(slope) * x, case)


def _endpoint_bracket(f, x0, eps, at_left):
    """Shrink ``[a, a + delta]`` (or ``[b - delta, b]``) until ``f`` stays within ``eps/2`` of ``f(x0)``
    and below it, then return the grid minimizer of ``f`` on the bracket."""
    fx0 = float(f(x0))
    width = f.b - f.a
    for k in range(1, BRACKET_LEVELS + 1):
        delta = width * 2.0**-k
        if at_left:
            xs = np.linspace(f.a, f.a + delta, BRACKET_GRID)
        else:
            xs = np.linspace(f.b - delta, f.b, BRACKET_GRID)
        fx = f(xs)
        inner = fx[1:] if at_left else fx[:-1]
        if np.max(np.abs(fx - fx0)) >= 0.5 * eps or np.any(inner >= fx0):
            continue
        i = int(np.argmin(fx))
        x1 = float(xs[i])
        if x1 == x0:
            continue
        return x1
    raise PreconditionError(
        f"no bracket found near {x0}: f is not continuous there or eps={eps:g} is too small"
    )


def supporting_line(f, x0, epsilon):
    """Affine ``l`` with ``f >= l`` on ``[a, b]`` and ``f(x0) < l(x0) + epsilon``.

    Raises
    ------
    PreconditionError
        If ``f`` fails :func:`convexity_check` or ``epsilon <= 0``.
    """
    if not epsilon > 0:
        raise PreconditionError("epsilon must be positive")
    if not f.a <= x0 <= f.b:
        raise DomainError(f"{x0} is outside [{f.a}, {f.b}]")
    if not convexity_check(f):
        raise PreconditionError(f"{f.label} is not convex on [{f.a}, {f.b}]")
    if f.a == f.b:
        return SupportingLine(0.0, float(f(x0)), "degenerate")

    if f.a < x0 < f.b:
        # any slope in [f'_-(x0), f'_+(x0)] supports f at x0; the right one is
        # used only when the left side is too short for the difference quotients
        left_room, right_room = x0 - f.a, f.b - x0
        short = left_room < MIN_ROOM * (f.b - f.a) and left_room < right_room
        slope = one_sided_derivative(f, x0, "right" if short else "left")
        if math.isfinite(slope):
            return _tangent(f, x0, slope, "interior")
        # a steepness this large only occurs within rounding distance of an endpoint
        near_a = x0 - f.a <= f.b - x0
        line = _endpoint_line(f, f.a if near_a else f.b, epsilon, near_a)
        return SupportingLine(line.c, line.d, "interior-near-endpoint")

    return _endpoint_line(f, x0, epsilon, x0 == f.a)


def _endpoint_line(f, x0, epsilon, at_left):
    if at_left:
        slope = one_sided_derivative(f, x0, "right")
        if math.isfinite(slope):
            return _tangent(f, x0, slope, "left-endpoint")
        x1 = _endpoint_bracket(f, x0, epsilon, at_left=True)
        return _tangent(f, x1, one_sided_derivative(f, x1, "left"), "left-endpoint-infinite")

    slope = one_sided_derivative(f, x0, "left")
    if math.isfinite(slope):
        return _tangent(f, x0, slope, "right-endpoint")
    x1 = _endpoint_bracket(f, x0, epsilon, at_left=False)
    x2 = 0.5 * (x1 + f.b)
    return _tangent(f, x2, one_sided_derivative(f, x2, "left"), "right-endpoint-infinite")


def verify_supporting_line(f, line, x0, epsilon, grid_points=VERIFY_GRID):
    """Check ``f >= l`` on a dense grid and ``f(x0) < l(x0) + epsilon``.

    Returns ``(minorant_ok, touches_ok, worst_gap)`` where ``worst_gap`` is
    ``min(f - l)`` over the grid.
    """
    u = f.grid(grid_points)
    fu = f(u)
    scale = max(1.0, float(np.max(np.abs(fu))))
    gap = fu - line(u)
    worst = float(np.min(gap))
    minorant_ok = worst >= -1e-9 * scale
    touches_ok = float(f(x0)) < float(line(x0)) + epsilon
    return minorant_ok, touches_ok, worst
