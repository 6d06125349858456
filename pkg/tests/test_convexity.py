import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from cstar_ineq.convexity import (
    CATALOG_LABELS, ScalarFunction, catalog_function, convexity_check, natural_domain,
    one_sided_derivative, supporting_line, verify_supporting_line,
)
from cstar_ineq.errors import DomainError, PreconditionError, UsageError
from cstar_ineq.suites import CATALOG_DOMAINS


def f_of(ev, a, b, label="f"):
    return ScalarFunction(ev, (a, b), label)


def test_convexity_examples():
    assert convexity_check(f_of(np.square, -1, 1))
    assert not convexity_check(f_of(lambda u: u**3, -1, 1))
    assert convexity_check(catalog_function("negpow:0.5", 0, 1))
    assert not convexity_check(f_of(np.sin, 0, 3))


@pytest.mark.parametrize("label, x0, left, right", [
    ("pow:2", 0.5, 1.0, 1.0),
    ("abs:0", 0.0, -1.0, 1.0),
    ("hinge:0.3", 0.3, 0.0, 1.0),
    ("exp", 1.0, math.e, math.e),
    ("pow:3", 0.7, 1.47, 1.47),
])
def test_one_sided_derivatives(label, x0, left, right):
    f = catalog_function(label, -1, 2) if natural_domain(label)[0] < 0 else catalog_function(label, 0, 2)
    assert one_sided_derivative(f, x0, "left") == pytest.approx(left, abs=1e-5)
    assert one_sided_derivative(f, x0, "right") == pytest.approx(right, abs=1e-5)


def test_infinite_derivatives():
    f = catalog_function("negpow:0.5", 0, 1)
    assert one_sided_derivative(f, 0.0, "right") == -math.inf
    g = f_of(lambda u: -np.sqrt(np.maximum(1 - u, 0)), 0, 1)
    assert one_sided_derivative(g, 1.0, "left") == math.inf
    # finite endpoint derivative of u^(3/2)
    h = catalog_function("pow:1.5", 0, 1)
    assert one_sided_derivative(h, 0.0, "right") == pytest.approx(0, abs=1e-5)


def test_derivative_errors():
    f = catalog_function("pow:2", 0, 1)
    with pytest.raises(DomainError):
        one_sided_derivative(f, 0.0, "left")
    with pytest.raises(UsageError):
        one_sided_derivative(f, 0.5, "up")


def test_supporting_line_examples():
    sq = f_of(np.square, -1, 1)
    line = supporting_line(sq, 0.0, 0.1)
    assert line.c == pytest.approx(0, abs=1e-6) and line.d == pytest.approx(0, abs=1e-9)

    ab = catalog_function("abs:0", -1, 1)
    line = supporting_line(ab, 0.0, 0.1)
    assert line.c == pytest.approx(-1, abs=1e-6) and line.d == pytest.approx(0, abs=1e-9)
    assert verify_supporting_line(ab, line, 0.0, 0.1)[0]

    root = catalog_function("negpow:0.5", 0, 1)
    line = supporting_line(root, 0.0, 0.01)
    assert line.case == "left-endpoint-infinite"
    assert line(0.0) > -0.01
    ok_i, ok_ii, _ = verify_supporting_line(root, line, 0.0, 0.01)
    assert ok_i and ok_ii


def test_supporting_line_right_endpoint():
    g = f_of(lambda u: -np.sqrt(np.maximum(1 - u, 0)), 0, 1)
    line = supporting_line(g, 1.0, 1e-2)
    assert line.case == "right-endpoint-infinite"
    assert all(verify_supporting_line(g, line, 1.0, 1e-2)[:2])
    line = supporting_line(catalog_function("pow:2", 0, 1), 1.0, 1e-2)
    assert line.case == "right-endpoint" and line.c == pytest.approx(2, abs=1e-5)


def test_supporting_line_preconditions():
    with pytest.raises(PreconditionError):
        supporting_line(f_of(lambda u: u**3, -1, 1), 0.0, 0.1)
    with pytest.raises(PreconditionError):
        supporting_line(f_of(np.square, -1, 1), 0.0, 0.0)
    with pytest.raises(DomainError):
        supporting_line(f_of(np.square, -1, 1), 2.0, 0.1)
    assert supporting_line(f_of(np.square, 1, 1), 1.0, 0.1).case == "degenerate"


def test_catalog():
    with pytest.raises(UsageError):
        catalog_function("cosh", 0, 1)
    with pytest.raises(DomainError):
        catalog_function("pow:0.5", -1, 1)
    assert catalog_function("hinge:0.3", -1, 1)(np.array([0.0, 1.0])).tolist() == pytest.approx([0, 0.7])


def _bracket_reachable(label, a, b, x0, eps):
    """Whether 40 halvings of [a, b] get -u^p within eps/2 of its value at 0."""
    if not label.startswith("negpow") or x0 - a > 1e-6 * (b - a):
        return True
    p = float(label.split(":")[1])
    return 4 * (b * 2.0**-40) ** p < eps


def test_bracket_limit_is_reported():
    f = catalog_function("negpow:0.5", 0, 1)
    with pytest.raises(PreconditionError):
        supporting_line(f, 0.0, 1e-6)


def test_near_endpoint_interior_point():
    f = catalog_function("negpow:0.25", 0, 1)
    x0 = 6e-128
    line = supporting_line(f, x0, 1.0)
    assert line.case == "interior-near-endpoint"
    assert all(verify_supporting_line(f, line, x0, 1.0)[:2])


@given(
    st.sampled_from(CATALOG_LABELS),
    st.floats(0, 1),
    st.floats(-6, 0),
    st.sampled_from([1.0, 2.0, 10.0]),
)
def test_supporting_line_property(label, frac, log_eps, b):
    a = CATALOG_DOMAINS[label][0]  # convex from here on
    f = catalog_function(label, a, b)
    x0 = a + frac * (b - a)
    eps = 10.0**log_eps
    assume(_bracket_reachable(label, a, b, x0, eps))
    line = supporting_line(f, x0, eps)
    ok_i, ok_ii, _ = verify_supporting_line(f, line, x0, eps)
    assert ok_i and ok_ii


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-3, 3))
def test_affine_functions_have_exact_lines(c, d, x0):
    f = f_of(lambda u: c * u + d, -3, 3)
    line = supporting_line(f, x0, 1e-6)
    assert line.c == pytest.approx(c, abs=1e-6)
