from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from arboreal.fronts import h_poly
from arboreal.poly import MissingBindingError, NotDivisible, Polynomial, const, parse_poly, var

VARS = ("x0", "x1", "x2", "x3")

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
monomials = st.tuples(*[st.integers(0, 2) for _ in VARS])


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.lists(st.tuples(monomials, coeffs), max_size=max_terms))
    return Polynomial.from_dict({tuple((v, e) for v, e in zip(VARS, m) if e): c for m, c in terms})


points = st.fixed_dictionaries({v: st.fractions(min_value=-3, max_value=3, max_denominator=5) for v in VARS})

h2 = h_poly(2)
h3 = h_poly(3)


# ---------------------------------------------------------------- examples
def test_add_examples():
    assert var("x1") + (-var("x1")) == 0
    assert parse_poly("x1 - x2^2") + parse_poly("x2^2") == var("x1")
    assert h2 + h2 == parse_poly("2*x1 - 2*x2^2")


def test_mul_examples():
    assert (var("x1") * 0).is_zero()
    assert h_poly(1) * h_poly(1) == parse_poly("x1^2")
    assert h2 * h2 == parse_poly("x1^2 - 2*x1*x2^2 + x2^4")


def test_partial_examples():
    assert var("x1").partial("x1") == 1
    assert (h2**2).partial("x1") == parse_poly("2*x1 - 2*x2^2")
    assert (h3**2).partial("x2") == -4 * h3 * parse_poly("x2 - x3^2")


def test_substitute_examples():
    assert h2.substitute({"x2": -var("x2")}) == h2
    assert h_poly(1).substitute({"x1": var("x1") + 1}) == parse_poly("x1 + 1")
    assert h2.substitute({"x1": -var("x1")}) == parse_poly("-x1 - x2^2")


def test_divide_examples():
    assert parse_poly("x1^2").divide_exact(var("x1")) == var("x1")
    assert (h2**2).divide_exact(h2) == h2
    a = parse_poly("x1^2 - 2*x1*x2^2 + x2^4 - x1 + x2^2")
    assert a.divide_exact(h2) == h2 - 1


def test_divide_failure_is_a_value():
    q = parse_poly("x1 + 1").divide_exact(var("x2"))
    assert isinstance(q, NotDivisible)
    assert not q
    with pytest.raises(ZeroDivisionError):
        var("x1").divide_exact(const(0))


def test_evaluate_examples():
    assert h3.evaluate({"x1": 1, "x2": 2, "x3": 1}) == 0
    assert h2.evaluate({"x1": 0, "x2": 0}) == 0
    assert h2.evaluate({"x1": 3, "x2": 1}) == 2


def test_evaluate_missing_binding():
    with pytest.raises(MissingBindingError):
        h2.evaluate({"x1": 1})


def test_canonical_text_round_trip():
    p = parse_poly("x2^4 - 2*x1*x2^2 + x1^2 - 1/3*x3")
    assert parse_poly(str(p)) == p
    assert str(const(Fraction(-1, 3)) * var("x1")) == "-1/3*x1"
    assert str(const(0)) == "0"


def test_no_zero_coefficients_survive():
    p = var("x1") - var("x1") + var("x2")
    assert p.variables == ("x2",)
    assert all(c != 0 for _, c in p.terms())


def test_coefficients_stay_exact_under_iterated_squaring():
    p = h_poly(6) ** 2
    assert all(isinstance(c, (int, Fraction)) for _, c in p.terms())
    assert p.evaluate({f"x{k}": Fraction(1, 3) for k in range(1, 7)}) == Fraction(h_poly(6).evaluate({f"x{k}": Fraction(1, 3) for k in range(1, 7)})) ** 2


def test_lambdify_matches_exact():
    p = h3**2 - parse_poly("1/2*x1*x3 + 7")
    f = p.lambdify(("x1", "x2", "x3"))
    rng = np.random.default_rng(1)
    a = [rng.uniform(-1, 1, 20) for _ in range(3)]
    exact = [float(p.evaluate({"x1": u, "x2": v, "x3": w})) for u, v, w in zip(*a)]
    assert np.allclose(f(*a), exact, atol=1e-12)


def test_interval_bounds_enclose_samples():
    p = parse_poly("1 + 1/10*t*x2^2 - x1*x2")
    box = {"t": (0, 1), "x1": (-1, 1), "x2": (-1, 1)}
    lo, hi = p.interval_bounds(box)
    for t in (0, Fraction(1, 2), 1):
        for a in (-1, 0, 1):
            for b in (-1, Fraction(1, 3), 1):
                assert lo <= p.evaluate({"t": t, "x1": a, "x2": b}) <= hi


# -------------------------------------------------------------- properties
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(polys(), polys())
def test_division_round_trip(a, b):
    if b.is_zero():
        return
    assert (a * b).divide_exact(b) == a


@given(polys(), st.sampled_from(VARS), st.sampled_from(VARS))
def test_partials_commute(a, u, v):
    assert a.partial(u).partial(v) == a.partial(v).partial(u)


@given(polys(), polys(), points)
def test_evaluate_is_a_ring_homomorphism(a, b, p):
    assert (a * b).evaluate(p) == a.evaluate(p) * b.evaluate(p)
    assert (a + b).evaluate(p) == a.evaluate(p) + b.evaluate(p)


@given(polys(), polys(), points)
def test_substitution_commutes_with_evaluation(a, b, p):
    composed = a.substitute({"x1": b})
    inner = dict(p, x1=b.evaluate(p))
    assert composed.evaluate(p) == a.evaluate(inner)
