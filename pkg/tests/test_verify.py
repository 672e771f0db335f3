from __future__ import annotations

import json
from fractions import Fraction

import pytest

from arboreal.flow import FlowError, normalization_field, run_normalization_flow
from arboreal.fronts import h_poly
from arboreal.poly import NotDivisible, parse_poly, poly_prod, var
from arboreal.trees import SignedRootedTree, TreeError, enumerate_signed_trees
from arboreal.verify import (
    SUITE,
    VerificationReport,
    check_divisibility_hypothesis,
    check_telescoping,
    edge_sign,
    reports_json,
    run_all,
    scaling_field,
    telescoping_sum,
)

CAPS = {"tilt": 4, "inductive-coordinate-change": 4, "sign": 3, "liouville": 4, "front-identities": 3}


@pytest.mark.parametrize("name", list(SUITE))
def test_each_check_passes(name):
    rep = SUITE[name](CAPS.get(name, 4))
    assert rep.passed, rep.counterexample
    assert rep.details["cases"] > 0


def test_report_status_matches_counterexample():
    with pytest.raises(ValueError):
        VerificationReport("x", "1", "pass", "boom", 0.0)
    with pytest.raises(ValueError):
        VerificationReport("x", "1", "fail", None, 0.0)
    assert not VerificationReport("x", "1", "fail", "boom", 0.0).passed


def test_scaling_field_fixes_the_model_equation():
    for n in range(1, 6):
        f = var("x0") - h_poly(n) ** 2
        assert scaling_field(n).apply(f) == f


def test_telescoping_cofactors():
    for n in range(2, 7):
        e = telescoping_sum(n)
        corrected = poly_prod(h_poly(n, j) for j in range(n - 1)) * h_poly(n, n - 1) ** 2
        assert e.divide_exact(corrected) == (-1) ** (n - 1)
        displayed = poly_prod(h_poly(n, j) for j in range(n))
        assert e.divide_exact(displayed) == var(f"x{n}").scale((-1) ** (n - 1))
    rep = check_telescoping(6)
    assert rep.details["cofactor_signs"] == [(-1) ** (n - 1) for n in range(2, 7)]
    assert rep.details["displayed_final_line_matches"] is False


def test_divisibility_hypothesis_examples():
    assert check_divisibility_hypothesis(2, parse_poly("1")) == (True, 0)
    assert check_divisibility_hypothesis(2, parse_poly("1 + x2^2")) == (True, 1)
    assert check_divisibility_hypothesis(2, parse_poly("1 + x2")) == (False, None)
    prod = poly_prod(h_poly(3, j) ** 2 for j in (1, 2))
    ok, beta = check_divisibility_hypothesis(3, 1 + prod * parse_poly("x1 - 2"))
    assert ok and beta == parse_poly("x1 - 2")
    with pytest.raises(ValueError):
        check_divisibility_hypothesis(1, parse_poly("1"))
    with pytest.raises(ValueError):
        check_divisibility_hypothesis(2, parse_poly("1 + x3"))


def test_edge_sign_reads_the_tree_sign():
    for t in enumerate_signed_trees(5):
        for a, b in t.edges:
            if a != t.root:
                assert edge_sign(t, f"{a}-{b}") == t.sign(a, b)


def test_edge_sign_rejects_bad_edges():
    t = SignedRootedTree("r", (("r", "a"), ("a", "b")), {"a-b": -1})
    assert edge_sign(t, "a-b") == -1
    with pytest.raises(TreeError):
        edge_sign(t, "r-a")
    with pytest.raises(TreeError):
        edge_sign(t, "ab")
    with pytest.raises(ValueError):
        edge_sign(t, "a-b", eta="horizontal")


def test_run_all_is_serializable_and_skips_low_dimensions():
    reps = run_all(1)
    names = [r.lemma for r in reps]
    assert "telescoping" not in names and all(r.passed for r in reps)
    data = json.loads(reports_json(reps))
    assert [d["lemma"] for d in data] == names


# ------------------------------------------------------------------ flow
def test_flow_field_closed_form():
    ff = normalization_field(Fraction(1, 10))
    assert ff.numerator == (h_poly(2)).scale(Fraction(-1, 10))
    assert ff.denominator == parse_poly("1 + 1/10*t*x2^2")


def test_flow_field_vanishes_on_the_first_factor_only():
    # the field is a multiple of h_(2,0) but not of h_(2,1) = x2
    ff = normalization_field(Fraction(1, 10))
    assert not isinstance(ff.divisible_by(h_poly(2, 0)), NotDivisible)
    rem = ff.divisible_by(h_poly(2, 1))
    assert isinstance(rem, NotDivisible)
    assert rem.remainder == parse_poly("-1/10*x1")


def test_zero_beta_is_the_identity_flow():
    ff = normalization_field(0)
    assert ff.numerator == 0 and ff.denominator == 1
    rep = run_normalization_flow(0, steps=20, res=5, order_res=2, precision=30)
    assert rep.graph_deviation <= 1e-15 and rep.zero_section_deviation == 0.0


def test_flow_meets_its_tolerances():
    rep = run_normalization_flow()
    assert rep.graph_deviation <= 1e-6
    assert rep.zero_section_deviation <= 1e-9
    assert rep.gamma1_deviation <= 1e-9
    assert rep.order_ratio >= 12
    assert rep.passed()
    assert rep.divisible_by_h20 and not rep.divisible_by_h21


def test_flow_errors():
    with pytest.raises(FlowError):
        run_normalization_flow(steps=2)
    with pytest.raises(FlowError):
        run_normalization_flow(box=0)
    with pytest.raises(FlowError):
        run_normalization_flow(beta=-100, box=1)
    with pytest.raises(FlowError):
        run_normalization_flow(beta=100, box=1, steps=50, res=5, order_res=2)
