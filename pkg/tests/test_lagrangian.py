from __future__ import annotations

import itertools
import random

import pytest

from arboreal.fronts import FrontPiece, build_gamma_eps
from arboreal.lagrangian import (
    build_conormal_model,
    conormal_piece,
    legendrian_lift,
    model_lagrangian,
    tilt_map,
    zero_section,
)
from arboreal.poly import const, parse_poly, var
from arboreal.trees import SignedRootedTree, random_signed_tree


def test_zero_section_has_no_momentum():
    z = zero_section(["x1", "x2"])
    assert all(p == 0 for p in z.p_map.values())
    assert all(d == 0 for d in z.liouville_defects().values())


def test_a2_conormal_is_the_upper_ray_over_the_origin():
    t = SignedRootedTree("r", (("r", "a"),), {})
    zero, ray = build_conormal_model(t)
    assert zero.kind == "zero-section"
    assert ray.x_map == {"x_a": const(0)}
    assert ray.p_map == {"p_a": var("lam")}
    assert ray.constraints == (-var("lam"),)
    assert ray.evaluate({"lam": 3}) == {"x_a": 0, "p_a": 3}


def test_liouville_form_vanishes_on_every_conormal_piece():
    rng = random.Random(3)
    for _ in range(25):
        t = random_signed_tree(rng, 6, min_vertices=2)
        for piece in build_conormal_model(t):
            assert all(d == 0 for d in piece.liouville_defects().values())
            assert all(d == 0 for d in piece.symplectic_area_defects().values())


def test_model_lagrangians_are_conical_and_lagrangian():
    for n in range(1, 5):
        for eps in itertools.product((1, -1), repeat=n + 1):
            for i in range(n + 1):
                piece = model_lagrangian(n, i, eps)
                assert all(d == 0 for d in piece.liouville_defects().values())
                assert all(d == 0 for d in piece.symplectic_area_defects().values())


def test_legendrian_lift_satisfies_the_contact_condition():
    # dx0 + Σ p dx vanishes: ∂g/∂s − ∂g/∂s = 0
    for n in range(1, 4):
        for eps in itertools.product((1, -1), repeat=n + 1):
            for i in range(n + 1):
                lift = legendrian_lift(build_gamma_eps(n, i, eps))
                for s in lift.params:
                    total = lift.x_map["x0"].partial(s)
                    for x in lift.params:
                        total = total + lift.p_map["p" + x[1:]] * lift.x_map[x].partial(s)
                    assert total == 0


def test_tilt_with_positive_sign_is_the_plain_tilt():
    s = tilt_map(1, 2)
    assert s.forward["x0"] == parse_poly("x0 - 1/4*p1^2")
    assert s.forward["x1"] == parse_poly("x1 + 1/2*p1")
    assert tilt_map(-1, 2).forward["x0"] == parse_poly("x0 + 1/4*p1^2")


@pytest.mark.parametrize("eps0", [1, -1])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_tilt_round_trip_is_identity(eps0, n):
    s = tilt_map(eps0, n)
    assert s.round_trip() == {c: var(c) for c in s.coordinates()}


def test_tilt_of_gamma_one_in_dimension_one():
    # x0 = x1², p1 = −2x1 tilts onto x̂0 = 0
    lift = legendrian_lift(build_gamma_eps(1, 1, (1, 1)))
    images = {**lift.x_map, **lift.p_map}
    assert images["p1"] == parse_poly("-2*x1")
    out = tilt_map(1, 1).apply(images)
    assert out["x0"] == 0
    assert out["x1"] == 0


def test_tilt_rejects_bad_input():
    with pytest.raises(ValueError):
        tilt_map(0, 2)
    with pytest.raises(ValueError):
        tilt_map(1, 0)


def test_conormal_piece_direction_follows_coorientation():
    piece = FrontPiece("a", "x1", parse_poly("x2^2"), (), ("x1", "x2"))
    c = conormal_piece(piece)
    assert c.p_map["p1"] == var("lam")
    assert c.p_map["p2"] == parse_poly("-2*lam*x2")
