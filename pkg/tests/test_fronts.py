from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from arboreal.fronts import (
    Front,
    FrontError,
    build_extended_front,
    build_front,
    build_gamma,
    build_gamma_delta,
    build_gamma_eps,
    build_h_family,
    build_piece,
    h_poly,
    sigma_bindings,
    xname,
)
from arboreal.poly import MissingBindingError, parse_poly, var
from arboreal.tangency import sigma_hat
from arboreal.trees import SignedRootedTree, random_signed_tree


def a3(sign: int) -> SignedRootedTree:
    return SignedRootedTree("r", (("r", "a"), ("a", "b")), {"a-b": sign})


# ------------------------------------------------------------- h family
def test_h_family_examples():
    fam = build_h_family(3)
    assert fam.h(1) == parse_poly("x1")
    assert fam.h(2) == parse_poly("x1 - x2^2")
    assert fam.h(3) == parse_poly("x1 - (x2 - x3^2)^2")
    assert fam.check() == []


def test_h_family_supports():
    fam = build_h_family(5)
    for (i, j), p in fam.generators.items():
        assert set(p.variables) <= {xname(k) for k in range(j + 1, i + 1)}
        assert p.depends_on(xname(j + 1))


def test_h_ij_is_a_shifted_h():
    for i in range(1, 6):
        for j in range(i):
            shift = {xname(k): xname(k + j) for k in range(1, i - j + 1)}
            assert h_poly(i, j) == h_poly(i - j).rename(shift)


# ----------------------------------------------------------- model pieces
def test_gamma_examples():
    assert build_gamma(1, 0).graph_eq == 0
    assert build_gamma(2, 1).graph_eq == parse_poly("x1^2")
    assert build_gamma(2, 2).graph_eq == parse_poly("(x1 - x2^2)^2")
    assert all(build_gamma(3, i).inequalities == () for i in range(4))
    with pytest.raises(IndexError):
        build_gamma(2, 3)


def test_gamma_delta_examples():
    assert build_gamma_delta(2, 0, (1, -1, 1)).inequalities == ()
    p = build_gamma_delta(2, 2, (1, 1, 1))
    assert p.graph_eq == h_poly(2) ** 2
    assert p.inequalities == (parse_poly("x1 - x2^2"), parse_poly("x2"))
    q = build_gamma_delta(2, 2, (-1, 1, 1))
    assert q.graph_eq == -(h_poly(2) ** 2)
    assert q.inequalities == p.inequalities


def test_gamma_eps_examples():
    pos = build_gamma_eps(1, 1, (1, 1))
    assert pos.graph_eq == parse_poly("x1^2") and pos.inequalities == (parse_poly("x1"),)
    neg = build_gamma_eps(1, 1, (-1, 1))
    assert neg.graph_eq == parse_poly("-x1^2") and neg.inequalities == (parse_poly("-x1"),)


def test_eps_piece_ignores_later_signs():
    for n in range(1, 5):
        for eps in itertools.product((1, -1), repeat=n + 1):
            for i in range(n):
                flipped = eps[:i] + tuple(-e for e in eps[i:])
                assert build_gamma_eps(n, i, flipped).data_key() == build_gamma_eps(n, i, eps).data_key()


def test_witnesses_are_strictly_inside():
    for n in range(1, 5):
        for eps in itertools.product((1, -1), repeat=n + 1):
            for i in range(n + 1):
                piece = build_gamma_eps(n, i, eps)
                w = piece.witness_point
                assert piece.contains(w)
                assert all(q.evaluate(w) < 0 for q in piece.inequalities)


def test_product_and_slice_identities():
    for n in range(1, 6):
        for i in range(n + 1):
            assert build_gamma(n, i).graph_eq == build_gamma(i, i).graph_eq
            if i:
                lower = build_gamma(n - 1, i - 1).graph_eq.rename({xname(k): xname(k + 1) for k in range(n)})
                # on x0 = 0 the equation h_i^2 = 0 becomes x1 = h_{i,1}^2
                assert var("x1") - lower == h_poly(i)


def test_sigma_hat_containment():
    for n in range(1, 5):
        for eps in itertools.product((1, -1), repeat=n + 1):
            sh = sigma_hat(eps, n)
            for i in range(n + 1):
                piece = build_gamma_eps(n, i, eps)
                image = piece.defining_polynomial.substitute(sh).scale(eps[0])
                assert image == build_gamma(n, i).defining_polynomial
                sig = sigma_bindings(eps, n)
                for j, q in enumerate(piece.inequalities):
                    assert q.substitute(sig).scale(eps[j] * eps[j + 1]) == h_poly(i, j)


def test_last_sign_reflection():
    for n in range(1, 5):
        for delta in itertools.product((1, -1), repeat=n + 1):
            refl = {xname(n): -var(xname(n))}
            other = delta[:n] + (-delta[n],)
            a, b = build_gamma_delta(n, n, delta), build_gamma_delta(n, n, other)
            assert a.graph_eq.substitute(refl) == b.graph_eq
            assert tuple(q.substitute(refl) for q in a.inequalities) == b.inequalities


# --------------------------------------------------------------- assembly
def test_bare_star_front():
    t = SignedRootedTree("r", (("r", "a"), ("r", "b")), {})
    f = build_front(t)
    assert f.ambient_vars == ("x_a", "x_b")
    assert f.pieces["a"].graph_coord == "x_a" and f.pieces["a"].graph_eq == 0
    assert f.pieces["b"].graph_coord == "x_b" and f.pieces["b"].graph_eq == 0


@pytest.mark.parametrize("s", [1, -1])
def test_a3_front(s):
    f = build_front(a3(s))
    a, b = f.pieces["a"], f.pieces["b"]
    assert (a.graph_coord, a.graph_eq, a.inequalities) == ("x_a", 0, ())
    assert b.graph_coord == "x_a"
    assert b.graph_eq == (var("x_b") ** 2).scale(s)
    assert b.inequalities == (var("x_b").scale(s),)


def test_extended_a3_front():
    f = build_extended_front(a3(1))
    assert f.pieces["b"].graph_eq == parse_poly("x_b^2")
    assert f.pieces["b"].inequalities == ()
    single = build_extended_front(SignedRootedTree("r", (("r", "a"),), {}))
    assert list(single.pieces) == ["a"] and single.pieces["a"].graph_eq == 0


def test_membership_examples():
    f = build_front(a3(1))
    assert f.membership({"x_a": 0, "x_b": 0}) == {"a", "b"}
    assert f.membership({"x_a": 1, "x_b": -1}) == {"b"}
    assert f.membership({"x_a": 1, "x_b": 1}) == set()
    with pytest.raises(MissingBindingError):
        f.membership({"x_a": 0})


def test_origin_lies_on_every_piece():
    rng = random.Random(5)
    for _ in range(30):
        t = random_signed_tree(rng, 7, min_vertices=2)
        f = build_front(t)
        assert f.membership({v: 0 for v in f.ambient_vars}) == set(t.non_root)


def test_support_and_leaf_chain_independence():
    rng = random.Random(9)
    for _ in range(40):
        t = random_signed_tree(rng, 7, min_vertices=2)
        f = build_front(t)
        assert f.support_violations() == []
        for alpha in t.non_root:
            keys = {build_piece(t, alpha, leaf).data_key() for leaf in t.leaves() if t.poset_leq(alpha, leaf)}
            assert len(keys) == 1


def test_signed_pieces_sit_inside_extended_pieces_after_sigma_hat():
    rng = random.Random(13)
    for _ in range(30):
        t = random_signed_tree(rng, 6, min_vertices=2)
        signed, ext = build_front(t), build_extended_front(t)
        for alpha in t.non_root:
            chain = t.leaf_chain(t.leaf_below(alpha))
            path = chain.path
            eps = chain.padded_signs
            k = len(path) - 1
            sh = sigma_hat(eps, k - 1)
            names = {xname(m): f"x_{path[m + 1]}" for m in range(k)}
            binding = {names[v]: p.rename(names) for v, p in sh.items()}
            piece, target = signed.pieces[alpha], ext.pieces[alpha]
            pulled = piece.defining_polynomial.substitute(binding).scale(eps[0])
            assert pulled == target.defining_polynomial


def test_pruning_matches_front_assembly():
    rng = random.Random(21)
    for _ in range(20):
        t = random_signed_tree(rng, 6, min_vertices=2)
        leaf = rng.choice(t.leaves())
        small = build_front(t.prune_leaf(leaf))
        big = build_front(t)
        assert set(small.pieces) == set(big.pieces) - {leaf}
        for alpha, piece in small.pieces.items():
            assert f"x_{leaf}" not in big.pieces[alpha].graph_eq.variables
            assert piece.data_key() == big.pieces[alpha].data_key()
        assert small.ambient_vars == tuple(v for v in big.ambient_vars if v != f"x_{leaf}")


def test_front_json_round_trip():
    t = SignedRootedTree("r", (("r", "a"), ("a", "b"), ("a", "c")), {"a-b": 1, "a-c": -1})
    f = build_front(t)
    back = Front.from_dict(__import__("json").loads(f.to_json()))
    assert back.to_json() == f.to_json()
    assert {v: p.data_key() for v, p in back.pieces.items()} == {v: p.data_key() for v, p in f.pieces.items()}


def test_piece_rejects_bad_witness():
    from arboreal.fronts import FrontPiece

    with pytest.raises(FrontError):
        FrontPiece("b", "x0", parse_poly("x1^2"), (parse_poly("x1"),), ("x0", "x1"), {"x0": 1, "x1": 1})
    with pytest.raises(FrontError):
        FrontPiece("b", "x0", parse_poly("x0 + x1"), (), ("x0", "x1"))


def test_side_of_corollary_near_the_attaching_face():
    from arboreal.fronts import solve_quadrant

    for n in range(1, 4):
        for eps in itertools.product((1, -1), repeat=n + 1):
            for i in range(n):
                upper = build_gamma_eps(n, i + 1, eps)
                diff = upper.graph_eq - build_gamma_eps(n, i, eps).graph_eq
                vals = {v: Fraction(1, 3) for v in upper.parameters}
                vals.update({f"u{j}": Fraction(j + 1) for j in range(i)})
                vals[f"u{i}"] = Fraction(1, 1000)
                val = diff.evaluate(solve_quadrant(upper, vals))
                assert (val > 0) == (eps[i] > 0) and val != 0
