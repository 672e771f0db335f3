"""Model fronts: the h-family, graph pieces over quadrants, and tree assembly.

Model coordinates are ``x0, x1, …, xn`` with ``x0`` the graph coordinate.
Tree fronts live in ``R^{n(T)}`` with coordinates ``x_<vertex>``; along a
leaf chain ρ = α0 < α1 < … < αk the model variable ``x_t`` becomes
``x_{α_{t+1}}``, so the graph coordinate of every piece is ``x_{α1}``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .poly import MissingBindingError, Polynomial, const, parse_poly, to_rational, var
from .trees import SignedRootedTree, TreeError

__all__ = [
    "FrontError",
    "HFamily",
    "FrontPiece",
    "Front",
    "xname",
    "h_poly",
    "build_h_family",
    "sigma_bindings",
    "build_gamma",
    "build_gamma_delta",
    "build_gamma_eps",
    "build_piece",
    "build_front",
    "build_extended_front",
    "check_signs",
    "rational_str",
    "parse_rational",
    "solve_quadrant",
]


class FrontError(ValueError):
    pass


def xname(k: int) -> str:
    return f"x{k}"


def vertex_coord(v: str) -> str:
    if not re.fullmatch(r"[A-Za-z0-9_]+", v):
        raise FrontError(f"vertex id {v!r} must be alphanumeric to name a coordinate")
    return f"x_{v}"


def rational_str(q) -> str:
    q = Fraction(to_rational(q))
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, str):
        return Fraction(text.strip())
    return Fraction(to_rational(text))


# ----------------------------------------------------------------- h family
@lru_cache(maxsize=None)
def h_poly(i: int, j: int = 0) -> Polynomial:
    """``h_{i,j}`` in the variables ``x_{j+1} … x_i``; ``h_{i,i} = 0``."""
    if not 0 <= j <= i:
        raise IndexError(f"h_{{{i},{j}}} needs 0 <= j <= i")
    if j == i:
        return const(0)
    return var(xname(j + 1)) - h_poly(i, j + 1) ** 2


def h_top(i: int) -> Polynomial:
    """``h_i`` through the top-level recursion ``h_i = x1 − h_{i−1}(x2,…,x_i)²``."""
    if i == 0:
        return const(0)
    shifted = h_top(i - 1).rename({xname(k): xname(k + 1) for k in range(1, i)})
    return var("x1") - shifted**2


@dataclass(frozen=True)
class HFamily:
    n: int
    generators: Mapping[tuple[int, int], Polynomial]

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        if i == j:
            return const(0)
        return self.generators[(i, j)]

    def h(self, i: int) -> Polynomial:
        return const(0) if i == 0 else self.generators[(i, 0)]

    def check(self) -> list[str]:
        """Recompute both recursions term by term; return a list of mismatches."""
        bad = []
        for (i, j), p in self.generators.items():
            if j == i - 1 and p != var(xname(i)):
                bad.append(f"h_{{{i},{j}}} != x{i}")
            if j < i - 1 and p != var(xname(j + 1)) - self[(i, j + 1)] ** 2:
                bad.append(f"h_{{{i},{j}}} recursion")
            allowed = {xname(k) for k in range(j + 1, i + 1)}
            if not set(p.variables) <= allowed:
                bad.append(f"h_{{{i},{j}}} support")
        for i in range(1, self.n + 1):
            if self.h(i) != h_top(i):
                bad.append(f"h_{i} top-level recursion")
        return bad


def build_h_family(n: int) -> HFamily:
    if n < 0:
        raise ValueError("n must be non-negative")
    gens = {(i, j): h_poly(i, j) for i in range(1, n + 1) for j in range(i)}
    return HFamily(n, gens)


def check_signs(signs: Sequence[int], needed: int, what: str = "sign vector") -> tuple[int, ...]:
    signs = tuple(int(s) for s in signs)
    if any(s not in (1, -1) for s in signs):
        raise FrontError(f"{what} entries must be ±1")
    if len(signs) < needed:
        raise FrontError(f"{what} needs at least {needed} entries, got {len(signs)}")
    return signs


def sigma_bindings(eps: Sequence[int], n: int) -> dict[str, Polynomial]:
    """σ_ε: x_k ↦ ε_k x_k for 1 ≤ k ≤ n (entries beyond ``len(eps)`` act as +1)."""
    return {xname(k): var(xname(k)).scale(eps[k]) for k in range(1, n + 1) if k < len(eps) and eps[k] == -1}


# --------------------------------------------------------------- pieces
def _freeze_point(point: Mapping[str, object]) -> tuple[tuple[str, Fraction], ...]:
    return tuple(sorted((k, Fraction(to_rational(v))) for k, v in point.items()))


@dataclass(frozen=True)
class FrontPiece:
    """A graph ``{graph_coord = graph_eq}`` over the region ``{q <= 0 for q in inequalities}``.

    ``coorientation`` is +1: the positive side is increasing ``graph_coord``.
    ``witness`` is a rational point of the piece with every inequality strict.
    """

    label: object
    graph_coord: str
    graph_eq: Polynomial
    inequalities: tuple[Polynomial, ...]
    ambient_vars: tuple[str, ...]
    witness: tuple[tuple[str, Fraction], ...] = ()
    coorientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        object.__setattr__(self, "ambient_vars", tuple(self.ambient_vars))
        if isinstance(self.witness, Mapping):
            object.__setattr__(self, "witness", _freeze_point(self.witness))
        if self.coorientation != 1:
            raise FrontError("only graphical (+1) coorientations occur in the models")
        if self.graph_coord not in self.ambient_vars:
            raise FrontError(f"graph coordinate {self.graph_coord} not among ambient coordinates")
        ambient = set(self.ambient_vars)
        for q in (self.graph_eq, *self.inequalities):
            if self.graph_coord in q.variables:
                raise FrontError(f"{q} depends on the graph coordinate {self.graph_coord}")
            extra = set(q.variables) - ambient
            if extra:
                raise FrontError(f"{q} uses coordinates {sorted(extra)} outside the ambient space")
        if self.witness:
            w = self.witness_point
            if set(w) != ambient:
                raise FrontError("witness must bind exactly the ambient coordinates")
            if w[self.graph_coord] != self.graph_eq.evaluate(w):
                raise FrontError("witness is not on the graph")
            if any(q.evaluate(w) >= 0 for q in self.inequalities):
                raise FrontError("witness does not lie in the open quadrant")

    @property
    def witness_point(self) -> dict[str, Fraction]:
        return dict(self.witness)

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(v for v in self.ambient_vars if v != self.graph_coord)

    @property
    def defining_polynomial(self) -> Polynomial:
        """``graph_coord − graph_eq``; its differential is the positive conormal direction."""
        return var(self.graph_coord) - self.graph_eq

    def contains(self, point: Mapping[str, object]) -> bool:
        for v in self.ambient_vars:
            if v not in point:
                raise MissingBindingError(v)
        if to_rational(point[self.graph_coord]) != self.graph_eq.evaluate(point):
            return False
        return all(q.evaluate(point) <= 0 for q in self.inequalities)

    def rename(self, mapping: Mapping[str, str], ambient: Sequence[str] | None = None,
               label: object = None, fill: Mapping[str, object] | None = None) -> FrontPiece:
        ambient = tuple(ambient) if ambient is not None else tuple(mapping.get(v, v) for v in self.ambient_vars)
        w = {mapping.get(k, k): val for k, val in self.witness}
        for v in ambient:
            w.setdefault(v, Fraction((fill or {}).get(v, 0)))
        w = {k: val for k, val in w.items() if k in ambient}
        return FrontPiece(
            self.label if label is None else label,
            mapping.get(self.graph_coord, self.graph_coord),
            self.graph_eq.rename(mapping),
            tuple(q.rename(mapping) for q in self.inequalities),
            ambient,
            w if self.witness else (),
        )

    def data_key(self) -> tuple:
        """Piece data for exact comparison (witness excluded)."""
        return (self.graph_coord, self.graph_eq, self.inequalities)

    def to_dict(self) -> dict:
        return {
            "vertex": str(self.label),
            "graph_coord": self.graph_coord,
            "graph_eq": str(self.graph_eq),
            "inequalities": [str(q) for q in self.inequalities],
            "witness": {k: rational_str(v) for k, v in self.witness},
        }

    @classmethod
    def from_dict(cls, data: Mapping, ambient: Sequence[str]) -> FrontPiece:
        try:
            return cls(
                str(data["vertex"]),
                str(data["graph_coord"]),
                parse_poly(data["graph_eq"]),
                tuple(parse_poly(q) for q in data.get("inequalities", [])),
                tuple(ambient),
                {k: parse_rational(v) for k, v in (data.get("witness") or {}).items()},
            )
        except (KeyError, TypeError) as exc:
            raise FrontError(f"malformed piece: {exc}") from exc


def _quadrant_witness(n: int, i: int, coeffs: Sequence[int], scales: Sequence[int]) -> dict[str, Fraction]:
    """Back-substitute so the j-th inequality ``coeffs[j]·h_{i,j}∘σ`` equals −1.

    ``scales[k]`` is the factor σ applies to ``x_k``.  Coordinates beyond ``i``
    stay 0, as does ``x0`` until the caller fills in the graph value.
    """
    point = {xname(k): Fraction(0) for k in range(1, n + 1)}
    sig = {xname(k): var(xname(k)).scale(scales[k]) for k in range(1, i + 1)}
    for j in range(i - 1, -1, -1):
        inner = h_poly(i, j + 1).substitute(sig).evaluate(point) if j + 1 < i else 0
        target = -coeffs[j]  # h_{i,j}∘σ = −c_j makes c_j·h_{i,j}∘σ = −1
        point[xname(j + 1)] = Fraction(scales[j + 1]) * (target + Fraction(inner) ** 2)
    return point


def _model_ambient(n: int) -> tuple[str, ...]:
    return tuple(xname(k) for k in range(n + 1))


def _finish(label, graph, ineqs, n, point) -> FrontPiece:
    point = dict(point)
    point["x0"] = Fraction(graph.evaluate(point)) if graph.variables else Fraction(graph.constant_value())
    return FrontPiece(label, "x0", graph, tuple(ineqs), _model_ambient(n), point)


def _check_index(n: int, i: int):
    if not (isinstance(n, int) and isinstance(i, int)) or not 0 <= i <= n:
        raise IndexError(f"piece index must satisfy 0 <= i <= n, got i={i}, n={n}")


def build_gamma(n: int, i: int) -> FrontPiece:
    """Unrestricted ⁿΓ_i = {x0 = h_i²}."""
    _check_index(n, i)
    point = {xname(k): Fraction(0) for k in range(1, n + 1)}
    return _finish(i, h_poly(i) ** 2, (), n, point)


def build_gamma_delta(n: int, i: int, delta: Sequence[int]) -> FrontPiece:
    """ⁿΓ_i|_δ: x0 = δ0·h_i² over δ_{j+1}·h_{i,j} ≤ 0 for 0 ≤ j < i."""
    _check_index(n, i)
    delta = check_signs(delta, i + 1, "δ")
    ineqs = [h_poly(i, j).scale(delta[j + 1]) for j in range(i)]
    point = _quadrant_witness(n, i, [delta[j + 1] for j in range(i)], [1] * (n + 1))
    return _finish(i, (h_poly(i) ** 2).scale(delta[0]), ineqs, n, point)


@lru_cache(maxsize=None)
def _gamma_eps(n: int, i: int, eps: tuple[int, ...]) -> FrontPiece:
    sig = sigma_bindings(eps, i)
    ineqs = [h_poly(i, j).substitute(sig).scale(eps[j] * eps[j + 1]) for j in range(i)]
    graph = (h_poly(i) ** 2).substitute(sig).scale(eps[0])
    scales = list(eps[: i + 1]) + [1] * (n - i)
    point = _quadrant_witness(n, i, [eps[j] * eps[j + 1] for j in range(i)], scales)
    return _finish(i, graph, ineqs, n, point)


def build_gamma_eps(n: int, i: int, eps: Sequence[int]) -> FrontPiece:
    """ⁿΓ^ε_i: x0 = ε0·h_i²∘σ_ε over ε_jε_{j+1}·h_{i,j}∘σ_ε ≤ 0 for 0 ≤ j < i."""
    _check_index(n, i)
    eps = check_signs(eps, i + 1, "ε")
    return _gamma_eps(n, i, eps[: i + 1])


# -------------------------------------------------------------- quadrants
def solve_quadrant(piece: FrontPiece, values: Mapping[str, object],
                   order: list[tuple[int, str]] | None = None) -> dict[str, Fraction] | None:
    """Point of ``piece`` with prescribed slack ``u_j = −inequality_j ≥ 0``.

    ``values`` maps every free parameter to a rational and ``"u<j>"`` to the
    slack of inequality ``j``.  Each inequality is linear, with a constant
    coefficient, in a pivot coordinate that no later inequality involves, so
    the system is solved by back substitution.  Returns ``None`` when the
    piece is not of that triangular shape.
    """
    if order is None:
        order = pivot_order(piece.inequalities, piece.parameters)
    if order is None:
        return None
    pivots = {p for _, p in order}
    point = {}
    for v in piece.parameters:
        if v not in pivots:
            point[v] = Fraction(to_rational(values[v]))
    for j, p in reversed(order):
        q = piece.inequalities[j]
        coeff = q.partial(p).constant_value()
        rest = (q - var(p).scale(coeff)).evaluate(point) if len(q) else 0
        slack = Fraction(to_rational(values.get(f"u{j}", 0)))
        point[p] = (-slack - Fraction(rest)) / coeff
    point[piece.graph_coord] = Fraction(piece.graph_eq.evaluate(point))
    return point


def pivot_order(polys: Sequence[Polynomial], allowed: Iterable[str]) -> list[tuple[int, str]] | None:
    """Elimination order ``[(index, pivot var)]`` for a triangular system.

    A pivot is a variable of degree 1 with constant nonzero coefficient that
    occurs in no other remaining polynomial.  Solving in reverse order
    expresses every pivot through the free variables.
    """
    allowed = list(allowed)
    remaining = list(range(len(polys)))
    order = []
    while remaining:
        found = None
        for idx in remaining:
            q = polys[idx]
            for v in allowed:
                if v not in q.variables or q.degree(v) != 1:
                    continue
                d = q.partial(v)
                if not d.is_constant() or d.is_zero():
                    continue
                if any(v in polys[o].variables for o in remaining if o != idx):
                    continue
                found = (idx, v)
                break
            if found:
                break
        if not found:
            return None
        order.append(found)
        remaining.remove(found[0])
    return order


# ------------------------------------------------------------------ fronts
@dataclass(frozen=True)
class Front:
    tree: SignedRootedTree
    pieces: Mapping[str, FrontPiece]
    ambient_vars: tuple[str, ...]
    extended: bool = False

    def membership(self, point: Mapping[str, object]) -> set[str]:
        missing = [v for v in self.ambient_vars if v not in point]
        if missing:
            raise MissingBindingError(missing[0])
        return {v for v, piece in self.pieces.items() if piece.contains(point)}

    def support_violations(self) -> list[str]:
        """Pieces using a coordinate x_γ with γ not below their vertex."""
        out = []
        coord_vertex = {vertex_coord(v): v for v in self.tree.non_root}
        for a, piece in self.pieces.items():
            for q in (piece.graph_eq, *piece.inequalities):
                for x in q.variables:
                    if not self.tree.poset_leq(coord_vertex[x], a):
                        out.append(f"piece {a} uses {x}")
        return out

    def to_dict(self) -> dict:
        return {
            "tree": self.tree.to_dict(),
            "extended": self.extended,
            "ambient_vars": list(self.ambient_vars),
            "pieces": [self.pieces[v].to_dict() for v in self.tree.non_root],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: Mapping) -> Front:
        if not isinstance(data, Mapping) or "pieces" not in data or "tree" not in data:
            raise FrontError('front JSON needs "tree" and "pieces"')
        extended = bool(data.get("extended", False))
        tree = SignedRootedTree.from_dict(data["tree"], unsigned=extended)
        ambient = tuple(data.get("ambient_vars") or (vertex_coord(v) for v in tree.non_root))
        pieces = {}
        for item in data["pieces"]:
            p = FrontPiece.from_dict(item, ambient)
            pieces[p.label] = p
        return cls(tree, pieces, ambient, extended)


def _chain_piece(tree: SignedRootedTree, alpha: str, leaf: str, extended: bool) -> FrontPiece:
    chain = tree.leaf_chain(leaf)
    path = chain.path
    if alpha not in path[1:]:
        raise TreeError(f"{alpha!r} is not below leaf {leaf!r}")
    m = path.index(alpha)
    k = len(path) - 1
    model = build_gamma(k - 1, m - 1) if extended else build_gamma_eps(k - 1, m - 1, chain.padded_signs)
    mapping = {xname(t): vertex_coord(path[t + 1]) for t in range(k)}
    ambient = tuple(vertex_coord(v) for v in tree.non_root)
    return model.rename(mapping, ambient=ambient, label=alpha)


def build_piece(tree: SignedRootedTree, alpha: str, leaf: str | None = None, extended: bool = False) -> FrontPiece:
    """H_α pulled back from the chain of ``leaf`` (any leaf above α)."""
    if alpha == tree.root:
        raise TreeError("the root carries no front piece")
    return _chain_piece(tree, alpha, leaf or tree.leaf_below(alpha), extended)


def build_front(tree: SignedRootedTree) -> Front:
    ambient = tuple(vertex_coord(v) for v in tree.non_root)
    pieces = {a: build_piece(tree, a) for a in tree.non_root}
    return Front(tree, pieces, ambient)


def build_extended_front(tree: SignedRootedTree) -> Front:
    """Unsigned model: every chain contributes the unrestricted pieces ⁿΓ_i."""
    plain = tree if tree.unsigned else tree.forget_signs()
    ambient = tuple(vertex_coord(v) for v in plain.non_root)
    pieces = {a: build_piece(plain, a, extended=True) for a in plain.non_root}
    return Front(plain, pieces, ambient, extended=True)
