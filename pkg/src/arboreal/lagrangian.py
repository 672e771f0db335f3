"""Conormal Lagrangians, Legendrian lifts and the tilt contactomorphism.

Cotangent coordinates pair ``x_v`` with ``p_v`` (``x3`` with ``p3``,
``x_a`` with ``p_a``).  On 1-jet space the contact form is
``dx0 + Σ p_k dx_k``, so the lift of the front ``x0 = g`` has
``p_k = −∂g/∂x_k``; with that convention the tilt map below is a
contactomorphism and its ``p1`` is the positive conormal parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .fronts import FrontPiece, build_front, build_gamma_eps, check_signs, xname
from .poly import Polynomial, const, to_rational, var
from .trees import SignedRootedTree

__all__ = [
    "dual",
    "ConormalPiece",
    "TiltMap",
    "tilt_map",
    "zero_section",
    "conormal_piece",
    "build_conormal_model",
    "model_lagrangian",
    "legendrian_lift",
    "LAMBDA",
]

LAMBDA = "lam"


def dual(x: str) -> str:
    """Momentum name paired with a position name."""
    return "p" + x[1:] if x.startswith("x") else "p_" + x


@dataclass(frozen=True)
class ConormalPiece:
    """Polynomial parametrization of a smooth Lagrangian piece.

    ``x_map`` and ``p_map`` give every position/momentum as a polynomial in
    ``params``; ``constraints`` are polynomials required ``<= 0`` on the
    parameters (the quadrant of the base piece and ``λ >= 0``).
    """

    base_piece: FrontPiece | None
    kind: str
    params: tuple[str, ...]
    x_map: Mapping[str, Polynomial]
    p_map: Mapping[str, Polynomial]
    constraints: tuple[Polynomial, ...] = ()

    @property
    def positions(self) -> tuple[str, ...]:
        return tuple(self.x_map)

    def liouville_defects(self) -> dict[str, Polynomial]:
        """Coefficients of ``Σ p_v dx_v`` pulled back; all zero on a conical Lagrangian."""
        out = {}
        for s in self.params:
            total = const(0)
            for x, xp in self.x_map.items():
                total = total + self.p_map[dual(x)] * xp.partial(s)
            out[s] = total
        return out

    def evaluate(self, values: Mapping[str, object]) -> dict[str, Fraction]:
        out = {}
        for name, poly in list(self.x_map.items()) + list(self.p_map.items()):
            out[name] = Fraction(to_rational(poly.evaluate(values)))
        return out

    def tangent_vectors(self, values: Mapping[str, object]) -> list[list[Fraction]]:
        """Columns ∂(x, p)/∂s at a parameter point, in (x…, p…) order."""
        order = list(self.x_map) + [dual(x) for x in self.x_map]
        maps = {**self.x_map, **self.p_map}
        vecs = []
        for s in self.params:
            vecs.append([Fraction(to_rational(maps[name].partial(s).evaluate(values))) for name in order])
        return vecs

    def symplectic_area_defects(self) -> dict[tuple[str, str], Polynomial]:
        """ω(∂_s, ∂_t) = Σ (∂x/∂s ∂p/∂t − ∂p/∂s ∂x/∂t); zero iff the piece is Lagrangian."""
        out = {}
        ps = list(self.params)
        for a in range(len(ps)):
            for b in range(a + 1, len(ps)):
                s, t = ps[a], ps[b]
                total = const(0)
                for x, xp in self.x_map.items():
                    pp = self.p_map[dual(x)]
                    total = total + xp.partial(s) * pp.partial(t) - pp.partial(s) * xp.partial(t)
                out[(s, t)] = total
        return out


def zero_section(positions: Sequence[str]) -> ConormalPiece:
    positions = tuple(positions)
    return ConormalPiece(
        None,
        "zero-section",
        positions,
        {x: var(x) for x in positions},
        {dual(x): const(0) for x in positions},
    )


def conormal_piece(piece: FrontPiece, lam: str = LAMBDA) -> ConormalPiece:
    """Positive conormal of ``{x_g = G}``: covectors ``λ·d(x_g − G)`` with ``λ >= 0``."""
    params = piece.parameters + (lam,)
    L = var(lam)
    x_map, p_map = {}, {}
    for x in piece.ambient_vars:
        if x == piece.graph_coord:
            x_map[x] = piece.graph_eq
            p_map[dual(x)] = L
        else:
            x_map[x] = var(x)
            p_map[dual(x)] = -(L * piece.graph_eq.partial(x))
    constraints = tuple(piece.inequalities) + (-L,)
    return ConormalPiece(piece, "positive-conormal", params, x_map, p_map, constraints)


def build_conormal_model(tree: SignedRootedTree) -> list[ConormalPiece]:
    """Zero-section followed by the positive conormal of each piece of H_T (BFS order)."""
    front = build_front(tree)
    out = [zero_section(front.ambient_vars)]
    for v in tree.non_root:
        out.append(conormal_piece(front.pieces[v]))
    return out


def model_lagrangian(n: int, i: int, eps: Sequence[int]) -> ConormalPiece:
    """ⁿL^ε_i ⊂ T*ℝⁿ: zero-section for i = 0, else T⁺ of ⁿ⁻¹Γ^ε_{i−1} with graph coordinate x1."""
    if not 0 <= i <= n:
        raise IndexError("need 0 <= i <= n")
    positions = [xname(k) for k in range(1, n + 1)]
    if i == 0:
        return zero_section(positions)
    eps = check_signs(eps, i, "ε")
    base = build_gamma_eps(n - 1, i - 1, eps)
    shifted = base.rename({xname(k): xname(k + 1) for k in range(n)}, label=i)
    return conormal_piece(shifted)


def legendrian_lift(piece: FrontPiece) -> ConormalPiece:
    """Lift of a model front ``x0 = g`` to J¹ (positions x1…xn, plus ``x0`` itself)."""
    params = piece.parameters
    x_map = {v: var(v) for v in params}
    p_map = {dual(v): -piece.graph_eq.partial(v) for v in params}
    x_map = {piece.graph_coord: piece.graph_eq, **x_map}
    p_map = {dual(piece.graph_coord): const(0), **p_map}
    return ConormalPiece(piece, "legendrian", params, x_map, p_map, tuple(piece.inequalities))


@dataclass(frozen=True)
class TiltMap:
    """S_{ε0}(x0, x, p) = (x0 − ε0 p1²/4, x1 + ε0 p1/2, x2, …, xn, p)."""

    eps0: int
    n: int

    def _bindings(self, sign: int) -> dict[str, Polynomial]:
        p1 = var("p1")
        e = self.eps0 * sign
        return {
            "x0": var("x0") - (p1**2).scale(Fraction(e, 4)),
            "x1": var("x1") + p1.scale(Fraction(e, 2)),
        }

    @property
    def forward(self) -> dict[str, Polynomial]:
        return self._bindings(1)

    @property
    def inverse(self) -> dict[str, Polynomial]:
        return self._bindings(-1)

    def coordinates(self) -> list[str]:
        return ["x0"] + [xname(k) for k in range(1, self.n + 1)] + [f"p{k}" for k in range(1, self.n + 1)]

    def apply(self, images: Mapping[str, Polynomial], inverse: bool = False) -> dict[str, Polynomial]:
        """Compose with a parametrization ``{coordinate: polynomial}`` of a subset."""
        rule = self.inverse if inverse else self.forward
        out = dict(images)
        for name, expr in rule.items():
            out[name] = expr.substitute(images)
        return out

    def round_trip(self) -> dict[str, Polynomial]:
        ident = {c: var(c) for c in self.coordinates()}
        return self.apply(self.apply(ident), inverse=True)


def tilt_map(eps0: int, n: int) -> TiltMap:
    if eps0 not in (1, -1):
        raise ValueError("eps0 must be ±1")
    if n < 1:
        raise ValueError("the tilt needs n >= 1")
    return TiltMap(eps0, n)
