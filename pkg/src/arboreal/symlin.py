"""Exact symplectic linear algebra on (ℚ^{2m}, ω).

Vectors are ``(q_1, …, q_m, p_1, …, p_m)`` and
``ω((q, p), (q', p')) = q·p' − p·q'``.

Convention for the order ≺: to compare ℓ1, ℓ2, ℓ3, write every ``w ∈ ℓ3`` as
``v + Av`` with ``v ∈ ℓ1`` and ``Av ∈ ℓ2`` and take the quadratic form
``Q(v) = ω(v, Av)``.  ``Q > 0`` means ℓ1 ≺ ℓ2 ≺ ℓ3 and ``Q < 0`` means
ℓ1 ≺ ℓ3 ≺ ℓ2.  This is the orientation for which the model Lagrangians give
``ε(L1, ν0, L2) = ε0``; the calibration is tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "SymplecticError",
    "SymplecticSpace",
    "LagrangianFrame",
    "CoisotropicFrame",
    "Order",
    "omega",
    "rank",
    "nullspace",
    "span_basis",
    "intersection",
    "is_transverse",
    "definiteness_order",
    "signature",
    "reduce",
    "arboreal_sign",
    "vertical",
    "horizontal",
]

Vector = tuple[Fraction, ...]


class SymplecticError(ValueError):
    pass


def _vec(v: Iterable) -> Vector:
    return tuple(Fraction(x) for x in v)


# ---------------------------------------------------------- linear algebra
def _rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(vectors: Sequence[Sequence]) -> int:
    return len(_rref(vectors)[1]) if vectors else 0


def span_basis(vectors: Sequence[Sequence]) -> list[Vector]:
    """A basis of the span, chosen among the given vectors."""
    out: list[Vector] = []
    for v in vectors:
        if rank(out + [_vec(v)]) > len(out):
            out.append(_vec(v))
    return out


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{x : row·x = 0 for every row}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(columns: Sequence[Vector], target: Vector) -> list[Fraction] | None:
    """Coefficients ``c`` with ``Σ c_k columns[k] = target``, or None."""
    n = len(target)
    aug = [[columns[k][i] for k in range(len(columns))] + [target[i]] for i in range(n)]
    red, pivots = _rref(aug)
    if len(columns) in pivots:
        return None
    out = [Fraction(0)] * len(columns)
    for row, pc in zip(red, pivots):
        out[pc] = row[-1]
    return out


def intersection(a: Sequence[Vector], b: Sequence[Vector]) -> list[Vector]:
    """Basis of span(a) ∩ span(b)."""
    a, b = span_basis(a), span_basis(b)
    if not a or not b:
        return []
    dim = len(a[0])
    cols = a + [tuple(-x for x in v) for v in b]
    rows = [[c[i] for c in cols] for i in range(dim)]
    kernel = nullspace(rows, len(cols))
    vecs = []
    for k in kernel:
        vecs.append(tuple(sum(k[j] * a[j][i] for j in range(len(a))) for i in range(dim)))
    return span_basis(vecs)


# --------------------------------------------------------------- spaces
@dataclass(frozen=True)
class SymplecticSpace:
    dim: int

    def __post_init__(self):
        if self.dim < 0 or self.dim % 2:
            raise SymplecticError("symplectic dimension must be even and non-negative")

    @property
    def half(self) -> int:
        return self.dim // 2

    def omega(self, u: Sequence, v: Sequence) -> Fraction:
        m = self.half
        return sum((Fraction(u[i]) * v[m + i] - Fraction(u[m + i]) * v[i] for i in range(m)), Fraction(0))

    def perp(self, vectors: Sequence[Vector]) -> list[Vector]:
        """ω-orthogonal complement of the span."""
        m = self.half
        rows = [tuple(-v[m + i] for i in range(m)) + tuple(v[i] for i in range(m)) for v in vectors]
        return nullspace(rows, self.dim)


def omega(u: Sequence, v: Sequence) -> Fraction:
    return SymplecticSpace(len(u)).omega(u, v)


@dataclass(frozen=True)
class LagrangianFrame:
    space: SymplecticSpace
    basis: tuple[Vector, ...]

    def __post_init__(self):
        basis = tuple(_vec(v) for v in self.basis)
        object.__setattr__(self, "basis", basis)
        if any(len(v) != self.space.dim for v in basis):
            raise SymplecticError("basis vectors have the wrong length")
        if len(basis) != self.space.half or rank(basis) != len(basis):
            raise SymplecticError(f"a Lagrangian needs {self.space.half} independent vectors")
        for i, u in enumerate(basis):
            for v in basis[i + 1:]:
                if self.space.omega(u, v) != 0:
                    raise SymplecticError("basis is not isotropic")

    @classmethod
    def spanned_by(cls, space: SymplecticSpace, vectors: Sequence[Sequence]) -> LagrangianFrame:
        return cls(space, tuple(span_basis([_vec(v) for v in vectors])))

    def transform(self, matrix: Sequence[Sequence]) -> LagrangianFrame:
        return LagrangianFrame(self.space, tuple(_apply(matrix, v) for v in self.basis))


@dataclass(frozen=True)
class CoisotropicFrame:
    space: SymplecticSpace
    basis: tuple[Vector, ...]

    def __post_init__(self):
        basis = tuple(span_basis([_vec(v) for v in self.basis]))
        object.__setattr__(self, "basis", basis)
        if len(basis) < self.space.half:
            raise SymplecticError("a coisotropic subspace has dimension at least half")
        if rank(list(basis) + self.complement()) != len(basis):
            raise SymplecticError("subspace is not coisotropic")

    def complement(self) -> list[Vector]:
        return self.space.perp(list(self.basis))


def _apply(matrix: Sequence[Sequence], v: Vector) -> Vector:
    return tuple(sum((Fraction(matrix[i][j]) * v[j] for j in range(len(v))), Fraction(0)) for i in range(len(matrix)))


def vertical(m: int) -> LagrangianFrame:
    """Fibre of T*ℝ^m: the span of the p-directions."""
    space = SymplecticSpace(2 * m)
    return LagrangianFrame(space, tuple(tuple(Fraction(int(j == m + i)) for j in range(2 * m)) for i in range(m)))


def horizontal(m: int) -> LagrangianFrame:
    space = SymplecticSpace(2 * m)
    return LagrangianFrame(space, tuple(tuple(Fraction(int(j == i)) for j in range(2 * m)) for i in range(m)))


def _same_space(*frames):
    dims = {f.space.dim for f in frames}
    if len(dims) != 1:
        raise SymplecticError("frames live in different symplectic spaces")


def is_transverse(a: LagrangianFrame, b: LagrangianFrame) -> bool:
    _same_space(a, b)
    return rank(list(a.basis) + list(b.basis)) == a.space.dim


# ------------------------------------------------------------ ≺ order
class Order(str, Enum):
    L1_L2_L3 = "l1<l2<l3"
    L1_L3_L2 = "l1<l3<l2"
    INDEFINITE = "indefinite"


def signature(matrix: Sequence[Sequence[Fraction]]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Symmetric elimination with a 2×2 pivot trick for zero diagonals; the
    inertia is preserved (Sylvester).
    """
    a = [list(map(Fraction, r)) for r in matrix]
    n = len(a)
    pos = neg = zero = 0
    idx = list(range(n))
    while idx:
        k = next((i for i in idx if a[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and a[i][j] != 0), None)
            if pair is None:
                zero += len(idx)
                break
            i, j = pair
            # replace row/col i by i + j; the new diagonal is 2 a_ij ≠ 0
            for r in range(n):
                a[r][i] += a[r][j]
            for c in range(n):
                a[i][c] += a[j][c]
            k = i
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in idx if i != k]
        for i in rest:
            f = a[i][k] / d
            if f:
                for j in rest:
                    a[i][j] -= f * a[k][j]
        idx = rest
    return pos, neg, zero


def definiteness_order(l1: LagrangianFrame, l2: LagrangianFrame, l3: LagrangianFrame) -> Order:
    _same_space(l1, l2, l3)
    for a, b in ((l1, l2), (l1, l3), (l2, l3)):
        if not is_transverse(a, b):
            raise SymplecticError("definiteness order needs pairwise transverse Lagrangians")
    m = l1.space.half
    cols = list(l1.basis) + list(l2.basis)
    vs, avs = [], []
    for w in l3.basis:
        c = solve(cols, w)
        v = tuple(sum(c[k] * l1.basis[k][i] for k in range(m)) for i in range(2 * m))
        av = tuple(w[i] - v[i] for i in range(2 * m))
        vs.append(v)
        avs.append(av)
    q = [[l1.space.omega(vs[k], avs[l]) for l in range(m)] for k in range(m)]
    pos, neg, _ = signature(q)
    if pos == m:
        return Order.L1_L2_L3
    if neg == m:
        return Order.L1_L3_L2
    return Order.INDEFINITE


# -------------------------------------------------------------- reduction
def _symplectic_basis(space: SymplecticSpace, vectors: list[Vector]) -> tuple[list[Vector], list[Vector]]:
    """Darboux pairs (e_k, f_k), ω(e_k, f_l) = δ_kl, spanning the given nondegenerate subspace."""
    es, fs = [], []
    pool = list(vectors)
    while pool:
        e = pool.pop(0)
        j = next((k for k, w in enumerate(pool) if space.omega(e, w) != 0), None)
        if j is None:
            raise SymplecticError("subspace is degenerate")
        w = pool.pop(j)
        s = space.omega(e, w)
        f = tuple(x / s for x in w)
        es.append(e)
        fs.append(f)
        new_pool = []
        for u in pool:
            a, b = space.omega(u, f), space.omega(u, e)
            u2 = tuple(u[i] - a * e[i] + b * f[i] for i in range(space.dim))
            if any(u2):
                new_pool.append(u2)
        pool = span_basis(new_pool)
    return es, fs


@dataclass(frozen=True)
class Reduction:
    """The quotient C/C^ω with a Darboux basis; ``coords`` maps C into ℚ^{2r}."""

    space: SymplecticSpace
    quotient: SymplecticSpace
    e: tuple[Vector, ...]
    f: tuple[Vector, ...]
    kernel: tuple[Vector, ...]

    def coords(self, c: Vector) -> Vector:
        a = [self.space.omega(c, fk) for fk in self.f]
        b = [-self.space.omega(c, ek) for ek in self.e]
        return tuple(a + b)

    def image(self, vectors: Sequence[Vector]) -> list[Vector]:
        return span_basis([self.coords(v) for v in vectors])


def reduction(c: CoisotropicFrame) -> Reduction:
    space = c.space
    kernel = span_basis(c.complement())
    # complement W of C^ω inside C
    w = []
    for v in c.basis:
        if rank(kernel + w + [v]) > len(kernel) + len(w):
            w.append(v)
    es, fs = _symplectic_basis(space, w)
    return Reduction(space, SymplecticSpace(2 * len(es)), tuple(es), tuple(fs), tuple(kernel))


def reduce(l: LagrangianFrame, c: CoisotropicFrame) -> LagrangianFrame:
    """[ℓ]^C: the image of ℓ ∩ C in C/C^ω, a Lagrangian of the quotient."""
    _same_space(l, c)
    red = reduction(c)
    inside = intersection(list(l.basis), list(c.basis))
    return LagrangianFrame(red.quotient, tuple(red.image(inside)))


def arboreal_sign(l_rho: LagrangianFrame, l_alpha: LagrangianFrame, eta: LagrangianFrame) -> int:
    """+1 if [L_ρ] ≺ [L_α] ≺ [η] in C_α/C_α^ω, −1 if [L_ρ] ≺ [η] ≺ [L_α]."""
    _same_space(l_rho, l_alpha, eta)
    m = l_rho.space.half
    common = intersection(list(l_rho.basis), list(l_alpha.basis))
    if len(common) != m - 1:
        raise SymplecticError(
            f"L_rho and L_alpha must meet in codimension 1 (intersection has dimension {len(common)}, expected {m - 1})"
        )
    c = CoisotropicFrame(l_rho.space, tuple(span_basis(list(l_rho.basis) + list(l_alpha.basis))))
    r_rho, r_alpha, r_eta = reduce(l_rho, c), reduce(l_alpha, c), reduce(eta, c)
    try:
        order = definiteness_order(r_rho, r_alpha, r_eta)
    except SymplecticError as exc:
        raise SymplecticError("reduced triple is not pairwise transverse; η is not a polarization here") from exc
    if order is Order.L1_L2_L3:
        return 1
    if order is Order.L1_L3_L2:
        return -1
    raise SymplecticError("reduced lines are not in general position")
