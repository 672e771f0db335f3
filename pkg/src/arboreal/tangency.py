"""Tangency and primary-tangency loci of the model graphs ⁿΓ_i.

All loci are explicit coordinate varieties, so set comparisons use
triangular solved forms (each pivot variable written through the free ones)
and exact sampled containment, never an ideal-membership procedure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .fronts import FrontPiece, build_gamma, build_gamma_eps, h_poly, sigma_bindings, solve_quadrant, xname
from .poly import Polynomial, var

__all__ = [
    "Cell",
    "SemiAlgebraicSet",
    "t_locus",
    "tau_locus",
    "eps_intersection",
    "sigma_hat",
    "triangularize",
    "SolvedForm",
    "tau_of_tau_check",
    "TauOfTauReport",
    "numeric_tangency_oracle",
    "OracleReport",
    "oracle_agreement",
    "cell_branches",
    "sample_cell",
]


def _normalize(q: Polynomial) -> Polynomial:
    """Scale an equation so its leading coefficient is +1 (zero set unchanged)."""
    if q.is_zero():
        return q
    _, c = q.leading_term()
    return q / c


@dataclass(frozen=True)
class Cell:
    """``{e = 0 for e in equations} ∩ {q <= 0 for q in inequalities}``."""

    equations: tuple[Polynomial, ...]
    inequalities: tuple[Polynomial, ...] = ()

    def key(self) -> tuple:
        eqs = sorted({_normalize(e) for e in self.equations if not e.is_zero()}, key=Polynomial.sort_key)
        ineqs = sorted(set(self.inequalities), key=Polynomial.sort_key)
        return (tuple(str(e) for e in eqs), tuple(str(q) for q in ineqs))

    def variables(self) -> set[str]:
        out = set()
        for q in self.equations + self.inequalities:
            out.update(q.variables)
        return out

    def contains(self, point: Mapping[str, object]) -> bool:
        return all(e.evaluate(point) == 0 for e in self.equations) and all(
            q.evaluate(point) <= 0 for q in self.inequalities
        )

    def residual(self, point: Mapping[str, object]) -> float:
        """max |equation| at the point (float); the distance proxy for the oracle."""
        vals = [abs(float(e.evaluate(point))) for e in self.equations]
        vals += [max(0.0, float(q.evaluate(point))) for q in self.inequalities]
        return max(vals, default=0.0)

    def residual_array(self, names: Sequence[str], columns: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorized :meth:`residual` over float sample columns."""
        out = np.zeros(columns[0].shape)
        for e in self.equations:
            out = np.maximum(out, np.abs(e.lambdify(names)(*columns)))
        for q in self.inequalities:
            out = np.maximum(out, q.lambdify(names)(*columns))
        return out

    def substitute(self, bindings: Mapping[str, Polynomial]) -> Cell:
        return Cell(tuple(e.substitute(bindings) for e in self.equations),
                    tuple(q.substitute(bindings) for q in self.inequalities))

    def rename(self, mapping: Mapping[str, str]) -> Cell:
        return Cell(tuple(e.rename(mapping) for e in self.equations),
                    tuple(q.rename(mapping) for q in self.inequalities))

    def to_strings(self) -> dict:
        return {"equations": [str(e) for e in self.equations], "inequalities": [str(q) for q in self.inequalities]}


@dataclass(frozen=True)
class SemiAlgebraicSet:
    cells: tuple[Cell, ...]
    ambient_vars: tuple[str, ...]

    def __post_init__(self):
        seen, unique = set(), []
        for c in self.cells:
            k = c.key()
            if k not in seen:
                seen.add(k)
                unique.append(c)
        object.__setattr__(self, "cells", tuple(unique))
        object.__setattr__(self, "ambient_vars", tuple(self.ambient_vars))

    def contains(self, point: Mapping[str, object]) -> bool:
        return any(c.contains(point) for c in self.cells)

    def residual(self, point: Mapping[str, object]) -> float:
        return min((c.residual(point) for c in self.cells), default=float("inf"))

    def residual_array(self, names: Sequence[str], columns: Sequence[np.ndarray]) -> np.ndarray:
        out = np.full(columns[0].shape, np.inf)
        for c in self.cells:
            out = np.minimum(out, c.residual_array(names, columns))
        return out

    def canonical_key(self) -> tuple:
        return tuple(sorted(c.key() for c in self.cells))

    def to_strings(self) -> list[dict]:
        return [c.to_strings() for c in self.cells]

    def format(self) -> str:
        lines = []
        for k, c in enumerate(self.cells):
            parts = [f"{e} = 0" for e in c.equations] + [f"{q} <= 0" for q in c.inequalities]
            lines.append(f"cell {k}: " + ", ".join(parts))
        return "\n".join(lines)


def _model_vars(n: int) -> tuple[str, ...]:
    return tuple(xname(k) for k in range(n + 1))


def _check_pair(n: int, i: int, j: int):
    if not 0 <= j < i <= n:
        raise IndexError(f"need 0 <= j < i <= n, got n={n}, i={i}, j={j}")


def _graph_eq(j: int) -> Polynomial:
    return var("x0") - h_poly(j) ** 2


def t_locus(n: int, i: int, j: int, via: str = "j") -> SemiAlgebraicSet:
    """T(ⁿΓ_i, ⁿΓ_j): {x0 = h², h_{i,j} = 0} ∪ ⋃_{k<j} {x0 = h², h_{i,k} = 0, h_{j,k} = 0}.

    ``via`` selects which graph supplies ``x0 = h²`` (``"j"`` or ``"i"``);
    both describe the same set.
    """
    _check_pair(n, i, j)
    g = _graph_eq(j if via == "j" else i)
    cells = [Cell((g, h_poly(i, j)))]
    for k in range(j):
        cells.append(Cell((g, h_poly(i, k), h_poly(j, k))))
    return SemiAlgebraicSet(tuple(cells), _model_vars(n))


def tau_locus(n: int, i: int, j: int) -> SemiAlgebraicSet:
    """Primary tangency τ(ⁿΓ_i, ⁿΓ_j) = {x0 = h_j², h_{i,j} = 0}."""
    _check_pair(n, i, j)
    return SemiAlgebraicSet((Cell((_graph_eq(j), h_poly(i, j))),), _model_vars(n))


def eps_intersection(n: int, i: int, j: int, eps: Sequence[int]) -> SemiAlgebraicSet:
    """Face of ⁿΓ^ε_i cut out by h_{i,j}∘σ_ε = 0."""
    _check_pair(n, i, j)
    piece = build_gamma_eps(n, i, eps)
    sig = sigma_bindings(tuple(eps), i)
    eqs = (piece.defining_polynomial, h_poly(i, j).substitute(sig))
    return SemiAlgebraicSet((Cell(eqs, piece.inequalities),), _model_vars(n))


def sigma_hat(eps: Sequence[int], n: int) -> dict[str, Polynomial]:
    """σ̂_ε(x0, x) = (ε0 x0, σ_ε x) as substitution bindings (an involution)."""
    out = dict(sigma_bindings(tuple(eps), n))
    if eps[0] == -1:
        out["x0"] = -var("x0")
    return out


def eps_face_point(n: int, i: int, j: int, eps: Sequence[int], slacks: Mapping[int, Fraction],
                   free: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """Point of the ε-face: slack of inequality j forced to 0, the others prescribed."""
    piece = build_gamma_eps(n, i, eps)
    values = dict(free)
    for k in range(i):
        values[f"u{k}"] = Fraction(0) if k == j else Fraction(slacks.get(k, 0))
    return solve_quadrant(piece, values)


# ------------------------------------------------------------ solved forms
@dataclass(frozen=True)
class SolvedForm:
    """Pivot variables written through free variables, plus leftover equations."""

    solved: tuple[tuple[str, Polynomial], ...]
    residual: tuple[Polynomial, ...]

    @property
    def complete(self) -> bool:
        return not self.residual

    def key(self) -> tuple:
        return (tuple((v, str(p)) for v, p in self.solved), tuple(sorted(str(_normalize(r)) for r in self.residual)))

    def parametrize(self, free_values: Mapping[str, Fraction]) -> dict[str, Fraction]:
        point = dict(free_values)
        for v, p in self.solved:
            point[v] = Fraction(p.evaluate(point))
        return point

    def free_variables(self, ambient: Iterable[str]) -> list[str]:
        pivots = {v for v, _ in self.solved}
        return [v for v in ambient if v not in pivots]


def triangularize(equations: Sequence[Polynomial], ambient: Sequence[str]) -> SolvedForm:
    """Reduce an equation list by repeated isolated linear pivots.

    An equation is solved for the first variable (in ambient order) of
    degree 1 with constant coefficient; the solution is substituted into all
    other equations and earlier solutions.  Equations that reduce to 0 are
    dropped; those with no pivot are retried after later substitutions and
    finally reported as residual.
    """
    ambient = list(ambient)
    solved: dict[str, Polynomial] = {}
    pending = [e for e in equations]
    progress = True
    while pending and progress:
        progress = False
        nxt = []
        for e in pending:
            e = e.substitute(solved) if solved else e
            if e.is_zero():
                progress = True
                continue
            pivot = None
            for v in ambient:
                if v in e.variables and e.degree(v) == 1:
                    d = e.partial(v)
                    if d.is_constant():
                        pivot = (v, d.constant_value())
                        break
            if pivot is None:
                nxt.append(e)
                continue
            v, c = pivot
            expr = -(e - var(v).scale(c)) / c
            solved = {w: p.substitute({v: expr}) for w, p in solved.items()}
            solved[v] = expr
            progress = True
        pending = nxt
    pos = {v: k for k, v in enumerate(ambient)}
    items = tuple(sorted(solved.items(), key=lambda kv: pos[kv[0]]))
    return SolvedForm(items, tuple(pending))


@dataclass
class TauOfTauReport:
    n: int
    j: int
    k: int
    lhs: SemiAlgebraicSet
    rhs: SemiAlgebraicSet
    lhs_form: SolvedForm
    rhs_form: SolvedForm
    symbolic_match: bool
    samples: int
    lhs_in_rhs: bool
    rhs_in_lhs: bool
    mismatch: str | None = None

    @property
    def passed(self) -> bool:
        return self.symbolic_match and self.lhs_in_rhs and self.rhs_in_lhs


def tau_of_tau_check(n: int, j: int, k: int, samples: int = 200, seed: int = 0) -> TauOfTauReport:
    """Compare τ(τ(Γ_n, Γ_k), τ(Γ_j, Γ_k)) with τ(Γ_n, Γ_j) ∩ τ(Γ_j, Γ_k).

    The left side is computed inside Γ_k ≅ ℝⁿ: there both primary loci are
    graphs over x_{k+1}, namely the shifted models Γ'_{n−k−1} and Γ'_{j−k−1}
    in x'_m = x_{m+k+1}, so their primary tangency comes from
    :func:`tau_locus` of the shifted family.
    """
    if not 0 <= k < j <= n - 1:
        raise IndexError("need 0 <= k < j <= n-1")
    ambient = _model_vars(n)
    n2, j2 = n - k - 1, j - k - 1
    inner = tau_locus(n2, n2, j2)
    shift = {xname(m): xname(m + k + 1) for m in range(n2 + 1)}
    lhs_cells = tuple(Cell((_graph_eq(k),) + c.rename(shift).equations) for c in inner.cells)
    lhs = SemiAlgebraicSet(lhs_cells, ambient)
    a, b = tau_locus(n, n, j).cells[0], tau_locus(n, j, k).cells[0]
    rhs = SemiAlgebraicSet((Cell(a.equations + b.equations),), ambient)

    lf = triangularize(lhs.cells[0].equations, ambient)
    rf = triangularize(rhs.cells[0].equations, ambient)
    symbolic = lf.complete and rf.complete and lf.key() == rf.key()
    mismatch = None
    if not symbolic:
        mismatch = f"solved forms differ: {lf.key()} vs {rf.key()}"

    rng = random.Random(seed)
    lhs_in_rhs = rhs_in_lhs = True
    for form, src, dst, tag in ((lf, lhs, rhs, "lhs"), (rf, rhs, lhs, "rhs")):
        if not form.complete:
            if tag == "lhs":
                lhs_in_rhs = False
            else:
                rhs_in_lhs = False
            continue
        free = form.free_variables(ambient)
        for _ in range(samples):
            pt = form.parametrize({v: Fraction(rng.randint(-20, 20), rng.randint(1, 10)) for v in free})
            if not src.contains(pt):
                raise AssertionError(f"parametrization left its own {tag} set at {pt}")
            if not dst.contains(pt):
                mismatch = mismatch or f"{tag} point {pt} not in the other side"
                if tag == "lhs":
                    lhs_in_rhs = False
                else:
                    rhs_in_lhs = False
                break
    return TauOfTauReport(n, j, k, lhs, rhs, lf, rf, symbolic, samples, lhs_in_rhs, rhs_in_lhs, mismatch)


# -------------------------------------------------------- branch sampling
def cell_branches(n: int, i: int, j: int, k: int | None) -> list[tuple[Polynomial, ...]]:
    """Triangular equation systems whose union is a t_locus cell.

    ``k=None`` is the primary cell.  For the cell {h_{i,k} = h_{j,k} = 0} use
    h_{i,k} − h_{j,k} = h_{j,k+1}² − h_{i,k+1}² and split the square
    difference level by level: either h_{i,m} + h_{j,m} = 0 for some
    k < m < j, or the chain of equalities reaches h_{i,j} = 0.
    """
    g = _graph_eq(j)
    if k is None:
        return [(g, h_poly(i, j))]
    out = [(g, h_poly(j, k), h_poly(i, m) + h_poly(j, m)) for m in range(k + 1, j)]
    out.append((g, h_poly(j, k), h_poly(i, j)))
    return out


def sample_cell(n: int, i: int, j: int, k: int | None, count: int, rng: random.Random,
                box: Fraction = Fraction(1)) -> list[dict[str, Fraction]]:
    """Exact rational points of a t_locus cell (per branch), kept inside the box."""
    ambient = _model_vars(n)
    pts = []
    for eqs in cell_branches(n, i, j, k):
        form = triangularize(eqs, ambient)
        if not form.complete:
            raise AssertionError(f"branch {eqs} is not triangular")
        free = form.free_variables(ambient)
        got, tries = 0, 0
        while got < count and tries < 50 * count:
            tries += 1
            vals = {v: Fraction(rng.randint(-100, 100), 100) * box for v in free}
            pt = form.parametrize(vals)
            if all(abs(pt[v]) <= box for v in ambient[1:]):
                pts.append(pt)
                got += 1
    return pts


# ---------------------------------------------------------------- oracle
@dataclass
class OracleReport:
    n: int
    i: int
    j: int
    grid: int
    tol: float
    survivors: int
    max_survivor_residual: float
    cell_samples: int
    max_sample_defect: float
    tau_contained: bool

    @property
    def passed(self) -> bool:
        return (
            self.max_survivor_residual <= self.tol
            and self.max_sample_defect <= self.tol
            and self.tau_contained
        )


def _graph_funcs(piece: FrontPiece):
    params = list(piece.parameters)
    g = piece.graph_eq
    return params, g.lambdify(params), [g.partial(v).lambdify(params) for v in params]


def _oracle_indices(piece_a: FrontPiece, piece_b: FrontPiece, samples: int, tol: float,
                    box: float) -> tuple[list[str], np.ndarray]:
    if piece_a.graph_coord != piece_b.graph_coord or set(piece_a.parameters) != set(piece_b.parameters):
        raise ValueError("oracle needs two graphs over the same coordinates")
    params, ga, dga = _graph_funcs(piece_a)
    _, gb, dgb = _graph_funcs(piece_b)
    ineqs = [q.lambdify(params) for q in piece_a.inequalities + piece_b.inequalities]
    ticks = np.linspace(-box, box, samples)
    dim = len(params)
    if dim == 0:
        raise ValueError("nothing to sample")
    # chunk over the first axis to bound memory
    if dim == 1:
        chunks = [((), [ticks])]
    else:
        rest = np.meshgrid(*([ticks] * (dim - 1)), indexing="ij")
        chunks = [((a0,), [np.full(rest[0].shape, ticks[a0])] + list(rest)) for a0 in range(samples)]
    found = []
    for prefix, coords in chunks:
        hits = np.argwhere(np.abs(ga(*coords) - gb(*coords)) <= tol)
        if len(hits):
            # the first-order and quadrant tests only run on value survivors
            sub = [c[tuple(hits.T)] for c in coords]
            sq = np.zeros(len(hits))
            for fa, fb in zip(dga, dgb):
                sq = sq + (fa(*sub) - fb(*sub)) ** 2
            ok = np.sqrt(sq) <= tol
            for f in ineqs:
                ok &= f(*sub) <= tol
            hits = hits[ok]
        if len(hits):
            found.append(np.hstack([np.full((len(hits), len(prefix)), prefix, dtype=int), hits]))
    idx = np.vstack(found) if found else np.zeros((0, dim), dtype=int)
    return params, idx


def numeric_tangency_oracle(piece_a: FrontPiece, piece_b: FrontPiece, samples: int = 201,
                            tol: float = 1e-9, box: float = 1.0) -> list[dict[str, Fraction]]:
    """Grid points where the two graphs agree to first order within ``tol``.

    The grid has ``samples`` points per parameter axis on [−box, box]; the
    grid coordinates are exact rationals and the returned points carry
    ``x0 = g_a`` exactly.  Points must also satisfy both pieces' inequalities.
    """
    params, idx = _oracle_indices(piece_a, piece_b, samples, tol, box)
    denom = samples - 1
    box_q = Fraction(box).limit_denominator(10**6)
    out = []
    for row in sorted(map(tuple, idx.tolist())):
        pt = {v: box_q * Fraction(2 * t - denom, denom) for v, t in zip(params, row)}
        pt[piece_a.graph_coord] = Fraction(piece_a.graph_eq.evaluate(pt))
        out.append(pt)
    return out


def _tangency_defect(i: int, j: int, pt: Mapping[str, Fraction], n: int) -> float:
    """|g_i − g_j| + ‖∇g_i − ∇g_j‖ (float) at an exact point."""
    gi, gj = h_poly(i) ** 2, h_poly(j) ** 2
    d = gi - gj
    val = abs(float(d.evaluate(pt)))
    grad = np.array([float(d.partial(xname(k)).evaluate(pt)) for k in range(1, n + 1)])
    return max(val, float(np.linalg.norm(grad)), abs(float(pt["x0"] - gj.evaluate(pt))))


def oracle_agreement(n: int, i: int, j: int, tol: float = 1e-9, grid: int = 201,
                     samples_per_branch: int = 40, seed: int = 0, box: float = 1.0) -> OracleReport:
    """Brute force against the closed form, in both directions.

    Survivors of the grid search are scored by their float residual against
    the closed-form locus; exact sample points of every cell branch are
    checked for exact membership and for first-order contact.
    """
    locus = t_locus(n, i, j)
    tau = tau_locus(n, i, j)
    a, b = build_gamma(n, i), build_gamma(n, j)
    params, idx = _oracle_indices(a, b, grid, tol, box)
    ticks = np.linspace(-box, box, grid)
    cols = [ticks[idx[:, k]] for k in range(len(params))]
    worst = 0.0
    if len(idx):
        x0 = a.graph_eq.lambdify(params)(*cols)
        names = [a.graph_coord] + params
        worst = float(np.max(locus.residual_array(names, [x0] + cols)))
    rng = random.Random(seed)
    defect, count = 0.0, 0
    for k in [None] + list(range(j)):
        for pt in sample_cell(n, i, j, k, samples_per_branch, rng):
            if not locus.contains(pt):
                defect = float("inf")
            defect = max(defect, _tangency_defect(i, j, pt, n))
            count += 1
    tau_ok = tau.cells[0].key() in {c.key() for c in locus.cells}
    return OracleReport(n, i, j, grid, tol, len(idx), worst, count, defect, tau_ok)
