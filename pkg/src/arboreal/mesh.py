"""Sampling front pieces on quadrant grids and exporting OBJ / point clouds."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

import numpy as np

from .fronts import Front, FrontError, FrontPiece, pivot_order, solve_quadrant

__all__ = ["PieceMesh", "sample_piece", "sample_mesh", "write_obj", "write_points", "MeshDimensionError"]


class MeshDimensionError(FrontError):
    """Mesh output needs an ambient dimension of at most 3."""


@dataclass
class PieceMesh:
    label: str
    coords: tuple[str, ...]
    vertices: np.ndarray  # (V, d) float
    normals: np.ndarray   # (V, d), unit, on the positive (coorienting) side
    cells: list[tuple[int, ...]]  # triangles, segments or single points
    exact: list[dict[str, Fraction]]

    @property
    def cell_dim(self) -> int:
        return len(self.cells[0]) - 1 if self.cells else -1


def _grid(lo: Fraction, hi: Fraction, res: int) -> list[Fraction]:
    if res < 1:
        return [lo]
    return [lo + (hi - lo) * Fraction(k, res) for k in range(res + 1)]


def sample_piece(piece: FrontPiece, box: Fraction, resolution: int) -> PieceMesh:
    """Grid the piece in its quadrant coordinates and push forward.

    Free parameters range over ``[−box, box]``; each quadrant slack ``u_j``
    over ``[0, 2·box]``.  Every grid point is checked exactly against the
    piece before conversion to float; points outside the box are dropped
    together with the cells that use them.
    """
    box = Fraction(box)
    order = pivot_order(piece.inequalities, piece.parameters)
    if order is None:
        raise FrontError(f"piece {piece.label} has no triangular quadrant chart")
    pivots = {p for _, p in order}
    free = [v for v in piece.parameters if v not in pivots]
    axes = [(v, _grid(-box, box, resolution)) for v in free]
    axes += [(f"u{j}", _grid(Fraction(0), 2 * box, resolution)) for j in range(len(piece.inequalities))]
    grad = {v: piece.defining_polynomial.partial(v) for v in piece.ambient_vars}
    index: dict[tuple[int, ...], int] = {}
    verts, normals, exact = [], [], []
    shape = [len(vals) for _, vals in axes]
    for idx in itertools.product(*(range(s) for s in shape)):
        values = {name: vals[k] for (name, vals), k in zip(axes, idx)}
        point = solve_quadrant(piece, values, order)
        if not piece.contains(point):
            raise FrontError(f"grid point {point} escaped piece {piece.label}")
        if any(abs(point[v]) > box for v in piece.ambient_vars):
            continue
        n = np.array([float(grad[v].evaluate(point)) for v in piece.ambient_vars])
        index[idx] = len(verts)
        verts.append([float(point[v]) for v in piece.ambient_vars])
        normals.append(n / np.linalg.norm(n))
        exact.append(point)
    cells: list[tuple[int, ...]] = []
    dim = len(axes)
    if dim == 0:
        cells = [(0,)] if verts else []
    elif dim == 1:
        for (k,) in list(index):
            if (k + 1,) in index:
                cells.append((index[(k,)], index[(k + 1,)]))
    elif dim == 2:
        for (a, b) in list(index):
            quad = [(a, b), (a + 1, b), (a + 1, b + 1), (a, b + 1)]
            if all(q in index for q in quad):
                i0, i1, i2, i3 = (index[q] for q in quad)
                cells.append(_oriented(verts, normals, (i0, i1, i2)))
                cells.append(_oriented(verts, normals, (i0, i2, i3)))
    else:
        cells = [(k,) for k in range(len(verts))]
    return PieceMesh(
        str(piece.label),
        piece.ambient_vars,
        np.array(verts, dtype=float).reshape(-1, len(piece.ambient_vars)),
        np.array(normals, dtype=float).reshape(-1, len(piece.ambient_vars)),
        cells,
        exact,
    )


def _oriented(verts, normals, tri):
    """Order a triangle so its right-hand normal agrees with the coorientation."""
    if len(verts[0]) != 3:
        return tri
    a, b, c = (np.array(verts[k]) for k in tri)
    n = np.cross(b - a, c - a)
    ref = normals[tri[0]] + normals[tri[1]] + normals[tri[2]]
    if float(np.dot(n, ref)) < 0:
        return (tri[0], tri[2], tri[1])
    return tri


def sample_mesh(front: Front, box, resolution: int, allow_points: bool = False) -> list[PieceMesh]:
    if len(front.ambient_vars) > 3 and not allow_points:
        raise MeshDimensionError(
            f"mesh output needs ambient dimension <= 3, front has {len(front.ambient_vars)}; use point-cloud export"
        )
    return [sample_piece(front.pieces[v], Fraction(box), resolution) for v in front.tree.non_root]


def write_obj(meshes: list[PieceMesh], out: TextIO) -> None:
    """One named object per piece; vertices padded to 3D, normals = coorientation."""
    out.write("# front pieces; normals point to the positive side\n")
    offset = 1
    for m in meshes:
        out.write(f"o piece_{m.label}\n")
        pad = 3 - m.vertices.shape[1]
        for v in m.vertices:
            out.write("v " + " ".join(f"{x:.9g}" for x in list(v) + [0.0] * pad) + "\n")
        for nrm in m.normals:
            out.write("vn " + " ".join(f"{x:.9g}" for x in list(nrm) + [0.0] * pad) + "\n")
        for cell in m.cells:
            ids = [k + offset for k in cell]
            if len(cell) == 3:
                out.write("f " + " ".join(f"{k}//{k}" for k in ids) + "\n")
            elif len(cell) == 2:
                out.write("l " + " ".join(map(str, ids)) + "\n")
            else:
                out.write("p " + " ".join(map(str, ids)) + "\n")
        offset += len(m.vertices)


def write_points(meshes: list[PieceMesh], out: TextIO) -> None:
    """Whitespace-separated point cloud: piece label, coordinates, normal."""
    if meshes:
        out.write("# piece " + " ".join(meshes[0].coords) + " " + " ".join("n_" + c for c in meshes[0].coords) + "\n")
    for m in meshes:
        for v, nrm in zip(m.vertices, m.normals):
            out.write(m.label + " " + " ".join(f"{x:.9g}" for x in v) + " " + " ".join(f"{x:.9g}" for x in nrm) + "\n")
