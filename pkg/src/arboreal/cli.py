"""Command-line entry point: ``arboreal tree|front|tangency|sign|verify``.

Exit codes are 0 for success, 1 for a failed verification and 2 for bad
usage or malformed input.
"""

from __future__ import annotations

import functools
import json
import sys
from fractions import Fraction

import click

from .fronts import Front, FrontError, build_extended_front, build_front, parse_rational
from .poly import MissingBindingError
from .trees import SignedRootedTree, TreeError

INPUT_ERRORS = (TreeError, FrontError, MissingBindingError, ValueError, IndexError, KeyError, json.JSONDecodeError)


def _guard(fn):
    """Map malformed input to exit code 2 with a one-line message."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except INPUT_ERRORS as exc:
            msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
            click.echo(f"error: {msg}", err=True)
            sys.exit(2)

    return wrapper


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _load_tree(handle) -> SignedRootedTree:
    return SignedRootedTree.from_json(handle.read())


def _load_front(tree_file, front_file, extended: bool) -> Front:
    if (tree_file is None) == (front_file is None):
        raise click.UsageError("give exactly one of --tree or --front")
    if front_file is not None:
        return Front.from_dict(json.loads(front_file.read()))
    tree = _load_tree(tree_file)
    return build_extended_front(tree) if extended else build_front(tree)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Arboreal front models: trees, fronts, tangency loci, signs and checks."""


# ------------------------------------------------------------------- tree
@main.group()
def tree():
    """Signed rooted tree operations."""


_tree_opt = click.option("--tree", "tree_file", type=click.File("r"), required=True, help="tree JSON ('-' for stdin)")


@tree.command("canon")
@_tree_opt
@_guard
def tree_canon(tree_file):
    """Print the canonical form (relabeling invariant)."""
    click.echo(_load_tree(tree_file).canonical_form())


@tree.command("aut")
@_tree_opt
@click.option("--json", "as_json", is_flag=True)
@_guard
def tree_aut(tree_file, as_json):
    """Print the automorphism group order and a generating set."""
    t = _load_tree(tree_file)
    gens = [{k: g[k] for k in sorted(g)} for g in t.automorphism_generators()]
    if as_json:
        click.echo(_dump({"order": t.automorphism_order(), "generators": gens}))
        return
    click.echo(f"order: {t.automorphism_order()}")
    for g in gens:
        moved = ", ".join(f"{a}->{b}" for a, b in g.items() if a != b)
        click.echo(f"generator: {moved}")


@tree.command("prune")
@_tree_opt
@click.option("--leaf", required=True)
@_guard
def tree_prune(tree_file, leaf):
    """Remove a leaf and print the smaller tree."""
    click.echo(_load_tree(tree_file).prune_leaf(leaf).to_json())


# ------------------------------------------------------------------ front
@main.group()
def front():
    """Front construction, sampling and membership."""


@front.command("build")
@_tree_opt
@click.option("--extended", is_flag=True, help="unsigned extended model (no quadrant restrictions)")
@_guard
def front_build(tree_file, extended):
    """Emit the front as JSON."""
    t = _load_tree(tree_file)
    f = build_extended_front(t) if extended else build_front(t)
    click.echo(f.to_json())


@front.command("sample")
@_tree_opt
@click.option("--box", default="1", show_default=True, help="half-width of the sampling box")
@click.option("--res", default=64, show_default=True, type=click.IntRange(1))
@click.option("--out", type=click.File("w"), default="-", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["obj", "points"]), default="obj", show_default=True)
@click.option("--extended", is_flag=True)
@_guard
def front_sample(tree_file, box, res, out, fmt, extended):
    """Sample every piece on a quadrant grid and write OBJ or a point cloud."""
    from .mesh import sample_mesh, write_obj, write_points

    t = _load_tree(tree_file)
    f = build_extended_front(t) if extended else build_front(t)
    box_q = parse_rational(box)
    if box_q <= 0:
        raise ValueError("--box must be positive")
    meshes = sample_mesh(f, box_q, res, allow_points=fmt == "points")
    (write_obj if fmt == "obj" else write_points)(meshes, out)


def _parse_point(text: str, ambient: tuple[str, ...]) -> dict[str, Fraction]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if parts and all("=" in p for p in parts):
        point = {}
        for p in parts:
            k, v = p.split("=", 1)
            point[k.strip()] = parse_rational(v.strip())
        return point
    if len(parts) != len(ambient):
        raise ValueError(f"point needs {len(ambient)} coordinates ({', '.join(ambient)}), got {len(parts)}")
    return {v: parse_rational(p) for v, p in zip(ambient, parts)}


@front.command("membership")
@click.option("--tree", "tree_file", type=click.File("r"))
@click.option("--front", "front_file", type=click.File("r"), help="front JSON from 'front build' ('-' for stdin)")
@click.option("--point", required=True, help="comma list in ambient order, or name=value pairs")
@click.option("--extended", is_flag=True)
@_guard
def front_membership(tree_file, front_file, point, extended):
    """Print the vertices whose pieces contain the point, one per line."""
    f = _load_front(tree_file, front_file, extended)
    hits = f.membership(_parse_point(point, f.ambient_vars))
    for v in f.tree.non_root:
        if v in hits:
            click.echo(v)


# --------------------------------------------------------------- tangency
@main.group()
def tangency():
    """Tangency loci of the model pieces."""


@tangency.command("locus")
@click.option("--n", type=click.IntRange(0), required=True)
@click.option("--i", type=click.IntRange(0), required=True)
@click.option("--j", type=click.IntRange(0), required=True)
@click.option("--primary", is_flag=True, help="primary tangency locus only")
@click.option("--json", "as_json", is_flag=True)
@_guard
def tangency_locus(n, i, j, primary, as_json):
    """Closed-form T(Γ_i, Γ_j) (or τ with --primary) in ℝ^{n+1}."""
    from .tangency import t_locus, tau_locus

    s = tau_locus(n, i, j) if primary else t_locus(n, i, j)
    click.echo(_dump(s.to_strings()) if as_json else s.format())


@tangency.command("verify")
@click.option("--n", type=click.IntRange(1, 4), default=3, show_default=True)
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=1e-9, show_default=True)
@click.option("--grid", type=click.IntRange(3), default=201, show_default=True)
@click.option("--json", "as_json", is_flag=True)
def tangency_verify(n, tol, grid, as_json):
    """Brute-force oracle against the closed forms, for all j < i ≤ m ≤ n."""
    from .tangency import oracle_agreement, tau_of_tau_check

    rows, ok = [], True
    for m in range(1, n + 1):
        for i in range(1, m + 1):
            for j in range(i):
                r = oracle_agreement(m, i, j, tol=tol, grid=grid)
                ok &= r.passed
                rows.append({
                    "check": "oracle", "n": m, "i": i, "j": j, "passed": r.passed,
                    "survivors": r.survivors, "max_survivor_residual": r.max_survivor_residual,
                    "cell_samples": r.cell_samples, "max_sample_defect": r.max_sample_defect,
                })
        for j in range(1, m):
            for k in range(j):
                r = tau_of_tau_check(m, j, k)
                ok &= r.passed
                rows.append({"check": "tau-of-tau", "n": m, "j": j, "k": k, "passed": r.passed, "samples": r.samples})
    if as_json:
        click.echo(_dump(rows))
    else:
        for r in rows:
            status = "pass" if r["passed"] else "FAIL"
            if r["check"] == "oracle":
                click.echo(
                    f"{status}  oracle n={r['n']} i={r['i']} j={r['j']}  survivors={r['survivors']}"
                    f"  residual={r['max_survivor_residual']:.2e}  samples={r['cell_samples']}"
                    f"  defect={r['max_sample_defect']:.2e}"
                )
            else:
                click.echo(f"{status}  tau-of-tau n={r['n']} j={r['j']} k={r['k']}  samples={r['samples']}")
    sys.exit(0 if ok else 1)


# ------------------------------------------------------------------- sign
@main.command("sign")
@_tree_opt
@click.option("--edge", required=True, help="edge a-b between two non-root vertices")
@click.option("--eta", type=click.Choice(["vertical"]), default="vertical", show_default=True)
@_guard
def sign_cmd(tree_file, edge, eta):
    """Print ε for an edge from the model's tangent data."""
    from .verify import edge_sign

    s = edge_sign(_load_tree(tree_file), edge, eta)
    click.echo(f"{s:+d}")


# ----------------------------------------------------------------- verify
@main.group()
def verify():
    """Exact verification suite and the flow demonstrator."""


@verify.command("all")
@click.option("--max-n", type=click.IntRange(0), default=6, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.option("--jobs", type=click.IntRange(1), default=1, show_default=True)
def verify_all(max_n, as_json, jobs):
    """Run every exact check up to dimension --max-n."""
    from .verify import reports_json, run_all

    reports = run_all(max_n, jobs)
    if as_json:
        click.echo(reports_json(reports))
    else:
        width = max((len(r.lemma) for r in reports), default=10)
        for r in reports:
            line = f"{r.status:4}  {r.lemma:<{width}}  n={r.dims:<10} {r.wall_time:8.3f}s"
            if r.counterexample:
                line += f"  {r.counterexample}"
            click.echo(line)
    sys.exit(0 if all(r.passed for r in reports) else 1)


@verify.command("flow")
@click.option("--beta", default="1/10", show_default=True)
@click.option("--steps", type=int, default=1000, show_default=True)
@click.option("--box", default="1/5", show_default=True)
@click.option("--json", "as_json", is_flag=True)
@_guard
def verify_flow(beta, steps, box, as_json):
    """Integrate the n = 2 normalization flow and report its accuracy."""
    from .flow import FlowError, run_normalization_flow

    try:
        rep = run_normalization_flow(parse_rational(beta), steps, parse_rational(box))
    except FlowError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if as_json:
        click.echo(_dump(rep.to_dict()))
    else:
        click.echo(f"field H = ({rep.field_numerator}) / ({rep.field_denominator})")
        click.echo(f"denominator lower bound on box x [0,1]: {rep.denominator_lower_bound}")
        click.echo(f"graph deviation at t=1:        {rep.graph_deviation:.3e}")
        click.echo(f"x0 = 0 deviation:              {rep.zero_section_deviation:.3e}")
        click.echo(f"Gamma_1 deviation:             {rep.gamma1_deviation:.3e}")
        e1, e2 = rep.order_errors
        click.echo(f"order study  N={steps}: {e1:.3e}  2N: {e2:.3e}  ratio {rep.order_ratio:.2f}")
        click.echo(f"H divisible by h_(2,0): {rep.divisible_by_h20}; by h_(2,1) = x2: {rep.divisible_by_h21}")
    sys.exit(0 if rep.passed() else 1)


if __name__ == "__main__":
    main()
