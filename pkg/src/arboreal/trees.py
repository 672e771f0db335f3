"""Signed rooted trees: validation, canonical codes, automorphisms, chains, pruning."""

from __future__ import annotations

import itertools
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

__all__ = [
    "TreeError",
    "SignedRootedTree",
    "LeafChain",
    "edge_key",
    "enumerate_signed_trees",
    "random_signed_tree",
    "brute_force_automorphisms",
]


class TreeError(ValueError):
    """Malformed tree input (cycle, disconnection, bad signs, unknown vertex)."""


def edge_key(a: str, b: str) -> str:
    lo, hi = sorted((a, b))
    return f"{lo}-{hi}"


def _vertex_key(v: str):
    return (0, int(v), "") if v.isdigit() else (1, 0, v)


@dataclass(frozen=True)
class LeafChain:
    leaf: str
    path: tuple[str, ...]
    padded_signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.padded_signs) != len(self.path) - 1 or self.padded_signs[-1:] != (1,):
            raise TreeError("padded sign list must have one entry per non-root vertex, ending in +1")


@dataclass(frozen=True)
class SignedRootedTree:
    """A finite tree with a root and a sign on every edge not touching the root.

    ``edges`` is stored as (parent, child) pairs in BFS order from the root; ``signs`` is keyed by
    :func:`edge_key`.  A plain rooted tree is a signed one all of whose
    non-root-adjacent edges are ignored by the caller (see ``unsigned``).
    """

    root: str
    edges: tuple[tuple[str, str], ...]
    signs: Mapping[str, int] = field(default_factory=dict)
    unsigned: bool = False

    def __post_init__(self):
        root = str(self.root)
        raw = [(str(a), str(b)) for a, b in self.edges]
        verts = {root}
        for a, b in raw:
            verts.update((a, b))
        for v in verts:
            if not v or "-" in v:
                raise TreeError(f"vertex id {v!r} must be nonempty and must not contain '-'")
        adj: dict[str, list[str]] = {v: [] for v in verts}
        seen_edges = set()
        for a, b in raw:
            if a == b:
                raise TreeError(f"self-loop at {a!r}")
            k = edge_key(a, b)
            if k in seen_edges:
                raise TreeError(f"duplicate edge {k}")
            seen_edges.add(k)
            adj[a].append(b)
            adj[b].append(a)
        parent: dict[str, str | None] = {root: None}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w == parent[v]:
                    continue
                if w in parent:
                    raise TreeError(f"cycle through edge {edge_key(v, w)}")
                parent[w] = v
                queue.append(w)
        missing = sorted(verts - set(parent), key=_vertex_key)
        if missing:
            raise TreeError(f"disconnected: vertices {missing} unreachable from root {root!r}")
        if len(raw) != len(verts) - 1:
            raise TreeError(
                f"a tree on {len(verts)} vertices needs {len(verts) - 1} edges, got {len(raw)}"
            )
        kids: dict[str, list[str]] = {v: [] for v in verts}
        for c, p in parent.items():
            if p is not None:
                kids[p].append(c)
        # breadth-first from the root, children sorted: canonical and parent-before-child
        oriented_list = []
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for c in sorted(kids[v], key=_vertex_key):
                oriented_list.append((v, c))
                queue.append(c)
        oriented = tuple(oriented_list)
        needed = {edge_key(p, c) for p, c in oriented if p != root}
        signs = {str(k): v for k, v in dict(self.signs).items()}
        if self.unsigned:
            signs = {}
        else:
            for k, s in signs.items():
                if k not in needed:
                    raise TreeError(f"sign given for {k!r}, which is not an edge away from the root")
                if s not in (1, -1):
                    raise TreeError(f"sign of {k} must be +1 or -1, got {s!r}")
            absent = sorted(needed - set(signs))
            if absent:
                raise TreeError(f"missing signs for edges {absent}")
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "edges", oriented)
        object.__setattr__(self, "signs", dict(sorted(signs.items())))
        object.__setattr__(self, "_parent", parent)
        children: dict[str, list[str]] = {v: [] for v in verts}
        for p, c in oriented:
            children[p].append(c)
        object.__setattr__(self, "_children", {v: tuple(cs) for v, cs in children.items()})

    # ---------------------------------------------------------------- basics
    def __hash__(self):
        return hash((self.root, self.edges, tuple(self.signs.items()), self.unsigned))

    def __eq__(self, other):
        if not isinstance(other, SignedRootedTree):
            return NotImplemented
        return (self.root, self.edges, self.signs, self.unsigned) == (
            other.root, other.edges, other.signs, other.unsigned)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(self._parent, key=_vertex_key))

    @property
    def non_root(self) -> tuple[str, ...]:
        return tuple(v for v in self.bfs_order() if v != self.root)

    def parent(self, v: str) -> str | None:
        self._check(v)
        return self._parent[v]

    def children(self, v: str) -> tuple[str, ...]:
        self._check(v)
        return self._children[v]

    def leaves(self) -> tuple[str, ...]:
        return tuple(v for v in self.bfs_order() if v != self.root and not self._children[v])

    def is_leaf(self, v: str) -> bool:
        self._check(v)
        return v != self.root and not self._children[v]

    def depth(self, v: str) -> int:
        return len(self.path_to(v)) - 1

    def sign(self, a: str, b: str) -> int:
        k = edge_key(a, b)
        if k not in self.signs:
            raise TreeError(f"edge {k} carries no sign")
        return self.signs[k]

    def _check(self, v: str):
        if v not in self._parent:
            raise TreeError(f"unknown vertex {v!r}")

    def bfs_order(self) -> tuple[str, ...]:
        """Breadth-first order from the root: a linear extension of the poset."""
        out = []
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            out.append(v)
            queue.extend(self._children[v])
        return tuple(out)

    def path_to(self, v: str) -> tuple[str, ...]:
        self._check(v)
        path = [v]
        while self._parent[path[-1]] is not None:
            path.append(self._parent[path[-1]])
        return tuple(reversed(path))

    def poset_leq(self, a: str, b: str) -> bool:
        """``a <= b`` iff ``a`` lies on the path from the root to ``b``."""
        self._check(a)
        return a in self.path_to(b)

    def leaf_below(self, v: str) -> str:
        """Some leaf β with ``v <= β`` (the first one in child order)."""
        self._check(v)
        while self._children[v]:
            v = self._children[v][0]
        return v

    def leaf_chain(self, leaf: str) -> LeafChain:
        if not self.is_leaf(leaf):
            raise TreeError(f"{leaf!r} is not a leaf")
        path = self.path_to(leaf)
        signs = [self.signs.get(edge_key(a, b), 1) for a, b in zip(path[1:], path[2:])]
        return LeafChain(leaf, path, tuple(signs) + (1,))

    # ---------------------------------------------------------- modifications
    def prune_leaf(self, leaf: str) -> SignedRootedTree:
        if leaf == self.root:
            raise TreeError("cannot prune the root")
        if not self.is_leaf(leaf):
            raise TreeError(f"{leaf!r} is not a leaf")
        p = self._parent[leaf]
        edges = tuple(e for e in self.edges if e != (p, leaf))
        signs = {k: s for k, s in self.signs.items() if k != edge_key(p, leaf)}
        return SignedRootedTree(self.root, edges, signs, self.unsigned)

    def attach_leaf(self, parent: str, leaf: str, sign: int | None = None) -> SignedRootedTree:
        self._check(parent)
        if leaf in self._parent:
            raise TreeError(f"vertex {leaf!r} already present")
        signs = dict(self.signs)
        if parent != self.root and not self.unsigned:
            if sign not in (1, -1):
                raise TreeError("a sign is required for an edge away from the root")
            signs[edge_key(parent, leaf)] = sign
        return SignedRootedTree(self.root, self.edges + ((parent, leaf),), signs, self.unsigned)

    def relabel(self, mapping: Mapping[str, str]) -> SignedRootedTree:
        m = lambda v: mapping.get(v, v)
        edges = tuple((m(a), m(b)) for a, b in self.edges)
        signs = {}
        for a, b in self.edges:
            k = edge_key(a, b)
            if k in self.signs:
                signs[edge_key(m(a), m(b))] = self.signs[k]
        return SignedRootedTree(m(self.root), edges, signs, self.unsigned)

    def forget_signs(self) -> SignedRootedTree:
        return SignedRootedTree(self.root, self.edges, {}, unsigned=True)

    # ---------------------------------------------------------- canonical form
    def _codes(self) -> dict[str, str]:
        codes: dict[str, str] = {}
        for v in reversed(self.bfs_order()):
            parts = []
            for c in self._children[v]:
                s = self.signs.get(edge_key(v, c), 0)
                tag = {1: "+", -1: "-", 0: ""}[s]
                parts.append(tag + codes[c])
            codes[v] = "(" + "".join(sorted(parts)) + ")"
        return codes

    def canonical_form(self) -> str:
        """AHU-style code of sorted (sign, subtree code) pairs; a complete isomorphism invariant."""
        return self._codes()[self.root]

    def automorphism_group(self) -> list[dict[str, str]]:
        """All root-, edge- and sign-preserving vertex permutations.

        Children with equal (sign, code) labels are matched in every possible
        way and the subtree automorphisms are combined, so no global
        permutation enumeration is needed.
        """
        codes = self._codes()

        def label(v, c):
            return (self.signs.get(edge_key(v, c), 0), codes[c])

        def isos(a: str, b: str) -> list[dict[str, str]]:
            # every isomorphism from the subtree at a onto the (isomorphic) subtree at b
            ka = sorted(self._children[a], key=lambda c: label(a, c))
            kb = sorted(self._children[b], key=lambda c: label(b, c))
            groups_a = itertools.groupby(ka, key=lambda c: label(a, c))
            groups_b = dict((k, list(g)) for k, g in itertools.groupby(kb, key=lambda c: label(b, c)))
            partials = [{a: b}]
            for key, ga in groups_a:
                ga = list(ga)
                gb = groups_b[key]
                options = []
                for perm in itertools.permutations(gb):
                    combos = [{}]
                    for x, y in zip(ga, perm):
                        combos = [dict(c, **m) for c in combos for m in isos(x, y)]
                    options.extend(combos)
                partials = [dict(p, **o) for p in partials for o in options]
            return partials

        autos = isos(self.root, self.root)
        return sorted(autos, key=lambda m: [m[v] for v in self.vertices])

    def automorphism_order(self) -> int:
        codes = self._codes()
        order = 1
        for v in self._parent:
            counts: dict[tuple, int] = {}
            for c in self._children[v]:
                k = (self.signs.get(edge_key(v, c), 0), codes[c])
                counts[k] = counts.get(k, 0) + 1
            for n in counts.values():
                order *= math.factorial(n)
        return order

    def automorphism_generators(self) -> list[dict[str, str]]:
        """Swaps of adjacent isomorphic sibling subtrees; they generate the group."""
        codes = self._codes()
        gens = []
        for v in self.bfs_order():
            kids = sorted(self._children[v], key=lambda c: ((self.signs.get(edge_key(v, c), 0), codes[c]), _vertex_key(c)))
            for a, b in zip(kids, kids[1:]):
                if (self.signs.get(edge_key(v, a), 0), codes[a]) != (self.signs.get(edge_key(v, b), 0), codes[b]):
                    continue
                iso = self._subtree_iso(a, b, codes)
                swap = dict(iso)
                swap.update({y: x for x, y in iso.items()})
                gens.append({u: swap.get(u, u) for u in self.vertices})
        return gens

    def _subtree_iso(self, a: str, b: str, codes) -> dict[str, str]:
        out = {a: b}
        ka = sorted(self._children[a], key=lambda c: ((self.signs.get(edge_key(a, c), 0), codes[c]), _vertex_key(c)))
        kb = sorted(self._children[b], key=lambda c: ((self.signs.get(edge_key(b, c), 0), codes[c]), _vertex_key(c)))
        for x, y in zip(ka, kb):
            out.update(self._subtree_iso(x, y, codes))
        return out

    # -------------------------------------------------------------------- io
    def to_dict(self) -> dict:
        out = {"root": self.root, "edges": [list(e) for e in self.edges]}
        if not self.unsigned:
            out["signs"] = dict(self.signs)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping, unsigned: bool = False) -> SignedRootedTree:
        if not isinstance(data, Mapping) or "root" not in data or "edges" not in data:
            raise TreeError('tree JSON needs "root" and "edges"')
        edges = data["edges"]
        if not isinstance(edges, list) or any(not isinstance(e, (list, tuple)) or len(e) != 2 for e in edges):
            raise TreeError('"edges" must be a list of vertex pairs')
        signs = data.get("signs", {}) or {}
        if not isinstance(signs, Mapping):
            raise TreeError('"signs" must be an object')
        for k, s in signs.items():
            if isinstance(s, bool) or not isinstance(s, int):
                raise TreeError(f"sign of {k} must be an integer ±1")
        return cls(str(data["root"]), tuple((str(a), str(b)) for a, b in edges), dict(signs), unsigned)

    @classmethod
    def from_json(cls, text: str, unsigned: bool = False) -> SignedRootedTree:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TreeError(f"malformed JSON: {exc}") from exc
        return cls.from_dict(data, unsigned)

    # ------------------------------------------------------------- factories
    @classmethod
    def path(cls, n: int, signs: Iterable[int] = ()) -> SignedRootedTree:
        """Linear tree r-1-2-…-n, the A_{n+1} tree; ``signs`` label edges (1,2), (2,3), …"""
        signs = list(signs)
        if len(signs) != max(n - 1, 0):
            raise TreeError(f"a path with {n} non-root vertices needs {max(n - 1, 0)} signs")
        names = ["r"] + [str(k) for k in range(1, n + 1)]
        edges = tuple(zip(names, names[1:]))
        sign_map = {edge_key(str(k), str(k + 1)): s for k, s in enumerate(signs, start=1)}
        return cls("r", edges, sign_map)


def brute_force_automorphisms(t: SignedRootedTree) -> list[dict[str, str]]:
    """Enumerate every root-fixing permutation and keep those preserving edges and signs."""
    others = [v for v in t.vertices if v != t.root]
    edge_set = {edge_key(a, b) for a, b in t.edges}
    out = []
    for perm in itertools.permutations(others):
        m = dict(zip(others, perm))
        m[t.root] = t.root
        ok = True
        for a, b in t.edges:
            k = edge_key(m[a], m[b])
            if k not in edge_set or t.signs.get(edge_key(a, b)) != t.signs.get(k):
                ok = False
                break
        if ok:
            out.append(m)
    return out


def _rooted_shapes(n: int) -> list[tuple]:
    """Unlabeled rooted trees on n vertices as nested sorted tuples."""
    if n == 1:
        return [()]
    out = set()
    for partition in _partitions(n - 1):
        choices = [_rooted_shapes(k) for k in partition]
        for combo in itertools.product(*choices):
            out.add(tuple(sorted(combo)))
    return sorted(out)


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _shape_to_tree(shape: tuple) -> tuple[str, list[tuple[str, str]]]:
    edges: list[tuple[str, str]] = []
    counter = itertools.count(1)

    def build(node, name):
        for child in node:
            cname = str(next(counter))
            edges.append((name, cname))
            build(child, cname)

    build(shape, "r")
    return "r", edges


def enumerate_signed_trees(max_vertices: int) -> Iterator[SignedRootedTree]:
    """Every unlabeled rooted tree with at most ``max_vertices`` vertices, under every sign assignment.

    Distinct sign assignments may give isomorphic signed trees; callers that
    need isomorphism classes can deduplicate by canonical form.
    """
    for n in range(1, max_vertices + 1):
        for shape in _rooted_shapes(n):
            root, edges = _shape_to_tree(shape)
            signed = [edge_key(a, b) for a, b in edges if a != root]
            for values in itertools.product((1, -1), repeat=len(signed)):
                yield SignedRootedTree(root, tuple(edges), dict(zip(signed, values)))


def random_signed_tree(rng: random.Random, max_vertices: int, min_vertices: int = 1) -> SignedRootedTree:
    n = rng.randint(min_vertices, max_vertices)
    names = [f"v{k}" for k in range(n)]
    rng.shuffle(names)
    root = names[0]
    edges, signs = [], {}
    for k in range(1, n):
        p = names[rng.randrange(k)]
        edges.append((p, names[k]))
        if p != root:
            signs[edge_key(p, names[k])] = rng.choice((1, -1))
    return SignedRootedTree(root, tuple(edges), signs)
