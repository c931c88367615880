"""Stallings core graphs of finitely generated subgroups of a free group.

A graph is stored as a deterministic labelled adjacency map: ``adj[v][x]``
is the endpoint of the edge leaving ``v`` that reads letter ``x`` (signed
generator, see :mod:`words`).  Every edge appears twice, once per
direction.  Vertex 0 is the basepoint.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import RankMismatch
from .words import Word, shortlex_key


def _label_order(x: int):
    return (abs(x), -x)


class SubgroupGraph:
    """A folded core graph; build with :func:`build_graph`."""

    def __init__(self, rank_ambient: int, adj: list[dict[int, int]]):
        self.rank_ambient = rank_ambient
        self.adj = adj

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    @property
    def num_edges(self) -> int:
        return sum(1 for v in self.adj for x in v if x > 0)

    def edges(self):
        """Positive-label edges as ``(src, generator_index, dst)``, sorted."""
        return sorted(
            (v, x - 1, w) for v, out in enumerate(self.adj) for x, w in out.items() if x > 0
        )

    def canonical_form(self):
        """Relabel vertices breadth-first from the basepoint, label-ordered.

        Two graphs have the same canonical form iff they define the same
        subgroup.
        """
        order = {0: 0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for x in sorted(self.adj[v], key=_label_order):
                w = self.adj[v][x]
                if w not in order:
                    order[w] = len(order)
                    queue.append(w)
        return tuple(sorted((order[v], x, order[w]) for v, x, w in self.edges()))

    def to_text(self) -> str:
        letters = "abcdefghijklmnopqrstuvwxyz"
        lines = []
        for v, g, w in self.edges():
            label = letters[g] if self.rank_ambient <= 26 else f"x{g + 1}"
            lines.append(f"{v} --{label}--> {w}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"SubgroupGraph(V={self.num_vertices}, E={self.num_edges}, rank={subgroup_rank(self)})"


def _fold(rank: int, words: Sequence[Word], rng=None) -> list[dict[int, int]]:
    """Fold the bouquet of loops spelled by ``words``.

    With ``rng`` the edges are folded in a shuffled order; the result is
    the same graph up to vertex renaming.
    """
    parent: list[int] = [0]
    adj: list[dict[int, int]] = [{}]

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def new_vertex() -> int:
        parent.append(len(parent))
        adj.append({})
        return len(parent) - 1

    def merge(a: int, b: int) -> None:
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if len(adj[a]) < len(adj[b]):
                a, b = b, a
            parent[b] = a
            moved, adj[b] = adj[b], {}
            for x, t in moved.items():
                t = find(t)
                if x in adj[a]:
                    stack.append((adj[a][x], t))
                else:
                    adj[a][x] = t

    def add_edge(v: int, x: int, w: int) -> None:
        v, w = find(v), find(w)
        if x in adj[v]:
            merge(adj[v][x], w)
            return
        if -x in adj[w]:
            merge(adj[w][-x], v)
            v, w = find(v), find(w)
            if x in adj[v]:
                merge(adj[v][x], w)
                return
        adj[v][x] = w
        adj[w][-x] = v

    pending = []
    for word in words:
        x = word.letters
        if not x:
            continue
        v = 0
        for i, letter in enumerate(x):
            w = 0 if i == len(x) - 1 else new_vertex()
            pending.append((v, letter, w))
            v = w
    if rng is not None:
        rng.shuffle(pending)
    for v, letter, w in pending:
        add_edge(v, letter, w)

    # compact representatives, resolving stale endpoints
    reps = sorted({find(v) for v in range(len(parent))}, key=lambda v: (v != find(0), v))
    index = {r: i for i, r in enumerate(reps)}
    out: list[dict[int, int]] = [{} for _ in reps]
    for r in reps:
        for x, t in adj[r].items():
            out[index[r]][x] = index[find(t)]
    return out


def _trim(adj: list[dict[int, int]]) -> list[dict[int, int]]:
    alive = [True] * len(adj)
    stack = [v for v in range(1, len(adj)) if len(adj[v]) <= 1]
    while stack:
        v = stack.pop()
        if not alive[v] or v == 0 or len(adj[v]) > 1:
            continue
        alive[v] = False
        for x, w in list(adj[v].items()):
            del adj[w][-x]
            if w != 0 and len(adj[w]) <= 1:
                stack.append(w)
        adj[v] = {}
    index = {}
    for v in range(len(adj)):
        if alive[v]:
            index[v] = len(index)
    return [{x: index[w] for x, w in adj[v].items()} for v in range(len(adj)) if alive[v]]


def build_graph(generators: Sequence[Word], rank: int | None = None) -> SubgroupGraph:
    """Fold the bouquet of loops spelled by the generators into a core graph."""
    gens = [g for g in generators]
    if rank is None:
        rank = gens[0].rank if gens else 2
    for g in gens:
        if g.rank != rank:
            raise RankMismatch(f"generator of rank {g.rank} in a rank {rank} graph")
    adj = _trim(_fold(rank, [g for g in gens if not g.is_identity()]))
    return SubgroupGraph(rank, adj)


def subgroup_rank(g: SubgroupGraph) -> int:
    if g.num_edges == 0:
        return 0
    return g.num_edges - g.num_vertices + 1


def contains(g: SubgroupGraph, w: Word) -> bool:
    if w.rank != g.rank_ambient:
        raise RankMismatch(f"word of rank {w.rank} against a rank {g.rank_ambient} graph")
    v = 0
    for x in w.letters:
        v = g.adj[v].get(x)
        if v is None:
            return False
    return v == 0


def _tree_paths(g: SubgroupGraph) -> dict[int, tuple]:
    paths = {0: ()}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for x in sorted(g.adj[v], key=_label_order):
            w = g.adj[v][x]
            if w not in paths:
                paths[w] = paths[v] + (x,)
                queue.append(w)
    return paths


def free_basis(g: SubgroupGraph) -> list[Word]:
    """Basis read off the non-tree edges of a breadth-first spanning tree."""
    paths = _tree_paths(g)
    tree = set()
    for w, p in paths.items():
        if p:
            x = p[-1]
            v = g.adj[w][-x]
            tree.add((v, x, w) if x > 0 else (w, -x, v))
    basis = []
    for v, gi, w in g.edges():
        x = gi + 1
        if (v, x, w) in tree:
            continue
        b = Word(paths[v] + (x,) + tuple(-y for y in reversed(paths[w])), g.rank_ambient)
        basis.append(min(b, ~b, key=shortlex_key))
    return sorted(basis, key=shortlex_key)


@dataclass(frozen=True)
class Trivial:
    tag: str = field(default="Trivial", init=False)


@dataclass(frozen=True)
class InfiniteCyclic:
    generator: Word
    tag: str = field(default="InfiniteCyclic", init=False)


@dataclass(frozen=True)
class NonAbelianFree:
    rank: int
    basis: tuple
    tag: str = field(default="NonAbelianFree", init=False)


SubgroupClass = Trivial | InfiniteCyclic | NonAbelianFree


def classify(generators: Sequence[Word], rank: int | None = None) -> SubgroupClass:
    """Trivial, infinite cyclic, or non-abelian free, with folded basis witnesses."""
    g = build_graph(generators, rank)
    basis = free_basis(g)
    if not basis:
        return Trivial()
    if len(basis) == 1:
        return InfiniteCyclic(basis[0])
    return NonAbelianFree(len(basis), tuple(basis))


def same_subgroup(a: SubgroupGraph, b: SubgroupGraph) -> bool:
    return a.canonical_form() == b.canonical_form()
