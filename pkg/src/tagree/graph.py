"""Dependency graphs, proper colorings and the chromatic number."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .bounds import ColorClassSizes


class GraphFormatError(ValueError):
    pass


class GraphTooLarge(ValueError):
    """Exact coloring refused; use the greedy upper bound instead."""


@dataclass(frozen=True)
class DependencyGraph:
    """Simple undirected graph on vertices 0..n-1.

    ``adjacency[v]`` is the sorted tuple of neighbours of v.
    """

    n: int
    adjacency: tuple

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DependencyGraph":
        if n < 0:
            raise ValueError(f"vertex count must be >= 0, got {n}")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj_sets[u]

    @property
    def _adj_sets(self) -> tuple:
        # cached lazily; the dataclass is frozen so write through object.__setattr__
        try:
            return self.__dict__["_sets"]
        except KeyError:
            sets = tuple(frozenset(a) for a in self.adjacency)
            object.__setattr__(self, "_sets", sets)
            return sets


@dataclass(frozen=True)
class Coloring:
    """Proper coloring with colors 0..k-1, each used at least once."""

    assignment: tuple
    k: int

    @classmethod
    def from_assignment(cls, g: DependencyGraph, assignment) -> "Coloring":
        assignment = tuple(int(c) for c in assignment)
        if len(assignment) != g.n:
            raise ValueError("assignment length differs from vertex count")
        used = sorted(set(assignment))
        if used != list(range(len(used))):
            raise ValueError(f"colors must be exactly 0..k-1, got {used}")
        for u, v in g.edges():
            if assignment[u] == assignment[v]:
                raise ValueError(f"edge ({u}, {v}) is monochromatic")
        return cls(assignment, len(used))

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, c in enumerate(self.assignment):
            out[c].append(v)
        return out

    @property
    def class_sizes(self) -> ColorClassSizes:
        return ColorClassSizes([len(c) for c in self.classes()])


def is_independent_set(g: DependencyGraph, s: Iterable[int]) -> bool:
    s = list(s)
    for v in s:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range for n={g.n}")
    members = set(s)
    return not any(members.intersection(g.adjacency[v]) for v in members)


def greedy_coloring(g: DependencyGraph, order: str = "natural") -> Coloring:
    """First-fit coloring; uses at most max_degree + 1 colors."""
    if order == "natural":
        seq = range(g.n)
    elif order == "degree-descending":
        seq = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    else:
        raise ValueError(f"unknown order {order!r}")
    color = [-1] * g.n
    for v in seq:
        taken = {color[u] for u in g.adjacency[v]}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    if order != "natural":
        color = _relabel_by_first_use(color)
    return Coloring(tuple(color), max(color, default=-1) + 1)


def _relabel_by_first_use(color: list[int]) -> list[int]:
    remap: dict[int, int] = {}
    for c in color:
        remap.setdefault(c, len(remap))
    return [remap[c] for c in color]


def greedy_clique(g: DependencyGraph) -> list[int]:
    """A maximal clique grown greedily from each vertex; returns the largest found."""
    best: list[int] = []
    adj = g._adj_sets
    for start in range(g.n):
        clique = [start]
        cand = set(adj[start])
        while cand:
            v = max(cand, key=lambda u: (len(adj[u] & cand), -u))
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = sorted(clique)
    return best


def _k_colorable(g: DependencyGraph, k: int, order: list[int]) -> list[int] | None:
    adj = g.adjacency
    color = [-1] * g.n

    def place(idx: int, used: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        taken = {color[u] for u in adj[v]}
        for c in range(min(used + 1, k)):
            if c not in taken:
                color[v] = c
                if place(idx + 1, max(used, c + 1)):
                    return True
        color[v] = -1
        return False

    return color if place(0, 0) else None


def exact_coloring(g: DependencyGraph, vertex_limit: int = 20) -> Coloring:
    """Minimum proper coloring by branch and bound between clique and greedy bounds."""
    if g.n > vertex_limit:
        raise GraphTooLarge(
            f"graph has {g.n} vertices > limit {vertex_limit}; use the greedy bound"
        )
    best = min(
        (greedy_coloring(g, "natural"), greedy_coloring(g, "degree-descending")),
        key=lambda c: c.k,
    )
    if g.n == 0:
        return best
    lower = len(greedy_clique(g))
    # branch over vertices by decreasing degree; symmetry broken by opening colors in order
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    for k in range(lower, best.k):
        found = _k_colorable(g, k, order)
        if found is not None:
            return Coloring(tuple(_relabel_by_first_use(found)), k)
    return best


def exact_chromatic_number(g: DependencyGraph, vertex_limit: int = 20) -> int:
    return exact_coloring(g, vertex_limit).k


def make_clique_blocks(num_blocks: int, block_size: int) -> DependencyGraph:
    """Disjoint union of num_blocks cliques; block b holds vertices b*s .. b*s+s-1."""
    if num_blocks < 1 or block_size < 1:
        raise ValueError("num_blocks and block_size must be >= 1")
    edges = []
    for b in range(num_blocks):
        base = b * block_size
        edges.extend(
            (base + i, base + j) for i in range(block_size) for j in range(i + 1, block_size)
        )
    return DependencyGraph.from_edges(num_blocks * block_size, edges)


def make_window_overlap_graph(n_positions: int, d: int) -> DependencyGraph:
    """Overlap graph of the length-d windows of a length-n string.

    Vertex i stands for the window starting at (1-based) position i+1; two
    windows are adjacent iff they share a letter, i.e. their starts differ by < d.
    """
    if n_positions < 1 or d < 1:
        raise ValueError("n_positions and d must be >= 1")
    nv = max(n_positions - d + 1, 0)
    edges = [(i, j) for i in range(nv) for j in range(i + 1, min(i + d, nv))]
    return DependencyGraph.from_edges(nv, edges)


def parse_graph(text: str) -> DependencyGraph:
    """Parse the ``n m`` header + ``u v`` edge-line format (0-based, u < v)."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise GraphFormatError("first line must be 'n m'")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
    except ValueError as exc:
        raise GraphFormatError(f"bad header: {exc}") from None
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(lines) - 1}")
    seen = set()
    for lineno, parts in enumerate(lines[1:], start=2):
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at {u}")
        if not u < v:
            raise GraphFormatError(f"line {lineno}: need u < v, got {u} {v}")
        if not (0 <= u and v < n):
            raise GraphFormatError(f"line {lineno}: vertex out of range")
        if (u, v) in seen:
            raise GraphFormatError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add((u, v))
    return DependencyGraph.from_edges(n, seen)


def format_graph(g: DependencyGraph) -> str:
    edges = g.edges()
    return "".join([f"{g.n} {len(edges)}\n"] + [f"{u} {v}\n" for u, v in edges])


def random_graph(n: int, p: float, rng) -> DependencyGraph:
    """Erdos-Renyi G(n, p) using a numpy Generator."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return DependencyGraph.from_edges(n, edges)
