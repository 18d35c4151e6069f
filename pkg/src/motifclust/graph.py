"""Simple undirected graphs on dense integer vertex ids, plus small generators."""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import GraphParseError, GraphValidationError

log = logging.getLogger(__name__)

Triple = tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph with vertices ``0..n-1``.

    ``base`` is the offset used to turn an internal id back into the label
    found in the input file (karate is conventionally 1-based).
    """

    n: int
    adj: np.ndarray = field(repr=False)
    base: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise GraphValidationError("graph needs at least one vertex")
        a = np.asarray(self.adj, dtype=bool)
        if a.shape != (self.n, self.n):
            raise GraphValidationError(f"adjacency shape {a.shape} does not match n={self.n}")
        if a.diagonal().any():
            raise GraphValidationError("self-loops are not allowed")
        if not (a == a.T).all():
            raise GraphValidationError("adjacency must be symmetric")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "adj", a)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], base: int = 0) -> "Graph":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u + base}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u, v] = adj[v, u] = True
        return cls(n, adj, base)

    @property
    def edge_count(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.nonzero(np.triu(self.adj, 1))
        return list(zip(iu.tolist(), ju.tolist()))

    def neighbors(self, u: int) -> set[int]:
        return set(np.flatnonzero(self.adj[u]).tolist())

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def label(self, v: int) -> int:
        return v + self.base

    def density(self) -> float:
        pairs = self.n * (self.n - 1) // 2
        return self.edge_count / pairs if pairs else 0.0

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and bool((self.adj == other.adj).all())

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))


def parse_edge_list(text: str | TextIO, base: int = 0, n: int | None = None) -> Graph:
    """Parse a whitespace-separated edge list.

    ``base`` is subtracted from every id (1 for one-based files). ``n`` may
    raise the vertex count above ``max id + 1`` to admit isolated vertices.
    """
    if base not in (0, 1):
        raise ValueError("base must be 0 or 1")
    stream = io.StringIO(text) if isinstance(text, str) else text
    edges: set[tuple[int, int]] = set()
    max_id = -1
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError(f"line {lineno}: expected two vertex ids, got {line!r}", lineno)
        try:
            u, v = (int(t) - base for t in tokens)
        except ValueError:
            raise GraphParseError(f"line {lineno}: non-integer vertex id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError(f"line {lineno}: vertex id below {base}", lineno)
        if u == v:
            raise GraphValidationError(f"line {lineno}: self-loop at vertex {u + base}")
        e = (u, v) if u < v else (v, u)
        if e in edges:
            log.debug("line %d: duplicate edge %s collapsed", lineno, line)
        edges.add(e)
        max_id = max(max_id, v, u)
    size = max_id + 1
    if n is not None:
        if n < size:
            raise GraphValidationError(f"--n {n} is smaller than the largest vertex id + 1 ({size})")
        size = n
    if size < 1:
        raise GraphParseError("edge list contains no edges", 0)
    return Graph.from_edges(size, sorted(edges), base)


def read_edge_list(path: str | Path, base: int = 0, n: int | None = None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, base=base, n=n)


def format_edge_list(g: Graph) -> str:
    """Inverse of :func:`parse_edge_list` (uses the graph's own base)."""
    return "".join(f"{u + g.base} {v + g.base}\n" for u, v in g.edges())


def enumerate_triangles(g: Graph) -> list[Triple]:
    """All triangles ``(u, v, w)`` with ``u < v < w``, in lexicographic order."""
    out = []
    nbrs = [np.flatnonzero(g.adj[u]) for u in range(g.n)]
    for u in range(g.n):
        for v in nbrs[u][nbrs[u] > u]:
            common = np.flatnonzero(g.adj[u] & g.adj[v])
            out.extend((u, int(v), int(w)) for w in common[common > v])
    return out


def triangle_tensor(g: Graph) -> np.ndarray:
    """Boolean ``n x n x n`` array, True where the three ids form a triangle."""
    a = g.adj
    return a[:, :, None] & a[:, None, :] & a[None, :, :]


def turan_graph(n: int, parts: int) -> Graph:
    """Complete ``parts``-partite graph with part sizes differing by at most one."""
    if parts < 1 or n < parts:
        raise ValueError(f"turan_graph needs n >= parts >= 1, got n={n}, parts={parts}")
    # vertex v goes to part v % parts, which balances sizes
    part = np.arange(n) % parts
    return Graph(n, part[:, None] != part[None, :])


def complete_graph(n: int) -> Graph:
    return Graph(n, ~np.eye(n, dtype=bool))


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, 1)
    return Graph(n, upper | upper.T)


def is_clique(g: Graph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return all(g.adj[u, v] for u, v in combinations(vs, 2))


def maximal_cliques(g: Graph) -> list[frozenset[int]]:
    """Bron-Kerbosch with Tomita pivoting; each maximal clique once, sorted."""
    nbrs = [g.neighbors(u) for u in range(g.n)]
    found: list[frozenset[int]] = []

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            found.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(p & nbrs[u]))
        for v in sorted(p - nbrs[pivot]):
            expand(r | {v}, p & nbrs[v], x & nbrs[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(g.n)), set())
    return sorted(found, key=lambda c: sorted(c))
