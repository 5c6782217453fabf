"""Simple undirected graphs on at most 64 vertices.

Adjacency is stored as one bitmask per vertex.  The module also carries the
graph6 codec and an exact isomorphism search for small graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import MalformedGraph6, SizeLimitExceeded, SizeMismatch

MAX_VERTICES = 64
MAX_ISO_VERTICES = 16

_GRAPH6_HEADER = ">>graph6<<"


@dataclass(frozen=True)
class Graph:
    """An immutable simple graph; ``rows[i]`` has bit ``j`` set iff i ~ j."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTICES:
            raise SizeLimitExceeded(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        if len(self.rows) != self.n:
            raise ValueError("need one adjacency row per vertex")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.rows):
            if row & ~full or row >> i & 1:
                raise ValueError(f"row {i} has loops or out-of-range bits")
            for j in _bits(row):
                if not self.rows[j] >> i & 1:
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")

    # construction ---------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, tuple(rows))

    @classmethod
    def from_adjacency(cls, a: Sequence[Sequence[int]]) -> "Graph":
        n = len(a)
        rows = []
        for i, row in enumerate(a):
            if len(row) != n:
                raise ValueError("adjacency matrix must be square")
            bits = 0
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise ValueError(f"entry ({i}, {j}) = {x} is not 0/1")
                if x:
                    bits |= 1 << j
            rows.append(bits)
        return cls(n, tuple(rows))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Graph":
        """Graph whose edge k (graph6 order, see `edge_order`) is bit k of mask."""
        return cls.from_edges(n, (e for k, e in enumerate(edge_order(n)) if mask >> k & 1))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << i) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    # queries --------------------------------------------------------------

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.rows[i]) if i < j]

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.rows]

    def neighbors(self, i: int) -> list[int]:
        return list(_bits(self.rows[i]))

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def mask(self) -> int:
        return sum(1 << k for k, (i, j) in enumerate(edge_order(self.n)) if self.has_edge(i, j))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image of the graph under vertex map i -> perm[i]."""
        return Graph.from_edges(self.n, ((perm[i], perm[j]) for i, j in self.edges()))

    def __str__(self) -> str:
        return emit_graph6(self)


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def edge_order(n: int) -> list[tuple[int, int]]:
    """Vertex pairs in graph6 order: upper triangle, column by column."""
    return [(i, j) for j in range(1, n) for i in range(j)]


# graph6 ---------------------------------------------------------------------


def parse_graph6(text: str) -> Graph:
    data = text.strip()
    if data.startswith(_GRAPH6_HEADER):
        data = data[len(_GRAPH6_HEADER):]
    if not data:
        raise MalformedGraph6("empty graph6 record")
    bad = [c for c in data if not 63 <= ord(c) <= 126]
    if bad:
        raise MalformedGraph6(f"character {bad[0]!r} outside the graph6 range 63..126")
    vals = [ord(c) - 63 for c in data]
    if vals[0] == 63:
        if len(vals) < 4:
            raise MalformedGraph6("truncated vertex count")
        if vals[1] == 63:
            raise MalformedGraph6("vertex counts above 258047 are not supported")
        n = vals[1] << 12 | vals[2] << 6 | vals[3]
        if n < 63:
            raise MalformedGraph6(f"non-canonical long-form vertex count {n}")
        body = vals[4:]
    else:
        n = vals[0]
        body = vals[1:]
    if n == 0:
        raise MalformedGraph6("graphs need at least one vertex")
    if n > MAX_VERTICES:
        raise MalformedGraph6(f"n = {n} exceeds the {MAX_VERTICES}-vertex limit")
    nbits = n * (n - 1) // 2
    if len(body) != (nbits + 5) // 6:
        raise MalformedGraph6(f"expected {(nbits + 5) // 6} data bytes for n={n}, got {len(body)}")
    bits = 0
    for v in body:
        bits = bits << 6 | v
    pad = 6 * len(body) - nbits
    if bits & ((1 << pad) - 1):
        raise MalformedGraph6("nonzero padding bits")
    bits >>= pad
    rows = [0] * n
    for k, (i, j) in enumerate(edge_order(n)):
        if bits >> (nbits - 1 - k) & 1:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def emit_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        out = [n]
    else:
        out = [63, n >> 12 & 63, n >> 6 & 63, n & 63]
    pairs = edge_order(n)
    for start in range(0, len(pairs), 6):
        chunk = pairs[start:start + 6]
        v = 0
        for i, j in chunk:
            v = v << 1 | (g.rows[i] >> j & 1)
        out.append(v << (6 - len(chunk)))
    return "".join(chr(v + 63) for v in out)


def parse_adjacency_json(text: str) -> Graph:
    """Accept ``{"n": k, "edges": [[i, j], ...]}`` or a list of neighbour lists."""
    obj = json.loads(text)
    if isinstance(obj, dict):
        return Graph.from_edges(int(obj["n"]), [tuple(e) for e in obj.get("edges", [])])
    if isinstance(obj, list):
        n = len(obj)
        return Graph.from_edges(n, [(i, j) for i, nbrs in enumerate(obj) for j in nbrs])
    raise ValueError("adjacency JSON must be an object or a list of neighbour lists")


# operations ------------------------------------------------------------------


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << i) for i, row in enumerate(g.rows)))


def adjacency(g: Graph):
    from .linalg import IntMatrix

    return IntMatrix([[row >> j & 1 for j in range(g.n)] for row in g.rows])


def _refine(graphs: Sequence[Graph]) -> list[list[int]]:
    """Stable colour refinement run jointly so colours are comparable across graphs."""
    colors = [[row.bit_count() for row in g.rows] for g in graphs]
    while True:
        table: dict[tuple, int] = {}
        sigs = [
            [(c[v], tuple(sorted(c[u] for u in _bits(g.rows[v])))) for v in range(g.n)]
            for g, c in zip(graphs, colors)
        ]
        for sig in sorted({s for gs in sigs for s in gs}):
            table[sig] = len(table)
        new = [[table[s] for s in gs] for gs in sigs]
        if all(len(set(a)) == len(set(b)) for a, b in zip(new, colors)):
            return new
        colors = new


def iter_isomorphisms(g: Graph, h: Graph) -> Iterator[tuple[int, ...]]:
    """Yield every bijection pi with h = g.relabel(pi)."""
    if g.n != h.n:
        raise SizeMismatch(f"vertex counts differ: {g.n} vs {h.n}")
    n = g.n
    if n > MAX_ISO_VERTICES:
        raise SizeLimitExceeded(f"isomorphism search is limited to n <= {MAX_ISO_VERTICES}")
    if g.edge_count != h.edge_count:
        return
    cg, ch = _refine([g, h])
    if sorted(cg) != sorted(ch):
        return
    # rare colour classes first keeps the search tree narrow
    size = {c: cg.count(c) for c in cg}
    order = sorted(range(n), key=lambda v: (size[cg[v]], cg[v], v))
    cands = [[w for w in range(n) if ch[w] == cg[v]] for v in order]
    image = [-1] * n
    used = 0

    def extend(k: int) -> Iterator[tuple[int, ...]]:
        nonlocal used
        if k == n:
            yield tuple(image)
            return
        v = order[k]
        for w in cands[k]:
            if used >> w & 1:
                continue
            ok = True
            for u in order[:k]:
                if (g.rows[v] >> u & 1) != (h.rows[w] >> image[u] & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = w
            used |= 1 << w
            yield from extend(k + 1)
            used &= ~(1 << w)
            image[v] = -1

    yield from extend(0)


def are_isomorphic(g: Graph, h: Graph) -> tuple[int, ...] | None:
    """Return a vertex bijection mapping g onto h, or None."""
    return next(iter_isomorphisms(g, h), None)


def automorphism_count(g: Graph) -> int:
    return sum(1 for _ in iter_isomorphisms(g, g))
