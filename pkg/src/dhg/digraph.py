"""Finite digraphs with the path semimetric.

Vertices carry opaque integer ids (their position in ``vertices``) and a
name. Public functions take and return names; numpy arrays are indexed by
id. Parallel edges and loops are kept in ``edges`` but do not change any
distance.
"""
import json
from collections import deque
from enum import Enum

import numpy as np

from . import kernels
from .errors import DomainError, ParseError
from .extdist import INF, from_raw

__all__ = [
    "Side", "Digraph", "ingest_edge_list", "dist", "dist_sym", "ball",
    "independent_set_lower_bound",
]


class Side(Enum):
    OUT = "out"
    IN = "in"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"side must be 'out' or 'in', got {value!r}") from None


def _csr(n, adjacency):
    indptr = np.zeros(n + 1, dtype=np.int32)
    for i, nbrs in enumerate(adjacency):
        indptr[i + 1] = indptr[i] + len(nbrs)
    indices = np.fromiter((v for nbrs in adjacency for v in nbrs), dtype=np.int32,
                          count=int(indptr[-1]))
    return indptr, indices


class Digraph:
    """Immutable finite multi-digraph.

    Args:
        vertices: vertex names; the id of a vertex is its position.
        edges: ``(src, dst)`` pairs of ids.
        labels: optional per-vertex metadata, e.g. ``(series, index)``.
    """

    def __init__(self, vertices, edges=(), labels=None):
        self._names = tuple(str(v) for v in vertices)
        self._index = {name: i for i, name in enumerate(self._names)}
        if len(self._index) != len(self._names):
            raise DomainError("duplicate vertex names")
        n = len(self._names)
        clean = []
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range")
            clean.append((int(u), int(v)))
        self._edges = tuple(clean)
        out = [set() for _ in range(n)]
        inn = [set() for _ in range(n)]
        for u, v in self._edges:
            out[u].add(v)
            inn[v].add(u)
        self._out = tuple(tuple(sorted(s)) for s in out)
        self._in = tuple(tuple(sorted(s)) for s in inn)
        self.labels = tuple(labels) if labels is not None else None
        self._matrix = None
        self._rows = {}
        self._cols = {}
        self._csr_cache = {}

    # -- structure -----------------------------------------------------
    @property
    def vertices(self):
        return self._names

    @property
    def n(self):
        return len(self._names)

    def __len__(self):
        return len(self._names)

    def __contains__(self, name):
        return name in self._index

    def __repr__(self):
        return f"Digraph(n={self.n}, m={len(self._edges)})"

    @property
    def edge_ids(self):
        return self._edges

    @property
    def edges(self):
        return tuple((self._names[u], self._names[v]) for u, v in self._edges)

    def vid(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise DomainError(f"unknown vertex {name!r}") from None

    def name(self, i):
        return self._names[i]

    def out_ids(self, i):
        return self._out[i]

    def in_ids(self, i):
        return self._in[i]

    def successors(self, name):
        return tuple(self._names[j] for j in self._out[self.vid(name)])

    def predecessors(self, name):
        return tuple(self._names[j] for j in self._in[self.vid(name)])

    def has_edge(self, u, v):
        return self.vid(v) in self._out[self.vid(u)]

    def csr(self, side=Side.OUT):
        side = Side.parse(side)
        if side not in self._csr_cache:
            adj = self._out if side is Side.OUT else self._in
            self._csr_cache[side] = _csr(self.n, adj)
        return self._csr_cache[side]

    def induced(self, names):
        keep = [v for v in self._names if v in set(names)]
        idx = {v: i for i, v in enumerate(keep)}
        edges = [(idx[self._names[u]], idx[self._names[v]]) for u, v in self._edges
                 if self._names[u] in idx and self._names[v] in idx]
        labels = None
        if self.labels is not None:
            labels = [self.labels[self.vid(v)] for v in keep]
        return Digraph(keep, edges, labels)

    def without(self, names):
        """Induced subgraph on the complement of ``names``."""
        drop = set(names)
        return self.induced([v for v in self._names if v not in drop])

    # -- distances -----------------------------------------------------
    def distance_matrix(self):
        """All-pairs distances as int32, -1 where unreachable. Cached."""
        if self._matrix is None:
            indptr, indices = self.csr(Side.OUT)
            m = kernels.apsp(indptr, indices, self.n)
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def _bfs(self, source, adj):
        row = np.full(self.n, -1, dtype=np.int32)
        row[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if row[v] < 0:
                    row[v] = row[u] + 1
                    queue.append(v)
        row.setflags(write=False)
        return row

    def dist_row(self, i):
        """Distances from id ``i`` (raw int32 array)."""
        if self._matrix is not None:
            return self._matrix[i]
        if i not in self._rows:
            self._rows[i] = self._bfs(i, self._out)
        return self._rows[i]

    def dist_col(self, i):
        """Distances to id ``i`` (raw int32 array)."""
        if self._matrix is not None:
            return self._matrix[:, i]
        if i not in self._cols:
            self._cols[i] = self._bfs(i, self._in)
        return self._cols[i]

    # -- serialization -------------------------------------------------
    def to_json(self):
        return {
            "vertices": sorted(self._names),
            "edges": sorted([list(e) for e in self.edges]),
        }

    @classmethod
    def from_json(cls, data):
        names = list(data["vertices"])
        idx = {v: i for i, v in enumerate(names)}
        try:
            edges = [(idx[u], idx[v]) for u, v in data["edges"]]
        except KeyError as exc:
            raise DomainError(f"edge mentions unknown vertex {exc.args[0]!r}") from None
        return cls(names, edges)

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def ingest_edge_list(text):
    """Parse ``SRC DST`` lines into a digraph.

    Blank lines and ``#`` comments are skipped; ids follow first appearance.

    >>> g = ingest_edge_list("a b\\n# loop\\nb a\\n")
    >>> g.vertices, g.edges
    (('a', 'b'), (('a', 'b'), ('b', 'a')))
    """
    names = []
    index = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 'SRC DST', got {raw.strip()!r}")
        ids = []
        for token in parts:
            if token not in index:
                index[token] = len(names)
                names.append(token)
            ids.append(index[token])
        edges.append(tuple(ids))
    return Digraph(names, edges)


def dist(g, u, v):
    return from_raw(g.dist_row(g.vid(u))[g.vid(v)])


def dist_sym(g, u, v):
    return min(dist(g, u, v), dist(g, v, u))


def ball(g, center, r, side=Side.OUT):
    """Vertices within distance ``r`` of (OUT) or to (IN) a centre set."""
    side = Side.parse(side)
    if r < 0:
        raise DomainError("radius must be non-negative")
    if isinstance(center, str):
        center = [center]
    adj = g._out if side is Side.OUT else g._in
    seen = {}
    queue = deque()
    for c in center:
        i = g.vid(c)
        if i not in seen:
            seen[i] = 0
            queue.append(i)
    while queue:
        u = queue.popleft()
        if seen[u] == r:
            continue
        for v in adj[u]:
            if v not in seen:
                seen[v] = seen[u] + 1
                queue.append(v)
    return frozenset(g.name(i) for i in seen)


def independent_set_lower_bound(g, region=None):
    """Greedy independent set (pairwise infinite both ways).

    Vertices comparable with the fewest others in the region go first,
    ties by id.
    """
    ids = sorted({g.vid(v) for v in (region if region is not None else g.vertices)})
    D = g.distance_matrix()
    sub = D[np.ix_(ids, ids)]
    conflicts = ((sub >= 0) | (sub.T >= 0)).sum(axis=1)
    order = [ids[k] for k in sorted(range(len(ids)), key=lambda k: (conflicts[k], ids[k]))]
    chosen = []
    for i in order:
        if all(D[i, j] < 0 and D[j, i] < 0 for j in chosen):
            chosen.append(i)
    chosen.sort()
    return len(chosen), tuple(g.name(i) for i in chosen)
