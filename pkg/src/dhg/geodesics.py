"""Geodesics, quasi-geodesics and quasi-isometry checks on finite digraphs.

Walks are tuples of vertex names.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .audit import AuditReport
from .digraph import dist
from .errors import DomainError, NoPathError
from .extdist import INF, from_raw, to_json

__all__ = [
    "check_walk", "walk_length", "interval", "geodesics", "first_geodesic",
    "is_geodesic", "is_quasi_geodesic", "stability_kappa", "QiSpec", "qi_check",
]


def check_walk(g, walk):
    walk = tuple(walk)
    if not walk:
        raise DomainError("empty walk")
    for u, v in zip(walk, walk[1:]):
        if not g.has_edge(u, v):
            raise DomainError(f"{u}->{v} is not an edge")
    return walk


def walk_length(walk):
    return len(walk) - 1


def interval(g, u, v):
    """Ids of vertices lying on some u -> v geodesic, as a boolean mask."""
    i, j = g.vid(u), g.vid(v)
    row, col = g.dist_row(i), g.dist_col(j)
    total = row[j]
    if total < 0:
        return np.zeros(g.n, dtype=bool)
    return (row >= 0) & (col >= 0) & (row + col == total)


def geodesics(g, u, v, cap=10000):
    """All u -> v geodesics in lexicographic id order, at most ``cap``.

    Returns ``(walks, exhausted)``; ``exhausted`` is False when the cap cut
    the enumeration short.
    """
    i, j = g.vid(u), g.vid(v)
    row = g.dist_row(i)
    col = g.dist_col(j)
    total = int(row[j])
    if total < 0:
        raise NoPathError(f"no path from {u} to {v}")
    walks = []
    stack = [(i, (i,))]
    while stack:
        x, path = stack.pop()
        if x == j:
            if len(walks) == cap:
                return walks, False
            walks.append(tuple(g.name(k) for k in path))
            continue
        step = len(path)
        nxt = [y for y in g.out_ids(x) if row[y] == step and col[y] == total - step]
        for y in reversed(nxt):
            stack.append((y, path + (y,)))
    return walks, True


def first_geodesic(g, u, v):
    walks, _ = geodesics(g, u, v, cap=1)
    return walks[0]


def is_geodesic(g, walk):
    walk = check_walk(g, walk)
    return dist(g, walk[0], walk[-1]) == walk_length(walk)


def _rational(x):
    return x if isinstance(x, Fraction) else Fraction(str(x))


def is_quasi_geodesic(g, walk, gamma, c):
    """Check ``len(w[i..j]) <= gamma * d(w[i], w[j]) + c`` for all i < j.

    Returns ``(ok, first_violating_pair)``.
    """
    walk = check_walk(g, walk)
    gamma, c = _rational(gamma), _rational(c)
    if gamma < 1 or c < 0:
        raise DomainError("need gamma >= 1 and c >= 0")
    ids = [g.vid(v) for v in walk]
    for a in range(len(ids)):
        row = g.dist_row(ids[a])
        for b in range(a + 1, len(ids)):
            if b - a > gamma * int(row[ids[b]]) + c:
                return False, (a, b)
    return True, None


def stability_kappa(g, p, q):
    """Least k with every vertex of p within k of q in both directions."""
    p, q = check_walk(g, p), check_walk(g, q)
    if (p[0], p[-1]) != (q[0], q[-1]):
        raise DomainError("walks must have the same endpoints")
    D = g.distance_matrix()
    qi = [g.vid(v) for v in q]
    worst = 0
    for v in p:
        i = g.vid(v)
        into = D[qi, i]
        out = D[i, qi]
        a = into[into >= 0].min() if (into >= 0).any() else -1
        b = out[out >= 0].min() if (out >= 0).any() else -1
        if a < 0 or b < 0:
            return INF
        worst = max(worst, int(a), int(b))
    return worst


@dataclass(frozen=True)
class QiSpec:
    mapping: dict
    gamma: Fraction
    c: Fraction

    @classmethod
    def from_json(cls, data):
        return cls(dict(data["map"]), Fraction(data["gamma"]), Fraction(data["c"]))

    def to_json(self):
        return {"map": dict(self.mapping), "gamma": str(self.gamma), "c": str(self.c)}


def qi_check(g1, g2, spec, codense=True):
    """Audit a map g1 -> g2 against the quasi-isometry inequalities.

    Checks ``d1/gamma - c <= d2 <= gamma*d1 + c`` on every ordered pair of
    g1 and, when ``codense``, that every vertex of g2 is within c of the
    image in both directions.
    """
    f = spec.mapping
    missing = [v for v in g1.vertices if v not in f]
    if missing:
        raise DomainError(f"map is not total, e.g. {missing[0]!r} has no image")
    gamma, c = spec.gamma, spec.c
    if gamma < 1 or c < 0:
        raise DomainError("need gamma >= 1 and c >= 0")
    D1 = g1.distance_matrix()
    D2 = g2.distance_matrix()
    img = np.array([g2.vid(f[v]) for v in g1.vertices], dtype=np.int64)
    report = AuditReport("quasi-isometry")
    for i, x in enumerate(g1.vertices):
        for j, y in enumerate(g1.vertices):
            d1 = from_raw(D1[i, j])
            d2 = from_raw(D2[img[i], img[j]])
            report.checked += 1
            if d1 is INF:
                ok = d2 is INF
            elif d2 is INF:
                ok = False
            else:
                ok = Fraction(d1) / gamma - c <= d2 <= gamma * d1 + c
            if not ok:
                report.violations.append(
                    {"check": "embedding", "pair": [x, y], "d1": to_json(d1), "d2": to_json(d2)})
    if codense:
        for k, y in enumerate(g2.vertices):
            report.checked += 1
            to_y = D2[img, k]
            from_y = D2[k, img]
            good = (to_y >= 0) & (from_y >= 0) & (to_y <= c) & (from_y <= c)
            if not good.any():
                report.violations.append({"check": "codensity", "vertex": y})
    report.extremal = {"gamma": str(gamma), "c": str(c)}
    return report
