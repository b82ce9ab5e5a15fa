"""Boundary points as classes of rays and anti-rays.

``R1 <= R2`` at a given resolution means: inside the truncation of radius
N there is a directed path of length at most M from a vertex of R1 to a
vertex of R2 that avoids the out- and in-balls of radius r around the base
set. Classification sweeps r over a list and requires every value to hold.
"""
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .audit import AuditReport
from .digraph import Digraph, Side, ball
from .errors import DomainError, ExpansionNeeded, PreconditionError
from .extdist import INF, from_raw
from .families import truncate
from .rays import RaySpec, materialize_in

__all__ = [
    "Outcome", "ResolutionVerdict", "avoided_region", "relate_leq", "relate_equiv",
    "RayClass", "Classification", "classify", "audit_no_3_chain", "is_geodesic_ray",
    "extract_geodesic_ray", "tail_within",
]


class Outcome(Enum):
    HOLDS = "holds"
    FAILS = "fails-exhausted"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ResolutionVerdict:
    relation: str
    params: dict
    outcome: Outcome
    witness: tuple = None
    reason: str = None

    @property
    def holds(self):
        return self.outcome is Outcome.HOLDS

    def to_json(self):
        data = {"relation": self.relation, "params": dict(self.params),
                "outcome": self.outcome.value}
        if self.witness is not None:
            data["witness"] = list(self.witness)
        if self.reason is not None:
            data["reason"] = self.reason
        return data


def avoided_region(trunc, base, r):
    base = list(base)
    for b in base:
        if b not in trunc:
            raise DomainError(f"base vertex {b!r} is not in the truncation")
    g = trunc.graph
    return ball(g, base, r, Side.OUT) | ball(g, base, r, Side.IN)


def _search(g, sources, targets, blocked, max_len=None):
    """Shortest path from any source to any target avoiding ``blocked``."""
    parent = {}
    depth = {}
    queue = deque()
    for s in sources:
        i = g.vid(s)
        if s in blocked or i in depth:
            continue
        depth[i] = 0
        parent[i] = None
        queue.append(i)
    target_ids = {g.vid(t) for t in targets if t not in blocked}
    blocked_ids = {g.vid(b) for b in blocked}
    while queue:
        u = queue.popleft()
        if u in target_ids:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return tuple(g.name(k) for k in reversed(path))
        if max_len is not None and depth[u] == max_len:
            continue
        for v in g.out_ids(u):
            if v not in depth and v not in blocked_ids:
                depth[v] = depth[u] + 1
                parent[v] = u
                queue.append(v)
    return None


def _beyond(seq, blocked):
    """Number of vertices after the last one inside the avoided region."""
    last = -1
    for k, v in enumerate(seq):
        if v in blocked:
            last = k
    return len(seq) - last - 1


def _same_family(r1, r2):
    if r1.family is not r2.family:
        raise DomainError("rays belong to different families")
    return r1.family


def _base(family, base):
    return tuple(base) if base is not None else tuple(family.base_vertices)


def relate_leq(r1, r2, M, r, N, base=None):
    """One resolution of the boundary relation ``r1 <= r2``."""
    family = _same_family(r1, r2)
    if N < r + M + 1:
        raise PreconditionError(f"need N >= r + M + 1, got N={N}, r={r}, M={M}")
    if M < 0 or r < 0:
        raise DomainError("M and r must be non-negative")
    base = _base(family, base)
    trunc = truncate(family, N)
    blocked = avoided_region(trunc, base, r)
    s1 = materialize_in(trunc, r1)
    s2 = materialize_in(trunc, r2)
    params = {"M": M, "r": r, "N": N, "base": list(base)}
    path = _search(trunc.graph, s1, s2, blocked, max_len=M)
    if path is not None:
        return ResolutionVerdict("leq", params, Outcome.HOLDS, witness=path)
    short = [rr.describe() for rr, s in ((r1, s1), (r2, s2)) if _beyond(s, blocked) < r + M]
    if short:
        return ResolutionVerdict("leq", params, Outcome.INCONCLUSIVE,
                                 reason=f"prefix of {', '.join(short)} ends within r+M of the avoided balls")
    return ResolutionVerdict("leq", params, Outcome.FAILS)


def relate_equiv(r1, r2, M, r, N, base=None):
    return relate_leq(r1, r2, M, r, N, base), relate_leq(r2, r1, M, r, N, base)


def sweep(relation, r1, r2, rs, **kwargs):
    """Combine a relation over several avoidance radii: all must hold."""
    verdicts = [relation(r1, r2, r=r, **kwargs) for r in rs]
    params = dict(verdicts[-1].params)
    params["r"] = list(rs)
    name = verdicts[-1].relation
    if all(v.holds for v in verdicts):
        return ResolutionVerdict(name, params, Outcome.HOLDS, witness=verdicts[-1].witness)
    for v in verdicts:
        if v.outcome is Outcome.FAILS:
            return ResolutionVerdict(name, params, Outcome.FAILS,
                                     reason=f"no witness at r={v.params['r']}")
    bad = next(v for v in verdicts if v.outcome is Outcome.INCONCLUSIVE)
    return ResolutionVerdict(name, params, Outcome.INCONCLUSIVE, reason=bad.reason)


@dataclass(frozen=True)
class RayClass:
    members: tuple

    @property
    def representative(self):
        return self.members[0]

    @property
    def has_ray(self):
        return any(m.is_ray for m in self.members)

    @property
    def has_anti_ray(self):
        return any(not m.is_ray for m in self.members)

    @property
    def label(self):
        return "+".join(m.describe() for m in self.members)

    def to_json(self):
        return {"label": self.label, "members": [m.to_json() for m in self.members],
                "hasRay": self.has_ray, "hasAntiRay": self.has_anti_ray}


@dataclass
class Classification:
    relation: str
    classes: tuple
    order: frozenset
    params: dict
    verdicts: dict = field(default_factory=dict, repr=False)
    flags: list = field(default_factory=list)

    def index_of(self, ray):
        key = ray.key() if isinstance(ray, RaySpec) else None
        for i, cls in enumerate(self.classes):
            for m in cls.members:
                if m.key() == key or (isinstance(ray, str) and ray in (m.label, cls.label)):
                    return i
        raise DomainError(f"{ray!r} is not in this classification")

    def leq(self, a, b):
        i, j = self.index_of(a), self.index_of(b)
        return i == j or (i, j) in self.order

    def to_json(self):
        return {
            "relation": self.relation,
            "params": self.params,
            "classes": [c.to_json() for c in self.classes],
            "order": [[self.classes[i].label, self.classes[j].label] for i, j in sorted(self.order)],
            "flags": list(self.flags),
            "verdicts": [
                {"from": a, "to": b, **v.to_json()}
                for (a, b), v in sorted(self.verdicts.items())
            ],
        }

    @classmethod
    def from_json(cls, data, families=None):
        classes = tuple(
            RayClass(tuple(RaySpec.from_json(m, families) for m in c["members"]))
            for c in data["classes"])
        labels = [c.label for c in classes]
        order = frozenset((labels.index(a), labels.index(b)) for a, b in data["order"])
        return cls(data["relation"], classes, order, data.get("params", {}),
                   flags=list(data.get("flags", [])))


def _dedupe(rays):
    seen = {}
    for ray in rays:
        seen.setdefault(ray.key(), ray)
    return [seen[k] for k in sorted(seen)]


def classify_with(relation, name, rays, rs, params, workers=1, **kwargs):
    """Union-find on mutual relation, then the induced order on classes."""
    rays = _dedupe(rays)
    if not rays:
        raise DomainError("no rays to classify")
    n = len(rays)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]

    def run(pair):
        i, j = pair
        return sweep(relation, rays[i], rays[j], rs, **kwargs)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, pairs))
    else:
        results = [run(p) for p in pairs]
    verdict = dict(zip(pairs, results))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in pairs:
        if i < j and verdict[i, j].holds and verdict[j, i].holds:
            parent[find(j)] = find(i)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    blocks = sorted(groups.values())
    flags = []
    for block in blocks:
        for a in block:
            for b in block:
                if a != b and not verdict[a, b].holds:
                    flags.append(f"inconclusive: {rays[a].describe()} and {rays[b].describe()} "
                                 f"share a class but the relation fails between them")
    order = set()
    for x, bx in enumerate(blocks):
        for y, by in enumerate(blocks):
            if x == y:
                continue
            outs = {verdict[a, b].outcome for a in bx for b in by}
            if outs == {Outcome.HOLDS}:
                order.add((x, y))
            elif outs != {Outcome.FAILS}:
                flags.append(f"inconclusive: order between classes {x} and {y} is mixed "
                             f"({', '.join(sorted(o.value for o in outs))})")
    for x, y in order:
        if (y, x) in order:
            flags.append(f"inconclusive: antisymmetry fails between classes {x} and {y}")
    classes = tuple(RayClass(tuple(rays[i] for i in b)) for b in blocks)
    keyed = {(rays[i].describe(), rays[j].describe()): v for (i, j), v in verdict.items()}
    params = dict(params, r=list(rs))
    return Classification(name, classes, frozenset(order), params, keyed, flags)


def classify(rays, M, rs, N, base=None, workers=1):
    rs = [rs] if isinstance(rs, int) else list(rs)
    return classify_with(relate_leq, "boundary", rays, rs,
                         {"M": M, "N": N}, workers=workers, M=M, N=N, base=base)


def audit_no_3_chain(classification):
    """No strict chain a < b < c, and strict pairs respect ray/anti-ray content."""
    report = AuditReport("no-long-chains")
    order = classification.order
    classes = classification.classes
    k = len(classes)
    for a, b in sorted(order):
        report.checked += 1
        lo, hi = classes[a], classes[b]
        ok = (not lo.has_ray and not hi.has_anti_ray) or (not lo.has_anti_ray and not hi.has_ray)
        if not ok:
            report.violations.append({"kind": "content", "lower": lo.label, "upper": hi.label})
        for c in range(k):
            if (b, c) in order and c not in (a, b):
                report.violations.append(
                    {"kind": "chain", "chain": [lo.label, hi.label, classes[c].label]})
    report.extremal = {"classes": k, "strictPairs": len(order)}
    return report


# -- geodesic rays -------------------------------------------------------

@dataclass
class GeodesicRayCheck:
    geodesic: bool
    certified: bool
    radius: int
    witness: tuple = None

    def to_json(self):
        return {"geodesic": self.geodesic, "certified": self.certified, "radius": self.radius,
                "witness": list(self.witness) if self.witness else None}


def is_geodesic_ray(ray, horizon, N=None, max_radius=None):
    """Whether R(0..horizon) is a geodesic.

    A shortcut found in a truncation is a shortcut in the full digraph, so
    ``False`` is always certain. ``True`` is certified by growing the
    truncation until no shorter path could have escaped it.
    """
    N = N if N is not None else horizon + len(ray.prefix) + 2
    max_radius = max_radius if max_radius is not None else 4 * horizon + 16
    while True:
        try:
            trunc = truncate(ray.family, N)
            seq = materialize_in(trunc, ray, horizon)
        except ExpansionNeeded as exc:
            if exc.required_radius > max_radius:
                raise
            N = exc.required_radius
            continue
        walk = seq if ray.is_ray else tuple(reversed(seq))
        g = trunc.graph
        ids = [g.vid(v) for v in walk]
        for a in range(len(ids)):
            row = g.dist_row(ids[a])
            for b in range(a + 1, len(ids)):
                d = row[ids[b]]
                if 0 <= d < b - a:
                    return GeodesicRayCheck(False, True, N, walk[a:b + 1])
        bound = trunc.bounded_dist(walk[0], walk[-1])
        if bound.exact:
            return GeodesicRayCheck(True, True, N)
        need = trunc.required_radius(walk[0], walk[-1], horizon - 1)
        if need > max_radius:
            return GeodesicRayCheck(True, False, N)
        N = max(need, N + 1)


@dataclass
class Extraction:
    walk: tuple
    corridor: object
    targets: int

    def to_json(self):
        return {"walk": list(self.walk),
                "corridor": "inf" if self.corridor is INF else self.corridor,
                "targets": self.targets}


def _reverse(g):
    return Digraph(g.vertices, [(v, u) for u, v in g.edge_ids])


def extract_geodesic_ray(q, base, N):
    """Geodesic (anti-)ray from ``base`` towards a quasi-geodesic ``q``.

    Take geodesics from the base to the vertices of q and repeatedly follow
    the edge used by the most of them (least id on ties).
    """
    trunc = truncate(q.family, N)
    if base not in trunc:
        raise DomainError(f"base {base!r} is not in the truncation")
    seq = materialize_in(trunc, q)
    g = trunc.graph if q.is_ray else _reverse(trunc.graph)
    b = g.vid(base)
    row = g.dist_row(b)
    targets = []
    for v in seq:
        pair = (base, v) if q.is_ray else (v, base)
        bd = trunc.bounded_dist(*pair)
        if bd.exact and bd.value is not INF:
            targets.append(g.vid(v))
    walk = [b]
    live = list(targets)
    while True:
        cur = walk[-1]
        live = [t for t in live if t != cur]
        if not live:
            break
        best, best_hits = None, []
        for w in g.out_ids(cur):
            if row[w] != row[cur] + 1:
                continue
            col_hits = [t for t in live if g.dist_row(w)[t] >= 0
                        and row[w] + g.dist_row(w)[t] == row[t]]
            if len(col_hits) > len(best_hits):
                best, best_hits = w, col_hits
        if best is None:
            break
        walk.append(best)
        live = best_hits
    names = tuple(trunc.graph.name(k) for k in walk)
    D = trunc.graph.distance_matrix() if trunc.graph.n <= 3000 else None
    corridor = _corridor(trunc.graph, names, seq, D)
    return Extraction(names, corridor, len(targets))


def _corridor(g, walk, other, D=None):
    oi = [g.vid(v) for v in other]
    worst = 0
    for v in walk:
        i = g.vid(v)
        into = np.asarray(g.dist_col(i))[oi]
        out = np.asarray(g.dist_row(i))[oi]
        if not (into >= 0).any() or not (out >= 0).any():
            return INF
        worst = max(worst, int(into[into >= 0].min()), int(out[out >= 0].min()))
    return worst


def tail_within(trunc, r1, r2, radius):
    """Largest k such that R2(k..end) lies in the out-ball of ``radius``
    around the materialized R1; returns (k, length of R2 prefix)."""
    s1 = materialize_in(trunc, r1)
    s2 = materialize_in(trunc, r2)
    near = ball(trunc.graph, list(s1), radius, Side.OUT)
    k = len(s2)
    while k > 0 and s2[k - 1] in near:
        k -= 1
    return k, len(s2)
