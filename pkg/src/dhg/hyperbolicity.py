"""Thin triangles, the hyperbolicity constant and ball-diameter profiles.

For a finite digraph the worst triangle over all geodesic side choices is
found without enumerating geodesics: the choice of the first side only
matters through which vertex of it is examined (any vertex of any geodesic
interval), and the other two sides enter through a bottleneck value
``max over geodesics Q of min_{q in Q} d(q, p)`` that a dynamic program
over the geodesic DAG computes for all p at once.
"""
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .audit import AuditReport
from .digraph import Side
from .errors import CapacityError, DomainError, ParameterError
from .extdist import INF
from .geodesics import check_walk, first_geodesic, interval, is_geodesic

__all__ = [
    "TriangleInstance", "thinness_of_triangle", "Sampled", "DeltaResult", "delta_of",
    "BProfile", "b_profile", "DerivedConstants", "derive_constants",
    "audit_triangle_sides", "audit_transitive_cover", "MAX_EXACT_VERTICES",
]

MAX_EXACT_VERTICES = 320
BIG = kernels.BIG


@dataclass(frozen=True)
class TriangleInstance:
    """Sides of a geodesic triangle; ``p`` is the side being tested."""
    p: tuple
    q: tuple
    r: tuple

    def to_json(self):
        return {"p": list(self.p), "q": list(self.q), "r": list(self.r)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["p"]), tuple(data["q"]), tuple(data["r"]))


def _third_point(side, shared):
    if side[0] == shared:
        return side[-1]
    if side[-1] == shared:
        return side[0]
    return None


def thinness_of_triangle(g, tri):
    """Smallest delta for which this particular triangle is delta-thin."""
    p, q, r = (check_walk(g, s) for s in (tri.p, tri.q, tri.r))
    for side in (p, q, r):
        if not is_geodesic(g, side):
            raise DomainError(f"side {list(side)} is not a geodesic")
    cq, cr = _third_point(q, p[0]), _third_point(r, p[-1])
    if cq is None or cr is None or cq != cr:
        raise DomainError("sides do not form a triangle with a qualifying orientation")
    D = g.distance_matrix()
    qi = [g.vid(v) for v in q]
    ri = [g.vid(v) for v in r]
    worst = 0
    for v in p:
        i = g.vid(v)
        a = D[qi, i]
        b = D[i, ri]
        a = int(a[a >= 0].min()) if (a >= 0).any() else BIG
        b = int(b[b >= 0].min()) if (b >= 0).any() else BIG
        worst = max(worst, min(a, b))
    return INF if worst >= BIG else worst


@dataclass(frozen=True)
class Sampled:
    seed: int
    samples: int


@dataclass
class DeltaResult:
    delta: int
    witness: TriangleInstance
    mode: str
    checked: int

    def to_json(self):
        return {
            "delta": self.delta,
            "witness": self.witness.to_json() if self.witness else None,
            "mode": self.mode,
            "checked": self.checked,
        }


def _tables(g):
    if g.n > MAX_EXACT_VERTICES:
        raise CapacityError(
            f"exact mode holds two n^3 tables; n={g.n} exceeds {MAX_EXACT_VERTICES}")
    D = g.distance_matrix()
    indptr, indices = g.csr()
    F, G = kernels.bottleneck_tables(D, indptr, indices)
    return D, F, G


def _bottleneck_path(g, a, b, weight):
    """An a -> b geodesic maximising min over its vertices of ``weight[id]``."""
    ia, ib = g.vid(a), g.vid(b)
    mask = interval(g, a, b)
    row = g.dist_row(ia)
    order = sorted(np.flatnonzero(mask), key=lambda k: (row[k], k))
    best = {}
    back = {}
    for v in order:
        if v == ia:
            best[v] = weight[v]
            continue
        preds = [u for u in g.in_ids(v) if u in best and row[u] == row[v] - 1]
        u = max(preds, key=lambda k: (best[k], -k))
        best[v] = min(weight[v], best[u])
        back[v] = u
    path = [ib]
    while path[-1] != ia:
        path.append(back[path[-1]])
    return tuple(g.name(k) for k in reversed(path))


def _weights_to(D, p):
    col = D[:, p]
    return np.where(col < 0, BIG, col)


def _weights_from(D, p):
    row = D[p]
    return np.where(row < 0, BIG, row)


def _witness(g, D, s, t, c, orient, p):
    S, T, C, Pn = (g.name(k) for k in (s, t, c, p))
    side_p = first_geodesic(g, S, Pn) + first_geodesic(g, Pn, T)[1:]
    qa, qb = (C, S) if orient >> 1 else (S, C)
    ra, rb = (C, T) if orient & 1 else (T, C)
    side_q = _bottleneck_path(g, qa, qb, _weights_to(D, p))
    side_r = _bottleneck_path(g, ra, rb, _weights_from(D, p))
    return TriangleInstance(side_p, side_q, side_r)


def _sampled_value(g, D, s, t, c, orient):
    """Exact worst thinness over geodesic choices for fixed endpoints."""
    inter = np.flatnonzero(interval(g, g.name(s), g.name(t)))
    qa, qb = (c, s) if orient >> 1 else (s, c)
    ra, rb = (c, t) if orient & 1 else (t, c)
    if D[qa, qb] < 0 or D[ra, rb] < 0:
        return None
    Wq = np.where(D < 0, BIG, D)          # Wq[q, p] = d(q, p)
    Wr = np.ascontiguousarray(Wq.T)       # Wr[q, p] = d(p, q)
    fq = _bottleneck_values(g, qa, qb, Wq)
    gr = _bottleneck_values(g, ra, rb, Wr)
    vals = np.minimum(fq[inter], gr[inter])
    k = int(np.argmax(vals))
    return int(vals[k]), int(inter[k])


def _bottleneck_values(g, a, b, W):
    mask = interval(g, g.name(a), g.name(b))
    row = g.dist_row(a)
    order = sorted(np.flatnonzero(mask), key=lambda k: (row[k], k))
    best = {}
    for v in order:
        if v == a:
            best[v] = W[v]
            continue
        preds = [best[u] for u in g.in_ids(v) if u in best and row[u] == row[v] - 1]
        best[v] = np.minimum(W[v], np.maximum.reduce(preds))
    return best[b]


def delta_of(g, mode="exact"):
    """Hyperbolicity constant of a finite digraph with a witness triangle.

    ``mode`` is ``"exact"`` or a :class:`Sampled`; sampled runs give a lower
    bound. Ties go to the lexicographically least (s, t, c, orientation, p).
    """
    if g.n == 0:
        raise DomainError("empty digraph")
    if mode == "exact":
        D, F, G = _tables(g)
        value, s, t, c, orient, p = kernels.delta_scan(D, F, G)
        checked = int((D >= 0).sum()) * g.n * 4
        return DeltaResult(int(value), _witness(g, D, s, t, c, orient, p), "exact", checked)
    if not isinstance(mode, Sampled):
        raise ParameterError(f"unknown mode {mode!r}")
    if mode.samples <= 0:
        raise ParameterError("samples must be positive")
    rng = random.Random(mode.seed)
    D = g.distance_matrix()
    pairs = np.argwhere(D >= 0)
    best = None
    checked = 0
    for _ in range(mode.samples):
        s, t = (int(x) for x in pairs[rng.randrange(len(pairs))])
        c = rng.randrange(g.n)
        orient = rng.randrange(4)
        got = _sampled_value(g, D, s, t, c, orient)
        if got is None:
            continue
        checked += 1
        key = (got[0], -s, -t, -c, -orient, -got[1])
        if best is None or key > best[0]:
            best = (key, (s, t, c, orient, got[1]))
    if best is None:
        s = int(pairs[0][0])
        return DeltaResult(0, _witness(g, D, s, s, s, 0, s), "sampled", 0)
    s, t, c, orient, p = best[1]
    return DeltaResult(best[0][0], _witness(g, D, s, t, c, orient, p), "sampled", checked)


@dataclass(frozen=True)
class BProfile:
    """values[r] = max finite d(y, z) over y, z in a common radius-r ball."""
    side: Side
    values: tuple

    @property
    def rmax(self):
        return len(self.values) - 1

    def __call__(self, r):
        k = math.floor(r)
        if k < 0:
            raise DomainError("negative radius")
        if k > self.rmax:
            raise ParameterError(f"profile computed up to {self.rmax}, asked for {r}")
        return self.values[k]

    def to_json(self):
        return {"side": self.side.value, "values": list(self.values)}


def b_profile(g, side, rmax):
    side = Side.parse(side)
    if rmax < 0:
        raise DomainError("rmax must be non-negative")
    D = g.distance_matrix()
    if side is Side.IN:
        D = np.ascontiguousarray(D.T)
    vals = kernels.b_profile(D, int(rmax))
    return BProfile(side, tuple(int(v) for v in vals))


@dataclass(frozen=True)
class DerivedConstants:
    """Constants built from delta and the ball profiles.

    ``f`` is the pointwise max of the out- and in-profiles, a function that
    bounds both kinds of balls at once.
    """
    delta: int
    out_profile: BProfile
    in_profile: BProfile

    def f(self, r):
        return max(self.out_profile(r), self.in_profile(r))

    @property
    def kappa(self):
        """Radius around the two legs of a transitive triangle covering the third."""
        d = self.delta
        return 6 * d + 2 * d * self.f(d + 1)

    def K(self, M):
        d = self.delta
        return (2 * M + 5 * d) + (2 * M + 2 * d + 1) * self.f(d + 1)

    def eps_prime(self, eps):
        return math.exp(2 * eps * self.kappa)

    def max_admissible_eps(self):
        """Supremum of eps with eps_prime(eps) < sqrt 2 (inf when kappa = 0)."""
        return math.inf if self.kappa == 0 else math.log(2) / (4 * self.kappa)

    def default_eps(self):
        """Largest eps with eps_prime(eps) <= 1.4; 1 when kappa = 0."""
        return 1.0 if self.kappa == 0 else math.log(1.4) / (2 * self.kappa)

    def to_json(self):
        return {
            "delta": self.delta,
            "fAtDeltaPlus1": self.f(self.delta + 1),
            "kappa": self.kappa,
            "outProfile": list(self.out_profile.values),
            "inProfile": list(self.in_profile.values),
        }


def derive_constants(g, delta=None, rmax=None):
    if delta is None:
        delta = delta_of(g).delta
    if rmax is None:
        rmax = delta + 2
    return DerivedConstants(delta, b_profile(g, Side.OUT, rmax), b_profile(g, Side.IN, rmax))


def audit_triangle_sides(g, delta, out_profile, in_profile, eps=1):
    """Side-length bounds for thin triangles and for reverse distances.

    (i) eps * |P| <= |Q| f(delta+eps) + |R| g(delta+eps) for every
    qualifying triangle, and (ii) the two reverse-distance bounds for every
    pair with both distances finite. f, g are the out- and in-profiles.
    """
    eps = Fraction(eps) if not isinstance(eps, Fraction) else eps
    if eps <= 0:
        raise ParameterError("eps must be positive")
    f1, g1 = out_profile(delta + eps), in_profile(delta + eps)
    f0, g0 = out_profile(delta), in_profile(delta)
    D = g.distance_matrix().astype(np.int64)
    fin = D >= 0
    n = g.n
    num, den = eps.numerator, eps.denominator
    report = AuditReport("triangle-side-bounds")
    worst = None
    floor = np.iinfo(np.int64).min
    for o in range(4):
        lq, vq = (D.T, fin.T) if o >> 1 else (D, fin)
        lr, vr = (D.T, fin.T) if o & 1 else (D, fin)
        for s in range(n):
            # [t, c] arrays: |Q| depends on c only, |R| on (t, c)
            valid = fin[s][:, None] & vq[s][None, :] & vr
            slack = num * D[s][:, None] - den * (lq[s][None, :] * f1 + lr * g1)
            slack = np.where(valid, slack, floor)
            report.checked += int(valid.sum())
            for t, c in np.argwhere(slack > 0)[:20]:
                report.violations.append({"part": "i", "s": g.name(s), "t": g.name(t),
                                          "c": g.name(c), "orientation": o})
            k = int(np.argmax(slack))
            if valid.any() and (worst is None or slack.flat[k] > worst[0]):
                t, c = divmod(k, n)
                worst = (int(slack.flat[k]), o, g.name(s), g.name(t), g.name(c))
    both = fin & fin.T
    lhs = num * D
    for label, a, b in (("ii-f", f1, g0), ("ii-g", g1, f0)):
        rhs = den * D.T * a + num * b
        bad = np.argwhere(both & (lhs > rhs))
        report.checked += int(both.sum())
        for x, y in bad[:20]:
            report.violations.append({"part": label, "x": g.name(x), "y": g.name(y)})
    if worst is not None:
        report.extremal = {"slack": str(Fraction(worst[0], den)), "orientation": worst[1],
                           "s": worst[2], "t": worst[3], "c": worst[4], "eps": str(eps)}
    return report


def audit_transitive_cover(g, delta, constants=None):
    """Third side of a transitive triangle stays within kappa of the other two."""
    D, F, G = _tables(g)
    if constants is None:
        constants = derive_constants(g, delta)
    kappa = constants.kappa
    value, a, b, c, p, side = kernels.cover_scan(D, F, G)
    report = AuditReport("transitive-triangle-cover")
    fin = D >= 0
    report.checked = int(sum(int((fin[a_] & fin[:, c_]).sum()) for a_, c_ in np.argwhere(fin)))
    if value < 0:
        return report
    report.extremal = {
        "radius": int(value), "kappa": kappa, "a": g.name(a), "b": g.name(b),
        "c": g.name(c), "p": g.name(p), "ball": "out" if side == 0 else "in",
    }
    if value > kappa:
        report.violations.append(dict(report.extremal))
    return report
