"""Visual pseudo-semimetric on vertices and boundary classes.

A working set mixes vertex names and rays (each ray stands for its class).
Between two points the base-point functional looks at geodesics from one
to the other and records how close they pass to a base vertex s, in the
symmetrised distance. For rays the limit along the ray is replaced by the
infimum over a window of indices ``[n0, N]``.

Two kinds of "infinite" are kept apart. If geodesics exist but never come
near s the functional is infinite and its exponential is 0. If no geodesic
exists at all the pair is disconnected and its exponential is +inf, so
chains cannot pass through it.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .audit import AuditReport
from .boundary import RayClass, avoided_region
from .digraph import independent_set_lower_bound
from .errors import DomainError, ParameterError
from .extdist import INF
from .families import truncate
from .geodesics import first_geodesic
from .rays import RaySpec, materialize_in

__all__ = [
    "check_base", "greedy_base", "WorkingSet", "RhoEstimate", "rho_s", "rho_eps",
    "rho_S_eps", "VisualMatrix", "visual_matrix", "chain_closure", "d_chain",
    "audit_quasi_ultrametric", "audit_visual_sandwich", "neighborhood",
    "audit_neighborhood_shrink", "rho_windows", "zero_trend", "TOL",
]

TOL = 1e-12
BIG = np.iinfo(np.int32).max


def _sym(D, s):
    a, b = D[s], D[:, s]
    a = np.where(a < 0, BIG, a)
    b = np.where(b < 0, BIG, b)
    return np.minimum(a, b)


def check_base(g, base, only=None):
    """Vertices (of ``only``, default all) with infinite symmetrised
    distance to every base member."""
    if not base:
        raise DomainError("base must be non-empty")
    D = g.distance_matrix()
    ids = [g.vid(s) for s in base]
    covered = np.zeros(g.n, dtype=bool)
    for s in ids:
        covered |= (D[s] >= 0) | (D[:, s] >= 0)
    if only is not None:
        mask = np.zeros(g.n, dtype=bool)
        mask[[g.vid(v) for v in only]] = True
        covered |= ~mask
    return [g.name(i) for i in np.flatnonzero(~covered)]


def interior(trunc):
    """Vertices at most half the radius out; their coverage by a base cannot
    be an artefact of the frontier for the families shipped here."""
    return [v for v, lev in trunc.level.items() if lev <= trunc.radius // 2]


def greedy_base(g):
    """A small base: repeatedly take the vertex covering most uncovered ones."""
    D = g.distance_matrix()
    reach = (D >= 0) | (D.T >= 0)
    uncovered = np.ones(g.n, dtype=bool)
    chosen = []
    while uncovered.any():
        gain = (reach & uncovered[None, :]).sum(axis=1)
        k = int(np.argmax(gain))
        chosen.append(g.name(k))
        uncovered &= ~reach[k]
    return tuple(chosen)


def _as_point(p):
    if isinstance(p, RayClass):
        return p.representative
    if isinstance(p, (str, RaySpec)):
        return p
    raise DomainError(f"not a working-set point: {p!r}")


def point_label(p):
    return p if isinstance(p, str) else f"class:{p.describe()}"


@dataclass
class WorkingSet:
    """Points plus the window ``[n0, N]`` of ray indices.

    The truncation radius defaults to 2N so that distances between window
    vertices and the base are not distorted by the frontier.
    """
    points: tuple
    trunc: object
    n0: int
    N: int

    @classmethod
    def build(cls, family, points, N, n0=None, radius=None):
        n0 = N // 2 if n0 is None else n0
        if not 0 <= n0 <= N:
            raise DomainError("need 0 <= n0 <= N")
        trunc = truncate(family, radius if radius is not None else 2 * N)
        return cls(tuple(_as_point(p) for p in points), trunc, n0, N)

    def with_window(self, n0, N):
        return WorkingSet(self.points, self.trunc, n0, N)

    @property
    def labels(self):
        return [point_label(p) for p in self.points]

    def ids(self, point):
        g = self.trunc.graph
        if isinstance(point, str):
            return [g.vid(point)]
        seq = materialize_in(self.trunc, point, self.N)
        return [g.vid(v) for v in seq[self.n0:]]


@dataclass
class RhoEstimate:
    value: object
    connected: bool
    kind: str
    window: tuple
    base: str
    witness: tuple = None

    def to_json(self):
        return {"value": "inf" if self.value is INF else self.value,
                "connected": self.connected, "kind": self.kind,
                "window": list(self.window), "base": self.base,
                "witness": list(self.witness) if self.witness else None}


def _rho_core(D, sym, sources, targets):
    best, arg = BIG, None
    connected = False
    for x in sources:
        for y in targets:
            total = D[x, y]
            if total < 0:
                continue
            connected = True
            mask = (D[x] >= 0) & (D[:, y] >= 0) & (D[x] + D[:, y] == total)
            vals = np.where(mask, sym, BIG)
            k = int(np.argmin(vals))
            if vals[k] < best:
                best, arg = int(vals[k]), (x, y, k)
    return best, arg, connected


def rho_s(s, a, b, ws):
    a, b = _as_point(a), _as_point(b)
    g = ws.trunc.graph
    D = g.distance_matrix()
    si = g.vid(s)
    best, arg, connected = _rho_core(D, _sym(D, si), ws.ids(a), ws.ids(b))
    kind = "exact" if isinstance(a, str) and isinstance(b, str) else "window"
    witness = None
    if arg is not None:
        x, y, k = (g.name(i) for i in arg)
        witness = first_geodesic(g, x, k) + first_geodesic(g, k, y)[1:]
    value = INF if best >= BIG else best
    return RhoEstimate(value, connected, kind, (ws.n0, ws.N), s, witness)


def _gate(constants, eps):
    if eps <= 0:
        raise ParameterError("eps must be positive")
    if constants.eps_prime(eps) >= math.sqrt(2):
        raise ParameterError(
            f"eps={eps} gives eps'={constants.eps_prime(eps):.6g} >= sqrt(2); "
            f"admissible eps < {constants.max_admissible_eps():.6g}")


def _exp(est, eps):
    if not est.connected:
        return math.inf
    if est.value is INF:
        return 0.0
    return math.exp(-eps * est.value)


def rho_eps(s, a, b, ws, eps, constants):
    _gate(constants, eps)
    return _exp(rho_s(s, a, b, ws), eps)


def rho_S_eps(S, a, b, ws, eps, constants):
    _gate(constants, eps)
    return max(_exp(rho_s(s, a, b, ws), eps) for s in S)


def chain_closure(rho):
    """All-pairs chain infimum over the points, zero diagonal."""
    d = np.array(rho, dtype=float)
    np.fill_diagonal(d, 0.0)
    for k in range(d.shape[0]):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


@dataclass
class VisualMatrix:
    labels: list
    rho: np.ndarray
    d: np.ndarray
    eps: float
    window: tuple
    base: tuple
    estimates: dict = field(default_factory=dict, repr=False)

    def index(self, label):
        return self.labels.index(label)

    def rho_at(self, a, b):
        return float(self.rho[self.index(a), self.index(b)])

    def d_at(self, a, b):
        return float(self.d[self.index(a), self.index(b)])

    def to_json(self):
        def enc(m):
            return [["inf" if math.isinf(v) else v for v in row] for row in m.tolist()]
        return {"points": list(self.labels), "rho_eps": enc(self.rho), "d": enc(self.d),
                "eps": self.eps, "window": list(self.window), "base": list(self.base)}


def visual_matrix(S, ws, eps, constants):
    _gate(constants, eps)
    S = tuple(S)
    missing = check_base(ws.trunc.graph, S, interior(ws.trunc))
    if missing:
        raise DomainError(f"{list(S)} is not a base of the truncation; e.g. {missing[0]!r} is uncovered")
    m = len(ws.points)
    rho = np.zeros((m, m))
    estimates = {}
    for i, a in enumerate(ws.points):
        for j, b in enumerate(ws.points):
            ests = [rho_s(s, a, b, ws) for s in S]
            vals = [_exp(e, eps) for e in ests]
            k = int(np.argmax(vals))
            rho[i, j] = vals[k]
            estimates[i, j] = ests[k]
    return VisualMatrix(ws.labels, rho, chain_closure(rho), float(eps), (ws.n0, ws.N), S, estimates)


def d_chain(S, ws, eps, constants):
    return visual_matrix(S, ws, eps, constants).d


def _le(a, b):
    if math.isinf(b):
        return True
    return a <= b * (1 + TOL) + TOL


def audit_quasi_ultrametric(rho, constants, eps, labels=None):
    """rho(a, b) <= eps' * max(rho(a, c), rho(c, b)) on every triple."""
    rho = np.asarray(rho, dtype=float)
    m = rho.shape[0]
    labels = labels or [str(i) for i in range(m)]
    ep = constants.eps_prime(eps)
    report = AuditReport("quasi-ultrametric")
    worst = None
    for i in range(m):
        for j in range(m):
            for k in range(m):
                report.checked += 1
                lhs = rho[i, j]
                rhs = ep * max(rho[i, k], rho[k, j])
                if not _le(lhs, rhs):
                    report.violations.append({"triple": [labels[i], labels[j], labels[k]],
                                              "lhs": lhs, "rhs": rhs})
                if rhs > 0 and not math.isinf(rhs) and not math.isinf(lhs):
                    ratio = lhs / rhs
                    if worst is None or ratio > worst[0]:
                        worst = (ratio, i, j, k)
    report.extremal = {"epsPrime": ep}
    if worst is not None:
        report.extremal.update(ratio=worst[0], triple=[labels[x] for x in worst[1:]])
    return report


def audit_visual_sandwich(d, rho, eps, constants, labels=None):
    """(3 - 2 eps') rho <= d <= rho off the diagonal; d = 0 on it."""
    _gate(constants, eps)
    d = np.asarray(d, dtype=float)
    rho = np.asarray(rho, dtype=float)
    m = d.shape[0]
    labels = labels or [str(i) for i in range(m)]
    factor = 3 - 2 * constants.eps_prime(eps)
    report = AuditReport("visual-sandwich")
    tightest = None
    for i in range(m):
        for j in range(m):
            report.checked += 1
            pair = [labels[i], labels[j]]
            if i == j:
                if d[i, j] != 0:
                    report.violations.append({"pair": pair, "kind": "diagonal", "d": d[i, j]})
                continue
            if not _le(d[i, j], rho[i, j]):
                report.violations.append({"pair": pair, "kind": "upper",
                                          "d": d[i, j], "rho": rho[i, j]})
            low = factor * rho[i, j]
            if math.isinf(low):
                ok = math.isinf(d[i, j])
            else:
                ok = _le(low, d[i, j])
            if not ok:
                report.violations.append({"pair": pair, "kind": "lower",
                                          "d": d[i, j], "rho": rho[i, j]})
            if rho[i, j] > 0 and not math.isinf(rho[i, j]):
                ratio = d[i, j] / rho[i, j]
                if tightest is None or ratio < tightest[0]:
                    tightest = (ratio, pair)
    report.extremal = {"factor": factor}
    if tightest is not None:
        report.extremal.update(minRatio=tightest[0], pair=tightest[1])
    return report


def rho_windows(S, a, b, ws, eps, constants, fractions=(4, 2, 4 / 3)):
    """rho_S^eps at n0 = N/4, N/2, 3N/4 and whether the last two agree."""
    vals = []
    for frac in fractions:
        w = ws.with_window(int(ws.N // frac), ws.N)
        vals.append(rho_S_eps(S, a, b, w, eps, constants))
    return vals, math.isclose(vals[-1], vals[-2], rel_tol=1e-12, abs_tol=TOL)


def zero_trend(values, threshold=1e-9):
    """Label a sequence of d values taken over growing windows."""
    dec = all(b < a for a, b in zip(values, values[1:]))
    if values and values[-1] < threshold and dec:
        return "zero-evidence"
    return "decreasing" if dec else "not-decreasing"


# -- neighbourhoods ------------------------------------------------------

def _pick(omega, want_ray):
    if isinstance(omega, RaySpec):
        if omega.is_ray != want_ray:
            raise DomainError("representative has the wrong direction for this side")
        return omega
    for m in omega.members:
        if m.is_ray == want_ray:
            return m
    raise DomainError("class has no representative of the required direction")


def neighborhood(trunc, omega, x, r, side, horizon=None, window=None):
    """Vertices joined to the tail of ``omega`` by geodesics avoiding both
    radius-r balls around x.

    ``minus`` needs a ray and y -> z geodesics; ``plus`` an anti-ray and
    z -> y geodesics. The tail is the last ``window + 1`` materialized
    vertices up to ``horizon`` (default: a quarter of them).
    """
    side = str(side).lower()
    if side not in ("minus", "plus"):
        raise DomainError("side must be 'minus' or 'plus'")
    rep = _pick(omega, side == "minus")
    seq = materialize_in(trunc, rep)
    if horizon is not None:
        if horizon >= len(seq):
            materialize_in(trunc, rep, horizon)
        seq = seq[: horizon + 1]
    H = len(seq) - 1
    window = max(1, H // 4) if window is None else window
    tail = seq[max(0, H - window):]
    blocked = avoided_region(trunc, [x], r) if r >= 0 else frozenset()
    g = trunc.graph
    sub = g.without(blocked)
    result = None
    for z in tail:
        if z in blocked:
            return frozenset()
        zg, zs = g.vid(z), sub.vid(z)
        if side == "minus":
            full, cut = g.dist_col(zg), sub.dist_col(zs)
        else:
            full, cut = g.dist_row(zg), sub.dist_row(zs)
        ok = set()
        for k, y in enumerate(sub.vertices):
            d = cut[k]
            if d >= 0 and d == full[g.vid(y)]:
                ok.add(y)
        result = ok if result is None else result & ok
    return frozenset(result or ())


def audit_neighborhood_shrink(trunc, omega, equivalents, x, r, kappa, side, window=None):
    """Tails of equivalent representatives inside C(r) stay inside C(r - kappa)."""
    report = AuditReport("neighbourhood-shrink")
    high = neighborhood(trunc, omega, x, r, side, window=window)
    low = neighborhood(trunc, omega, x, r - kappa, side, window=window)
    for q in equivalents:
        seq = materialize_in(trunc, q)
        tail = [v for v in seq if v in high]
        report.checked += len(tail)
        lost = [v for v in tail if v not in low]
        if lost:
            report.violations.append({"representative": q.describe(), "lost": lost})
    report.extremal = {"r": r, "kappa": kappa, "high": len(high), "low": len(low)}
    return report


def independence_evidence(g, S, radius):
    """Greedy independent-set sizes inside balls around the base members."""
    from .digraph import Side, ball
    out = {}
    for s in S:
        region = ball(g, s, radius, Side.OUT) | ball(g, s, radius, Side.IN)
        out[s] = independent_set_lower_bound(g, region)[0]
    return out
