"""Pure Python (numpy) versions of the hot loops.

Every function here has a twin with the same signature in ``_kernels.pyx``.
Distances come in as an ``int32`` matrix with -1 marking unreachable pairs.
Bottleneck tables use ``BIG`` for "no finite value".
"""
from collections import deque

import numpy as np

BIG = 32767


def apsp(indptr, indices, n):
    dist = np.full((n, n), -1, dtype=np.int32)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if row[v] < 0:
                    row[v] = du
                    queue.append(v)
    return dist


def _weights(dist):
    return np.where(dist < 0, BIG, dist).astype(np.int16)


def bottleneck_tables(dist, indptr, indices):
    """For every geodesic a -> b and vertex p, the best achievable bottleneck.

    ``F[a, b, p]`` is the max over a->b geodesics Q of min_{q in Q} d(q, p);
    ``G[a, b, p]`` is the same with d(p, q).
    """
    n = dist.shape[0]
    w_from = _weights(dist)
    w_to = np.ascontiguousarray(w_from.T)
    F = np.full((n, n, n), BIG, dtype=np.int16)
    G = np.full((n, n, n), BIG, dtype=np.int16)
    for a in range(n):
        row = dist[a]
        reach = np.flatnonzero(row >= 0)
        order = reach[np.argsort(row[reach], kind="stable")]
        acc_f = np.full((n, n), -1, dtype=np.int16)
        acc_g = np.full((n, n), -1, dtype=np.int16)
        for v in order:
            if v == a:
                bf, bg = w_from[v], w_to[v]
            else:
                bf = np.minimum(w_from[v], acc_f[v])
                bg = np.minimum(w_to[v], acc_g[v])
            F[a, v] = bf
            G[a, v] = bg
            nxt = row[v] + 1
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if row[u] == nxt:
                    np.maximum(acc_f[u], bf, out=acc_f[u])
                    np.maximum(acc_g[u], bg, out=acc_g[u])
    return F, G


def _interval(dist, fin, s, t):
    total = dist[s, t]
    return np.flatnonzero(fin[s] & fin[:, t] & (dist[s] + dist[:, t] == total))


def delta_scan(dist, F, G):
    """Largest thinness over all qualifying triangles.

    Returns ``(value, s, t, c, orientation, p)`` for the first maximiser in
    lexicographic order, or ``(-1, ...)`` for the empty graph. Orientation
    bit 1 set means the side at ``s`` runs c -> s, bit 0 set means the side
    at ``t`` runs c -> t.
    """
    n = dist.shape[0]
    fin = dist >= 0
    best = -1
    witness = (-1, -1, -1, -1, -1)
    for s in range(n):
        for t in range(n):
            if not fin[s, t]:
                continue
            inter = _interval(dist, fin, s, t)
            sides_q = ((F[s][:, inter], fin[s]), (F[:, s][:, inter], fin[:, s]))
            sides_r = ((G[t][:, inter], fin[t]), (G[:, t][:, inter], fin[:, t]))
            vals = np.full((n, 4), -1, dtype=np.int32)
            for o in range(4):
                q, vq = sides_q[o >> 1]
                r, vr = sides_r[o & 1]
                m = np.minimum(q, r).max(axis=1)
                vals[:, o] = np.where(vq & vr, m, -1)
            top = int(vals.max())
            if top > best:
                c, o = divmod(int(np.argmax(vals)), 4)
                q = sides_q[o >> 1][0][c]
                r = sides_r[o & 1][0][c]
                p = int(inter[int(np.argmax(np.minimum(q, r)))])
                best = top
                witness = (s, t, c, o, p)
    return (best,) + witness


def b_profile(dist, rmax):
    """prof[r] = max finite d(y, z) over y, z in a common radius-r ball.

    Balls are taken along rows, so pass ``dist`` for out-balls and its
    transpose for in-balls.
    """
    n = dist.shape[0]
    prof = np.full(rmax + 1, -1, dtype=np.int64)
    fin = dist >= 0
    for x in range(n):
        ball = np.flatnonzero(fin[x] & (dist[x] <= rmax))
        dx = dist[x, ball]
        key = np.maximum.outer(dx, dx)
        sub = dist[np.ix_(ball, ball)]
        ok = sub >= 0
        np.maximum.at(prof, key[ok], sub[ok])
    return np.maximum.accumulate(prof)


def cover_scan(dist, F, G):
    """Worst covering radius of R by the balls around P and Q.

    Ranges over a -> b -> c with all three distances finite and p on an
    a -> c geodesic. Returns ``(value, a, b, c, p, side)`` where side 0 is
    the out-ball and 1 the in-ball, first maximiser in (a, c, b, side, p)
    order.
    """
    n = dist.shape[0]
    fin = dist >= 0
    best = -1
    witness = (-1, -1, -1, -1, -1)
    for a in range(n):
        for c in range(n):
            if not fin[a, c]:
                continue
            inter = _interval(dist, fin, a, c)
            mids = np.flatnonzero(fin[a] & fin[:, c])
            out = np.minimum(F[a][mids][:, inter], F[mids, c][:, inter])
            inn = np.minimum(G[a][mids][:, inter], G[mids, c][:, inter])
            stack = np.stack([out, inn], axis=1)
            top = int(stack.max())
            if top > best:
                k = int(np.argmax(stack))
                bi, rest = divmod(k, 2 * len(inter))
                side, pi = divmod(rest, len(inter))
                best = top
                witness = (a, int(mids[bi]), c, int(inter[pi]), side)
    return (best,) + witness
