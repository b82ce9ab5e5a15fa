# Compiled twins of the functions in _kernels_py.py. Same signatures,
# same tie-breaking, same sentinels.
import numpy as np

cdef int BIG_C = 32767
BIG = BIG_C


def apsp(const int[:] indptr, const int[:] indices, int n):
    out = np.full((n, n), -1, dtype=np.int32)
    cdef int[:, :] dist = out
    cdef int[:] queue = np.empty(max(n, 1), dtype=np.int32)
    cdef int s, u, v, k, head, tail, du
    for s in range(n):
        dist[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[s, u] + 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[s, v] < 0:
                    dist[s, v] = du
                    queue[tail] = v
                    tail += 1
    return out


def bottleneck_tables(const int[:, :] dist, const int[:] indptr, const int[:] indices):
    cdef int n = dist.shape[0]
    F_arr = np.full((n, n, n), BIG_C, dtype=np.int16)
    G_arr = np.full((n, n, n), BIG_C, dtype=np.int16)
    acc_f_arr = np.empty((n, n), dtype=np.int16)
    acc_g_arr = np.empty((n, n), dtype=np.int16)
    order_arr = np.empty(max(n, 1), dtype=np.int32)
    cdef short[:, :, :] F = F_arr
    cdef short[:, :, :] G = G_arr
    cdef short[:, :] acc_f = acc_f_arr
    cdef short[:, :] acc_g = acc_g_arr
    cdef int[:] order = order_arr
    cdef int a, v, u, k, p, j, cnt, nxt, level, maxd
    cdef short wf, wg, bf, bg
    for a in range(n):
        acc_f[:, :] = -1
        acc_g[:, :] = -1
        # bucket vertices by distance from a, ties by id
        maxd = -1
        for v in range(n):
            if dist[a, v] > maxd:
                maxd = dist[a, v]
        cnt = 0
        for level in range(maxd + 1):
            for v in range(n):
                if dist[a, v] == level:
                    order[cnt] = v
                    cnt += 1
        for j in range(cnt):
            v = order[j]
            for p in range(n):
                wf = BIG_C if dist[v, p] < 0 else <short>dist[v, p]
                wg = BIG_C if dist[p, v] < 0 else <short>dist[p, v]
                if v == a:
                    bf = wf
                    bg = wg
                else:
                    bf = wf if wf < acc_f[v, p] else acc_f[v, p]
                    bg = wg if wg < acc_g[v, p] else acc_g[v, p]
                F[a, v, p] = bf
                G[a, v, p] = bg
            nxt = dist[a, v] + 1
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if dist[a, u] == nxt:
                    for p in range(n):
                        if F[a, v, p] > acc_f[u, p]:
                            acc_f[u, p] = F[a, v, p]
                        if G[a, v, p] > acc_g[u, p]:
                            acc_g[u, p] = G[a, v, p]
    return F_arr, G_arr


def delta_scan(const int[:, :] dist, const short[:, :, :] F, const short[:, :, :] G):
    cdef int n = dist.shape[0]
    cdef int s, t, c, o, p, k, m, total
    cdef int best = -1
    cdef int bs = -1, bt = -1, bc = -1, bo = -1, bp = -1
    cdef short q, r, v, local
    cdef int localp
    inter_arr = np.empty(max(n, 1), dtype=np.int32)
    cdef int[:] inter = inter_arr
    for s in range(n):
        for t in range(n):
            total = dist[s, t]
            if total < 0:
                continue
            m = 0
            for p in range(n):
                if dist[s, p] >= 0 and dist[p, t] >= 0 and dist[s, p] + dist[p, t] == total:
                    inter[m] = p
                    m += 1
            for c in range(n):
                for o in range(4):
                    if o >> 1:
                        if dist[c, s] < 0:
                            continue
                    elif dist[s, c] < 0:
                        continue
                    if o & 1:
                        if dist[c, t] < 0:
                            continue
                    elif dist[t, c] < 0:
                        continue
                    local = -1
                    localp = -1
                    for k in range(m):
                        p = inter[k]
                        q = F[c, s, p] if o >> 1 else F[s, c, p]
                        r = G[c, t, p] if o & 1 else G[t, c, p]
                        v = q if q < r else r
                        if v > local:
                            local = v
                            localp = p
                    if local > best:
                        best = local
                        bs, bt, bc, bo, bp = s, t, c, o, localp
    return best, bs, bt, bc, bo, bp


def b_profile(const int[:, :] dist, int rmax):
    cdef int n = dist.shape[0]
    prof_arr = np.full(rmax + 1, -1, dtype=np.int64)
    cdef long long[:] prof = prof_arr
    cdef int x, y, z, key, d
    for x in range(n):
        for y in range(n):
            if dist[x, y] < 0 or dist[x, y] > rmax:
                continue
            for z in range(n):
                if dist[x, z] < 0 or dist[x, z] > rmax:
                    continue
                d = dist[y, z]
                if d < 0:
                    continue
                key = dist[x, y] if dist[x, y] > dist[x, z] else dist[x, z]
                if d > prof[key]:
                    prof[key] = d
    for key in range(1, rmax + 1):
        if prof[key - 1] > prof[key]:
            prof[key] = prof[key - 1]
    return prof_arr


def cover_scan(const int[:, :] dist, const short[:, :, :] F, const short[:, :, :] G):
    cdef int n = dist.shape[0]
    cdef int a, b, c, p, k, m, side, total
    cdef int best = -1
    cdef int wa = -1, wb = -1, wc = -1, wp = -1, wside = -1
    cdef short x, y, v
    inter_arr = np.empty(max(n, 1), dtype=np.int32)
    cdef int[:] inter = inter_arr
    for a in range(n):
        for c in range(n):
            total = dist[a, c]
            if total < 0:
                continue
            m = 0
            for p in range(n):
                if dist[a, p] >= 0 and dist[p, c] >= 0 and dist[a, p] + dist[p, c] == total:
                    inter[m] = p
                    m += 1
            for b in range(n):
                if dist[a, b] < 0 or dist[b, c] < 0:
                    continue
                for side in range(2):
                    for k in range(m):
                        p = inter[k]
                        if side == 0:
                            x = F[a, b, p]
                            y = F[b, c, p]
                        else:
                            x = G[a, b, p]
                            y = G[b, c, p]
                        v = x if x < y else y
                        if v > best:
                            best = v
                            wa, wb, wc, wp, wside = a, b, c, p, side
    return best, wa, wb, wc, wp, wside
