"""Pure-Python kernels. Semantics must stay bit-identical to ``_kernels.pyx``."""

from __future__ import annotations

import heapq

import numpy as np

EXHAUSTED = -1


def mobility_loop(home_xy, cell_xy, stat_xy, decay, radio, alpha, trip, sim_end, waits, us):
    """Event-driven SWIM loop over mobile nodes.

    ``decay`` is ``(M, L + 1)`` with the home column last. ``waits`` and ``us``
    are ``(M, K)`` per-node pre-drawn wait durations and destination uniforms.
    Returns ``(node, place, t_start, t_end, n_out)`` with ``place = -1`` meaning
    home, or ``n_out = EXHAUSTED`` when some node ran out of draws.
    """
    m, k_max = waits.shape
    n_cells = cell_xy.shape[0]
    home_col = n_cells
    cap = m * k_max + m
    out_node = np.empty(cap, dtype=np.int64)
    out_place = np.empty(cap, dtype=np.int64)
    out_t0 = np.empty(cap, dtype=np.float64)
    out_t1 = np.empty(cap, dtype=np.float64)
    n_out = 0

    seen = np.zeros((m, n_cells + 1), dtype=np.int64)
    seen_total = np.zeros(m, dtype=np.int64)
    pos = np.array(home_xy, dtype=np.float64).reshape(m, 2)
    present = np.ones(m, dtype=bool)
    place = np.full(m, home_col, dtype=np.int64)
    start = np.zeros(m, dtype=np.float64)
    kw = np.zeros(m, dtype=np.int64)
    kc = np.zeros(m, dtype=np.int64)
    sx = stat_xy[:, 0].copy()
    sy = stat_xy[:, 1].copy()
    heap = []

    def encounters(i):
        r2 = radio[i] * radio[i]
        dx = pos[:, 0] - pos[i, 0]
        dy = pos[:, 1] - pos[i, 1]
        hit = (dx * dx + dy * dy) <= r2
        hit &= present
        hit[i] = False
        dx = sx - pos[i, 0]
        dy = sy - pos[i, 1]
        return int(np.count_nonzero(hit)) + int(np.count_nonzero((dx * dx + dy * dy) <= r2))

    def arrive(i, t):
        c = place[i]
        enc = encounters(i)
        seen[i, c] += enc
        seen_total[i] += enc
        start[i] = t
        if kw[i] >= k_max:
            return False
        heapq.heappush(heap, (t + waits[i, kw[i]], i))
        kw[i] += 1
        return True

    for i in range(m):
        if not arrive(i, 0.0):
            return out_node, out_place, out_t0, out_t1, EXHAUSTED

    while heap:
        t, i = heap[0]
        if t >= sim_end:
            break
        heapq.heappop(heap)
        if present[i]:
            out_node[n_out] = i
            out_place[n_out] = place[i]
            out_t0[n_out] = start[i]
            out_t1[n_out] = t
            n_out += 1
            present[i] = False
            if kc[i] >= k_max:
                return out_node, out_place, out_t0, out_t1, EXHAUSTED
            u = us[i, kc[i]]
            kc[i] += 1
            dest = _choose(decay[i], seen[i], seen_total[i], place[i], alpha, u)
            place[i] = dest
            heapq.heappush(heap, (t + trip, i))
        else:
            c = place[i]
            if c == home_col:
                pos[i, 0] = home_xy[i, 0]
                pos[i, 1] = home_xy[i, 1]
            else:
                pos[i, 0] = cell_xy[c, 0]
                pos[i, 1] = cell_xy[c, 1]
            present[i] = True
            if not arrive(i, t):
                return out_node, out_place, out_t0, out_t1, EXHAUSTED

    for i in range(m):
        if present[i]:
            out_node[n_out] = i
            out_place[n_out] = place[i]
            out_t0[n_out] = start[i]
            out_t1[n_out] = sim_end
            n_out += 1
    out_place[:n_out][out_place[:n_out] == home_col] = -1
    return out_node, out_place, out_t0, out_t1, n_out


def _choose(decay_row, seen_row, total, current, alpha, u):
    w = alpha * decay_row + (1.0 - alpha) * (seen_row / (1.0 + total))
    w[current] = 0.0
    cum = np.cumsum(w)
    wsum = cum[-1]
    if wsum > 0.0:
        target = u * wsum
        idx = int(np.searchsorted(cum, target, side="right"))
        if idx >= len(cum):
            idx = int(np.flatnonzero(w > 0.0)[-1])
        return idx
    n = len(w) - 1
    j = int(u * n)
    if j >= n:
        j = n - 1
    return j if j < current else j + 1


def contact_sweep(node, x, y, t0, t1, radius):
    """All pairwise overlaps of presence intervals within range.

    Inputs are sorted by ``t0``. Returns ``(a, b, start, end)`` arrays with
    ``a < b`` and ``end > start``, unmerged, in sweep order.
    """
    n = len(node)
    a_out, b_out, s_out, e_out = [], [], [], []
    act = np.empty(0, dtype=np.int64)
    for k in range(n):
        tk = t0[k]
        if len(act):
            act = act[t1[act] > tk]
        if len(act):
            nk = node[k]
            cand = act[node[act] != nk]
            if len(cand):
                dx = x[cand] - x[k]
                dy = y[cand] - y[k]
                rmax = np.maximum(radius[node[cand]], radius[nk])
                hit = cand[(dx * dx + dy * dy) <= rmax * rmax]
                for j in hit.tolist():
                    e = t1[j] if t1[j] < t1[k] else t1[k]
                    if e > tk:
                        nj = node[j]
                        a_out.append(min(nj, nk))
                        b_out.append(max(nj, nk))
                        s_out.append(tk)
                        e_out.append(e)
        if t1[k] > tk:
            act = np.append(act, k)
    return (np.array(a_out, dtype=np.int64), np.array(b_out, dtype=np.int64),
            np.array(s_out, dtype=np.float64), np.array(e_out, dtype=np.float64))
