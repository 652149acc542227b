# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Semantics must stay bit-identical to ``_fallback.py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

EXHAUSTED = -1


cdef inline Py_ssize_t _choose(const double[:] decay_row, const long long[:] seen_row,
                               long long total, Py_ssize_t current, double alpha,
                               double u, double[:] cum) noexcept nogil:
    cdef Py_ssize_t n = decay_row.shape[0]
    cdef Py_ssize_t c, last_pos = -1, j, ncand
    cdef double acc = 0.0, w, target
    cdef double denom = 1.0 + <double>total
    for c in range(n):
        if c == current:
            w = 0.0
        else:
            w = alpha * decay_row[c] + (1.0 - alpha) * (<double>seen_row[c] / denom)
        if w > 0.0:
            last_pos = c
        acc = acc + w
        cum[c] = acc
    if acc > 0.0:
        target = u * acc
        for c in range(n):
            if cum[c] > target:
                return c
        return last_pos
    ncand = n - 1
    j = <Py_ssize_t>(u * ncand)
    if j >= ncand:
        j = ncand - 1
    return j if j < current else j + 1


cdef inline long long _encounters(Py_ssize_t i, double[:, :] pos, const unsigned char[:] present,
                                  const double[:, :] stat_xy, double r2) noexcept nogil:
    cdef Py_ssize_t j
    cdef long long count = 0
    cdef double px = pos[i, 0], py = pos[i, 1], dx, dy
    for j in range(pos.shape[0]):
        if j == i or not present[j]:
            continue
        dx = pos[j, 0] - px
        dy = pos[j, 1] - py
        if dx * dx + dy * dy <= r2:
            count += 1
    for j in range(stat_xy.shape[0]):
        dx = stat_xy[j, 0] - px
        dy = stat_xy[j, 1] - py
        if dx * dx + dy * dy <= r2:
            count += 1
    return count


def mobility_loop(home_xy, cell_xy, stat_xy, decay, radio, double alpha, double trip,
                  double sim_end, waits, us):
    cdef const double[:, :] home = np.ascontiguousarray(home_xy, dtype=np.float64).reshape(-1, 2)
    cdef const double[:, :] cells = np.ascontiguousarray(cell_xy, dtype=np.float64).reshape(-1, 2)
    cdef const double[:, :] stat = np.ascontiguousarray(stat_xy, dtype=np.float64).reshape(-1, 2)
    cdef const double[:, :] dec = np.ascontiguousarray(decay, dtype=np.float64)
    cdef const double[:] rad = np.ascontiguousarray(radio, dtype=np.float64)
    cdef const double[:, :] wv = np.ascontiguousarray(waits, dtype=np.float64)
    cdef const double[:, :] uv = np.ascontiguousarray(us, dtype=np.float64)
    cdef Py_ssize_t m = wv.shape[0], k_max = wv.shape[1]
    cdef Py_ssize_t n_cells = cells.shape[0], home_col = n_cells
    cdef Py_ssize_t cap = m * k_max + m

    out_node_a = np.empty(cap, dtype=np.int64)
    out_place_a = np.empty(cap, dtype=np.int64)
    out_t0_a = np.empty(cap, dtype=np.float64)
    out_t1_a = np.empty(cap, dtype=np.float64)
    cdef long long[:] out_node = out_node_a
    cdef long long[:] out_place = out_place_a
    cdef double[:] out_t0 = out_t0_a
    cdef double[:] out_t1 = out_t1_a

    seen_a = np.zeros((m, n_cells + 1), dtype=np.int64)
    cdef long long[:, :] seen = seen_a
    cdef long long[:] seen_total = np.zeros(m, dtype=np.int64)
    cdef double[:, :] pos = np.array(home, dtype=np.float64).reshape(m, 2)
    cdef unsigned char[:] present = np.ones(m, dtype=np.uint8)
    cdef long long[:] place = np.full(m, home_col, dtype=np.int64)
    cdef double[:] start = np.zeros(m, dtype=np.float64)
    cdef double[:] next_t = np.full(m, np.inf, dtype=np.float64)
    cdef long long[:] kw = np.zeros(m, dtype=np.int64)
    cdef long long[:] kc = np.zeros(m, dtype=np.int64)
    cdef double[:] cum = np.empty(n_cells + 1, dtype=np.float64)

    cdef Py_ssize_t n_out = 0, i, j, c
    cdef long long enc
    cdef double t, r2
    cdef bint exhausted = False

    with nogil:
        for i in range(m):
            r2 = rad[i] * rad[i]
            enc = _encounters(i, pos, present, stat, r2)
            seen[i, home_col] += enc
            seen_total[i] += enc
            start[i] = 0.0
            if kw[i] >= k_max:
                exhausted = True
                break
            next_t[i] = 0.0 + wv[i, kw[i]]
            kw[i] += 1

        while not exhausted and m > 0:
            i = 0
            for j in range(1, m):
                if next_t[j] < next_t[i]:
                    i = j
            t = next_t[i]
            if t >= sim_end:
                break
            if present[i]:
                out_node[n_out] = i
                out_place[n_out] = place[i]
                out_t0[n_out] = start[i]
                out_t1[n_out] = t
                n_out += 1
                present[i] = 0
                if kc[i] >= k_max:
                    exhausted = True
                    break
                c = _choose(dec[i], seen[i], seen_total[i], place[i], alpha, uv[i, kc[i]], cum)
                kc[i] += 1
                place[i] = c
                next_t[i] = t + trip
            else:
                c = place[i]
                if c == home_col:
                    pos[i, 0] = home[i, 0]
                    pos[i, 1] = home[i, 1]
                else:
                    pos[i, 0] = cells[c, 0]
                    pos[i, 1] = cells[c, 1]
                present[i] = 1
                r2 = rad[i] * rad[i]
                enc = _encounters(i, pos, present, stat, r2)
                seen[i, c] += enc
                seen_total[i] += enc
                start[i] = t
                if kw[i] >= k_max:
                    exhausted = True
                    break
                next_t[i] = t + wv[i, kw[i]]
                kw[i] += 1

        if not exhausted:
            for i in range(m):
                if present[i]:
                    out_node[n_out] = i
                    out_place[n_out] = place[i]
                    out_t0[n_out] = start[i]
                    out_t1[n_out] = sim_end
                    n_out += 1
            for j in range(n_out):
                if out_place[j] == home_col:
                    out_place[j] = -1

    if exhausted:
        return out_node_a, out_place_a, out_t0_a, out_t1_a, EXHAUSTED
    return out_node_a, out_place_a, out_t0_a, out_t1_a, n_out


def contact_sweep(node, x, y, t0, t1, radius):
    cdef const long long[:] nd = np.ascontiguousarray(node, dtype=np.int64)
    cdef const double[:] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[:] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef const double[:] s = np.ascontiguousarray(t0, dtype=np.float64)
    cdef const double[:] e = np.ascontiguousarray(t1, dtype=np.float64)
    cdef const double[:] rad = np.ascontiguousarray(radius, dtype=np.float64)
    cdef Py_ssize_t n = nd.shape[0]
    cdef long long[:] act = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t n_act = 0, k, q, w, j, n_out = 0, cap = max(4 * n, 16)
    cdef double tk, dx, dy, rmax, end
    cdef long long nk, nj

    a_a = np.empty(cap, dtype=np.int64)
    b_a = np.empty(cap, dtype=np.int64)
    s_a = np.empty(cap, dtype=np.float64)
    e_a = np.empty(cap, dtype=np.float64)
    cdef long long[:] ao = a_a
    cdef long long[:] bo = b_a
    cdef double[:] so = s_a
    cdef double[:] eo = e_a

    for k in range(n):
        tk = s[k]
        nk = nd[k]
        w = 0
        for q in range(n_act):
            if e[act[q]] > tk:
                act[w] = act[q]
                w += 1
        n_act = w
        for q in range(n_act):
            j = act[q]
            nj = nd[j]
            if nj == nk:
                continue
            dx = xv[j] - xv[k]
            dy = yv[j] - yv[k]
            rmax = rad[nj] if rad[nj] > rad[nk] else rad[nk]
            if dx * dx + dy * dy <= rmax * rmax:
                end = e[j] if e[j] < e[k] else e[k]
                if end > tk:
                    if n_out == cap:
                        cap *= 2
                        a_a = np.resize(a_a, cap); ao = a_a
                        b_a = np.resize(b_a, cap); bo = b_a
                        s_a = np.resize(s_a, cap); so = s_a
                        e_a = np.resize(e_a, cap); eo = e_a
                    ao[n_out] = nj if nj < nk else nk
                    bo[n_out] = nk if nj < nk else nj
                    so[n_out] = tk
                    eo[n_out] = end
                    n_out += 1
        if e[k] > tk:
            act[n_act] = k
            n_act += 1
    return a_a[:n_out].copy(), b_a[:n_out].copy(), s_a[:n_out].copy(), e_a[:n_out].copy()
