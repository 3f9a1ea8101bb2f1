"""Compiled inner loops for the permutation searches.

Graphs arrive as ``(rows, dense, indptr, indices)``: packed uint64 bit rows
(only meaningful when ``dense``) and a CSR neighbor structure with sorted
neighbor lists.  Edge membership uses the bit rows when available and a
binary search in the CSR lists otherwise.
"""

import math

import numpy as np
from numba import njit

_ONE = np.uint64(1)


@njit(cache=True, inline="always")
def has_edge(rows, dense, indptr, indices, a, b):
    if dense:
        return (rows[a, b >> 6] >> np.uint64(b & 63)) & _ONE != 0
    lo = indptr[a]
    hi = indptr[a + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        x = indices[mid]
        if x < b:
            lo = mid + 1
        elif x > b:
            hi = mid
        else:
            return True
    return False


@njit(cache=True)
def lost_edges_batch(rows, dense, indptr, indices, n, moved, images):
    """Edges sent to non-edges, for each row of (moved, images)."""
    count = moved.shape[0]
    k = moved.shape[1]
    out = np.zeros(count, dtype=np.int64)
    img = np.arange(n)
    for s in range(count):
        for j in range(k):
            img[moved[s, j]] = images[s, j]
        lost = 0
        for j in range(k):
            u = moved[s, j]
            a = img[u]
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if img[v] != v and v < u:
                    continue  # both ends moved: counted from v
                if not has_edge(rows, dense, indptr, indices, a, img[v]):
                    lost += 1
        out[s] = lost
        for j in range(k):
            img[moved[s, j]] = moved[s, j]
    return out


@njit(cache=True)
def exact_min(rows, dense, indptr, indices, n, k, bound):
    """Minimum lost-edge count over all k-permutations, below ``bound``.

    Moved sets run in lexicographic order and derangements of each set in
    lexicographic image order, built position by position.  A partial
    assignment whose already-determined lost edges reach the best value so
    far is cut, which keeps the first minimizer in enumeration order.
    Returns ``(best, moved, images)``; ``best == bound`` means nothing
    below ``bound`` exists.
    """
    best = bound
    best_sub = np.zeros(k, dtype=np.int64)
    best_img = np.zeros(k, dtype=np.int64)
    c = np.arange(k)
    pos = -np.ones(n, dtype=np.int64)
    images = np.zeros(k, dtype=np.int64)
    used = np.zeros(k, dtype=np.bool_)
    cand = np.zeros(k + 1, dtype=np.int64)
    partial = np.zeros(k + 1, dtype=np.int64)
    while True:
        for i in range(k):
            pos[c[i]] = i
        i = 0
        cand[0] = 0
        while True:
            if i == k:
                if partial[k] < best:
                    best = partial[k]
                    for j in range(k):
                        best_sub[j] = c[j]
                        best_img[j] = c[images[j]]
                    if best == 0:
                        return best, best_sub, best_img
                i -= 1
                used[images[i]] = False
                continue
            x = cand[i]
            found = -1
            if i == k - 2 and not used[k - 1]:
                if x <= k - 1:
                    found = k - 1
            else:
                while x < k:
                    if not used[x] and x != i:
                        found = x
                        break
                    x += 1
            if found < 0:
                if i == 0:
                    break
                i -= 1
                used[images[i]] = False
                continue
            cand[i] = found + 1
            u = c[i]
            a = c[found]
            add = 0
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                pv = pos[v]
                if pv < 0:
                    if not has_edge(rows, dense, indptr, indices, a, v):
                        add += 1
                elif pv < i:
                    if not has_edge(rows, dense, indptr, indices, a, c[images[pv]]):
                        add += 1
            if partial[i] + add >= best:
                continue
            images[i] = found
            used[found] = True
            partial[i + 1] = partial[i] + add
            i += 1
            cand[i] = 0
        for i in range(k):
            pos[c[i]] = -1
        # next combination in lexicographic order
        j = k - 1
        while j >= 0 and c[j] == n - k + j:
            j -= 1
        if j < 0:
            break
        c[j] += 1
        for t in range(j + 1, k):
            c[t] = c[t - 1] + 1
    return best, best_sub, best_img


@njit(cache=True)
def _lost_incident(rows, dense, indptr, indices, mapping, verts, nv, marker):
    lost = 0
    for t in range(nv):
        marker[verts[t]] = t + 1
    for t in range(nv):
        u = verts[t]
        a = mapping[u]
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if 0 < marker[v] <= t:
                continue
            if not has_edge(rows, dense, indptr, indices, a, mapping[v]):
                lost += 1
    for t in range(nv):
        marker[verts[t]] = 0
    return lost


@njit(cache=True)
def _second(u, size, first):
    j = int(u * (size - 1))
    return j + 1 if j >= first else j


@njit(cache=True)
def _third(u, size, first, second):
    lo = min(first, second)
    hi = max(first, second)
    j = int(u * (size - 2))
    if j >= lo:
        j += 1
    if j >= hi:
        j += 1
    return j


@njit(cache=True)
def anneal(rows, dense, indptr, indices, n, init_map, k, probe_steps, n_steps, cooling, uniforms):
    """Simulated annealing over k-permutations minimizing lost edges.

    Moves: (0) trade a moved label for a fixed one, conjugating by their
    transposition so the support stays a deranged k-set; (1) exchange the
    images of two moved labels; (2) rotate the images of three moved
    labels.  Proposals that would create a fixed point are rejected.  The
    first ``probe_steps`` rows of ``uniforms`` only measure uphill moves to
    set the starting temperature (half of them accepted at the start).
    Returns ``(best_lost, best_map, start_temperature)``.
    """
    mapping = init_map.copy()
    inv = np.empty(n, dtype=np.int64)
    for v in range(n):
        inv[mapping[v]] = v
    sup = np.empty(k, dtype=np.int64)
    non = np.empty(n - k, dtype=np.int64)
    supidx = -np.ones(n, dtype=np.int64)
    nonidx = -np.ones(n, dtype=np.int64)
    a_cnt = 0
    b_cnt = 0
    for v in range(n):
        if mapping[v] != v:
            sup[a_cnt] = v
            supidx[v] = a_cnt
            a_cnt += 1
        else:
            non[b_cnt] = v
            nonidx[v] = b_cnt
            b_cnt += 1
    marker = np.zeros(n, dtype=np.int64)
    verts = np.zeros(3, dtype=np.int64)
    old = np.zeros(3, dtype=np.int64)
    current = _lost_incident(rows, dense, indptr, indices, mapping, sup, k, marker)
    best = current
    best_map = mapping.copy()

    kinds = np.zeros(3, dtype=np.int64)
    nkinds = 0
    if k < n:
        kinds[nkinds] = 0
        nkinds += 1
    if k >= 3:
        kinds[nkinds] = 1
        kinds[nkinds + 1] = 2
        nkinds += 2
    if nkinds == 0 or best == 0:
        return best, best_map, 0.0

    uphill_sum = 0.0
    uphill_cnt = 0
    temp = 1.0
    start_temp = 1.0
    total = probe_steps + n_steps
    for step in range(total):
        if step == probe_steps:
            if uphill_cnt > 0:
                temp = (uphill_sum / uphill_cnt) / math.log(2.0)
            start_temp = temp
        probing = step < probe_steps
        row = uniforms[step]
        kind = kinds[int(row[0] * nkinds)]
        if kind == 0:
            s = sup[int(row[1] * k)]
            t = non[int(row[2] * (n - k))]
            q = inv[s]
            verts[0] = s
            verts[1] = t
            verts[2] = q
            nv = 3
            before = _lost_incident(rows, dense, indptr, indices, mapping, verts, nv, marker)
            old[0] = mapping[s]
            mapping[t] = old[0]
            mapping[q] = t
            mapping[s] = s
        elif kind == 1:
            i1 = int(row[1] * k)
            i2 = _second(row[2], k, i1)
            a = sup[i1]
            b = sup[i2]
            if mapping[b] == a or mapping[a] == b:
                if not probing:
                    temp *= cooling
                continue
            verts[0] = a
            verts[1] = b
            nv = 2
            before = _lost_incident(rows, dense, indptr, indices, mapping, verts, nv, marker)
            old[0] = mapping[a]
            old[1] = mapping[b]
            mapping[a] = old[1]
            mapping[b] = old[0]
        else:
            i1 = int(row[1] * k)
            i2 = _second(row[2], k, i1)
            i3 = _third(row[3], k, i1, i2)
            a = sup[i1]
            b = sup[i2]
            c = sup[i3]
            ma = mapping[a]
            mb = mapping[b]
            mc = mapping[c]
            if mb == a or mc == b or ma == c:
                if not probing:
                    temp *= cooling
                continue
            verts[0] = a
            verts[1] = b
            verts[2] = c
            nv = 3
            before = _lost_incident(rows, dense, indptr, indices, mapping, verts, nv, marker)
            old[0] = ma
            old[1] = mb
            old[2] = mc
            mapping[a] = mb
            mapping[b] = mc
            mapping[c] = ma
        after = _lost_incident(rows, dense, indptr, indices, mapping, verts, nv, marker)
        delta = after - before
        if probing:
            if delta > 0:
                uphill_sum += delta
                uphill_cnt += 1
            accept = False
        else:
            accept = delta <= 0 or row[4] < math.exp(-delta / temp)
            temp *= cooling
        if accept:
            current += delta
            if kind == 0:
                s = verts[0]
                t = verts[1]
                q = verts[2]
                inv[old[0]] = t
                inv[t] = q
                inv[s] = s
                sup[supidx[s]] = t
                supidx[t] = supidx[s]
                supidx[s] = -1
                non[nonidx[t]] = s
                nonidx[s] = nonidx[t]
                nonidx[t] = -1
            elif kind == 1:
                inv[mapping[verts[0]]] = verts[0]
                inv[mapping[verts[1]]] = verts[1]
            else:
                inv[mapping[verts[0]]] = verts[0]
                inv[mapping[verts[1]]] = verts[1]
                inv[mapping[verts[2]]] = verts[2]
            if current < best:
                best = current
                best_map[:] = mapping
                if best == 0:
                    break
        else:
            if kind == 0:
                mapping[verts[0]] = old[0]
                mapping[verts[1]] = verts[1]
                mapping[verts[2]] = verts[0]
            elif kind == 1:
                mapping[verts[0]] = old[0]
                mapping[verts[1]] = old[1]
            else:
                mapping[verts[0]] = old[0]
                mapping[verts[1]] = old[1]
                mapping[verts[2]] = old[2]
    return best, best_map, start_temp


@njit(cache=True)
def dense_set_search(indptr, indices, n, roots, limit, ratio, budget):
    """Connected include/exclude growth from each root looking for a set
    of at most ``limit`` vertices with more than ``ratio`` edges per vertex.

    Same pruning as the reference implementation in ``checks``.  Returns
    ``(status, visited, members)`` with status 1 (found, ``members`` holds
    the set), 0 (none) or -1 (node budget exceeded).
    """
    maxdeg = 0
    for v in range(n):
        maxdeg = max(maxdeg, indptr[v + 1] - indptr[v])
    width = limit * maxdeg + 1
    order = np.zeros((limit + 1, width), dtype=np.int64)
    vals = np.zeros((limit + 1, width), dtype=np.int64)
    length = np.zeros(limit + 1, dtype=np.int64)
    pos = np.zeros(limit + 1, dtype=np.int64)
    edges_at = np.zeros(limit + 1, dtype=np.int64)
    members = np.zeros(limit + 1, dtype=np.int64)
    in_s = np.zeros(n, dtype=np.bool_)
    in_x = np.zeros(n, dtype=np.bool_)
    cnt = np.zeros(n, dtype=np.int64)
    need_deg = ratio + 1
    visited = 0
    for r in range(roots.shape[0]):
        s = roots.shape[1]
        for t in range(s):
            members[t] = roots[r, t]
            in_s[roots[r, t]] = True
        e = 0
        for t in range(s):
            u = members[t]
            for p in range(indptr[u], indptr[u + 1]):
                if in_s[indices[p]]:
                    e += 1
        e //= 2
        base = s
        entering = True
        while True:
            if entering:
                entering = False
                visited += 1
                if visited > budget:
                    return -1, visited, members[:0].copy()
                if e > ratio * s:
                    return 1, visited, members[:s].copy()
                room = limit - s
                length[s] = 0
                pos[s] = 0
                edges_at[s] = e
                ok = room > 0
                if ok:
                    for t in range(s):
                        u = members[t]
                        d_in = 0
                        avail = 0
                        for p in range(indptr[u], indptr[u + 1]):
                            w = indices[p]
                            if in_s[w]:
                                d_in += 1
                            elif not in_x[w]:
                                avail += 1
                        missing = need_deg - d_in
                        if missing > room or (missing > 0 and avail < missing):
                            ok = False
                            break
                if ok:
                    m = 0
                    for t in range(s):
                        u = members[t]
                        for p in range(indptr[u], indptr[u + 1]):
                            w = indices[p]
                            if not in_s[w] and not in_x[w]:
                                if cnt[w] == 0:
                                    order[s, m] = w
                                    m += 1
                                cnt[w] += 1
                    keys = np.empty(m, dtype=np.int64)
                    for j in range(m):
                        keys[j] = -cnt[order[s, j]] * n + order[s, j]
                    idx = np.argsort(keys)
                    tmp = order[s, :m].copy()
                    for j in range(m):
                        w = tmp[idx[j]]
                        order[s, j] = w
                        vals[s, j] = cnt[w]
                    for j in range(m):
                        cnt[tmp[j]] = 0
                    length[s] = m
            # advance the frame at depth s
            i = pos[s]
            room = limit - s
            go = False
            if i < length[s]:
                top = 0
                for j in range(i, min(length[s], i + room)):
                    top += vals[s, j]
                go = edges_at[s] + top >= ratio * s + 1
            if go:
                w = order[s, i]
                in_s[w] = True
                members[s] = w
                e = edges_at[s] + vals[s, i]
                s += 1
                entering = True
                continue
            # frame exhausted: release its exclusions and return to the parent
            for j in range(i):
                in_x[order[s, j]] = False
            if s == base:
                break
            s -= 1
            w = members[s]
            in_s[w] = False
            in_x[w] = True
            pos[s] += 1
        for t in range(base):
            in_s[members[t]] = False
    return 0, visited, members[:0].copy()
