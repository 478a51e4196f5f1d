# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled decoding kernels.

Transliterated from _pykern.py; that module is the reference text.  Same
loop order, same strict > first-maximum tie-breaks, same float addition
order, so both backends return bit-identical answers.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def eisner_decode(scores):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] sc = np.ascontiguousarray(
        scores, dtype=np.float64)
    cdef int n = sc.shape[0] - 1
    if n < 1:
        return [], 0.0
    cdef int size = n + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cr = np.zeros((size, size))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cl = np.zeros((size, size))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ir = np.full((size, size), -np.inf)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] il = np.full((size, size), -np.inf)
    cdef cnp.ndarray[cnp.intp_t, ndim=2] br = np.zeros((size, size), dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=2] bl = np.zeros((size, size), dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=2] bir = np.zeros((size, size), dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=2] bil = np.zeros((size, size), dtype=np.intp)
    cdef int length, s, t, r, root, kind
    cdef double best, v
    cdef Py_ssize_t arg
    for length in range(1, n):
        for s in range(1, n - length + 1):
            t = s + length
            best = -np.inf
            arg = s
            for r in range(s, t):
                v = cr[s, r] + cl[r + 1, t]
                if v > best:
                    best = v
                    arg = r
            il[s, t] = best + sc[t, s]
            ir[s, t] = best + sc[s, t]
            bil[s, t] = arg
            bir[s, t] = arg
            best = -np.inf
            arg = s
            for r in range(s, t):
                v = cl[s, r] + il[r, t]
                if v > best:
                    best = v
                    arg = r
            cl[s, t] = best
            bl[s, t] = arg
            best = -np.inf
            arg = s + 1
            for r in range(s + 1, t + 1):
                v = ir[s, r] + cr[r, t]
                if v > best:
                    best = v
                    arg = r
            cr[s, t] = best
            br[s, t] = arg
    best = -np.inf
    root = 1
    for r in range(1, n + 1):
        v = sc[0, r] + cl[1, r] + cr[r, n]
        if v > best:
            best = v
            root = r
    heads = [0] * (n + 1)
    stack = [(0, 1, root), (1, root, n)]
    while stack:
        kind, s, t = stack.pop()
        if s == t:
            continue
        if kind == 0:
            r = bl[s, t]
            stack.append((0, s, r))
            stack.append((2, r, t))
        elif kind == 1:
            r = br[s, t]
            stack.append((3, s, r))
            stack.append((1, r, t))
        elif kind == 2:
            heads[s] = t
            r = bil[s, t]
            stack.append((1, s, r))
            stack.append((0, r + 1, t))
        else:
            heads[t] = s
            r = bir[s, t]
            stack.append((1, s, r))
            stack.append((0, r + 1, t))
    return heads[1:], best


NEG_INF = float('-inf')


def _tree_total(heads, sc):
    cdef double total = 0.0
    cdef Py_ssize_t v
    for v in range(1, len(heads)):
        total += sc[heads[v]][v]
    return total


def _greedy_heads(nodes, arcs, root):
    best = {}
    cdef double bs, s
    for v in nodes:
        bu = root
        bs = arcs.get((root, v), NEG_INF)
        for u in nodes:
            if u == v:
                continue
            s = arcs.get((u, v), NEG_INF)
            if s > bs:
                bs = s
                bu = u
        best[v] = bu
    return best


def _cle_rec(nodes, arcs, root):
    best = _greedy_heads(nodes, arcs, root)
    cycle = None
    color = {}
    for start in nodes:
        if start in color:
            continue
        path = []
        v = start
        while v != root and v not in color:
            color[v] = start
            path.append(v)
            v = best[v]
        if v != root and color[v] == start:
            cycle = path[path.index(v):]
            break
    if cycle is None:
        return best
    cyc_set = set(cycle)
    cnode = max(nodes) + 1
    cyc_score = {v: arcs.get((best[v], v), NEG_INF) for v in cycle}
    new_arcs = {}
    enter_src = {}
    leave_src = {}
    cdef double adj
    for (u, v), s in sorted(arcs.items()):
        if u in cyc_set and v not in cyc_set:
            if (cnode, v) not in new_arcs or s > new_arcs[(cnode, v)]:
                new_arcs[(cnode, v)] = s
                leave_src[v] = u
        elif u not in cyc_set and v in cyc_set:
            adj = s - cyc_score[v]
            if (u, cnode) not in new_arcs or adj > new_arcs[(u, cnode)]:
                new_arcs[(u, cnode)] = adj
                enter_src[u] = v
        elif u not in cyc_set:
            new_arcs[(u, v)] = s
    new_nodes = sorted(v for v in nodes if v not in cyc_set) + [cnode]
    parent = _cle_rec(new_nodes, new_arcs, root)
    result = {}
    for v, u in parent.items():
        if v == cnode:
            continue
        result[v] = leave_src[v] if u == cnode else u
    entry_v = enter_src[parent[cnode]]
    for v in cycle:
        result[v] = parent[cnode] if v == entry_v else best[v]
    return result


def cle_decode(scores):
    cdef int n = len(scores) - 1
    if n < 1:
        return [], 0.0
    sc = [[float(x) for x in row] for row in scores]
    nodes = list(range(1, n + 1))

    def run(matrix):
        arcs = {}
        for v in nodes:
            for u in range(0, n + 1):
                if u != v and matrix[u][v] > NEG_INF:
                    arcs[(u, v)] = matrix[u][v]
        parent = _cle_rec(nodes, arcs, 0)
        heads = [0] * (n + 1)
        for v in nodes:
            heads[v] = parent[v]
        return heads

    heads = run(sc)
    roots = [v for v in nodes if heads[v] == 0]
    cdef double best_total, total
    if len(roots) != 1:
        best_heads = None
        best_total = NEG_INF
        for r in nodes:
            forced = [row[:] for row in sc]
            for v in nodes:
                if v != r:
                    forced[0][v] = NEG_INF
            for u in nodes:
                if u != r:
                    forced[u][r] = NEG_INF
            cand = run(forced)
            total = _tree_total(cand, sc)
            if total > best_total:
                best_total = total
                best_heads = cand
        heads = best_heads
    return heads[1:], _tree_total(heads, sc)


def viterbi_chain(emis, trans):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] em = np.ascontiguousarray(
        emis, dtype=np.float64)
    cdef int T = em.shape[0]
    if T == 0:
        return [], 0.0
    cdef int K = em.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=3] tr = np.ascontiguousarray(
        trans, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] delta = em[0].copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nd = np.empty(K)
    cdef cnp.ndarray[cnp.intp_t, ndim=2] back = np.zeros((T, K), dtype=np.intp)
    cdef int t, k, p
    cdef double best, v
    cdef Py_ssize_t arg
    for t in range(1, T):
        for k in range(K):
            best = -np.inf
            arg = 0
            for p in range(K):
                v = delta[p] + tr[t, p, k]
                if v > best:
                    best = v
                    arg = p
            nd[k] = best + em[t, k]
            back[t, k] = arg
        delta[:] = nd
    best = -np.inf
    arg = 0
    for k in range(K):
        if delta[k] > best:
            best = delta[k]
            arg = k
    # no negative list indices here: wraparound is off for this module
    cdef Py_ssize_t cur = arg
    path = [cur]
    for t in range(T - 1, 0, -1):
        cur = back[t, cur]
        path.append(cur)
    path.reverse()
    return [int(k) for k in path], best
