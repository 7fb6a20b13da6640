# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same algorithms and node order as ``_pykernels``."""
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

import time

import numpy as np
cimport numpy as cnp

NAME = "cython"
DEF CHECK_EVERY = 1024

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_clzll(unsigned long long) nogil


cdef inline int _bitlen(uint64_t x) nogil:
    return 0 if x == 0 else 64 - __builtin_clzll(x)


cdef inline int _lowlen(uint64_t x) nogil:
    # bit_length of the lowest set bit, i.e. 1-based index of min element
    return __builtin_ctzll(x) + 1


def build_adjacency_words(cnp.uint64_t[::1] masks, int64_t p, int64_t q, bint patterns):
    cdef Py_ssize_t V = masks.shape[0]
    cdef Py_ssize_t W = (V + 63) // 64
    out = np.zeros((V, W), dtype=np.uint64)
    cdef cnp.uint64_t[:, ::1] adj = out
    cdef Py_ssize_t i, j
    cdef uint64_t F, G, a, b
    cdef int64_t na, nb
    cdef bint zero = p == 0 and q == 0
    cdef bint fg, gf
    with nogil:
        for i in range(V):
            F = masks[i]
            for j in range(i + 1, V):
                G = masks[j]
                a = F & ~G
                b = G & ~F
                if zero:
                    fg = True
                    gf = True
                else:
                    na = __builtin_popcountll(a)
                    nb = __builtin_popcountll(b)
                    fg = p * na == q * nb
                    gf = p * nb == q * na
                    if not (fg or gf):
                        continue
                if patterns and a != 0 and b != 0:
                    fg = fg and _lowlen(a) > _bitlen(b)
                    gf = gf and _lowlen(b) > _bitlen(a)
                if fg or gf:
                    adj[i, j >> 6] |= (<uint64_t>1) << (j & 63)
                    adj[j, i >> 6] |= (<uint64_t>1) << (i & 63)
    return out


def build_adjacency(masks, p, q, patterns):
    arr = np.ascontiguousarray(masks, dtype=np.uint64)
    words = build_adjacency_words(arr, p, q, patterns)
    return [int.from_bytes(row.tobytes(), "little") for row in words]


cdef struct Search:
    uint64_t *adj
    Py_ssize_t V
    Py_ssize_t W
    int64_t best
    uint64_t *best_set
    bint found
    int64_t nodes
    bint timed_out
    bint has_deadline
    double deadline


cdef inline int _pop_and(const uint64_t *x, const uint64_t *y, Py_ssize_t W) nogil:
    cdef Py_ssize_t w
    cdef int c = 0
    for w in range(W):
        c += __builtin_popcountll(x[w] & y[w])
    return c


cdef inline int _pop(const uint64_t *x, Py_ssize_t W) nogil:
    cdef Py_ssize_t w
    cdef int c = 0
    for w in range(W):
        c += __builtin_popcountll(x[w])
    return c


cdef inline Py_ssize_t _lowest(const uint64_t *x, Py_ssize_t W) nogil:
    cdef Py_ssize_t w
    for w in range(W):
        if x[w]:
            return w * 64 + __builtin_ctzll(x[w])
    return -1


cdef int _clique_cover(Search *s, const uint64_t *P, uint64_t *U, uint64_t *C) nogil:
    cdef Py_ssize_t W = s.W, w, v
    cdef int count = 0
    memcpy(U, P, W * sizeof(uint64_t))
    while True:
        v = _lowest(U, W)
        if v < 0:
            break
        U[v >> 6] &= ~((<uint64_t>1) << (v & 63))
        for w in range(W):
            C[w] = U[w] & s.adj[v * W + w]
        while True:
            v = _lowest(C, W)
            if v < 0:
                break
            U[v >> 6] &= ~((<uint64_t>1) << (v & 63))
            for w in range(W):
                C[w] &= s.adj[v * W + w]
        count += 1
    return count


cdef void _rec(Search *s, uint64_t *P, uint64_t *cur, int64_t size):
    # P and cur are owned by this frame and modified in place
    cdef Py_ssize_t W = s.W, w, v, best_v
    cdef int d, best_d
    cdef uint64_t word, low, bit
    cdef uint64_t *scratch = <uint64_t *>malloc(4 * W * sizeof(uint64_t))
    cdef uint64_t *U = scratch
    cdef uint64_t *C = scratch + W
    cdef uint64_t *P2 = scratch + 2 * W
    cdef uint64_t *cur2 = scratch + 3 * W
    cdef bint empty
    try:
        while True:
            s.nodes += 1
            if s.has_deadline and s.nodes % CHECK_EVERY == 0:
                if time.perf_counter() > s.deadline:
                    s.timed_out = True
            if s.timed_out:
                return
            empty = True
            for w in range(W):
                if P[w]:
                    empty = False
                    break
            if empty:
                if size > s.best:
                    s.best = size
                    memcpy(s.best_set, cur, W * sizeof(uint64_t))
                    s.found = True
                return
            if size + _clique_cover(s, P, U, C) <= s.best:
                return
            best_v = -1
            best_d = -1
            for w in range(W):
                word = P[w]
                while word:
                    low = word & (~word + 1)
                    v = w * 64 + __builtin_ctzll(word)
                    word ^= low
                    d = _pop_and(s.adj + v * W, P, W)
                    if d > best_d:
                        best_d = d
                        best_v = v
            v = best_v
            bit = (<uint64_t>1) << (v & 63)
            if best_d == 0:
                d = _pop(P, W)
                if size + d > s.best:
                    s.best = size + d
                    for w in range(W):
                        s.best_set[w] = cur[w] | P[w]
                    s.found = True
                return
            for w in range(W):
                P2[w] = P[w] & ~s.adj[v * W + w]
                cur2[w] = cur[w]
            P2[v >> 6] &= ~bit
            cur2[v >> 6] |= bit
            _rec(s, P2, cur2, size + 1)
            if s.timed_out:
                return
            P[v >> 6] &= ~bit
    finally:
        free(scratch)


def _to_words(x, Py_ssize_t W):
    return np.frombuffer(x.to_bytes(W * 8, "little"), dtype=np.uint64).copy()


def mis_search(adj, P, cur, lower, budget_s=None):
    """See ``_pykernels.mis_search``."""
    cdef Py_ssize_t V = len(adj)
    cdef Py_ssize_t W = max(1, (V + 63) // 64)
    buf = b"".join(row.to_bytes(W * 8, "little") for row in adj) or bytes(W * 8)
    cdef cnp.uint64_t[:, ::1] A = np.frombuffer(buf, dtype=np.uint64).reshape(-1, W).copy()
    cdef cnp.uint64_t[::1] Pw = _to_words(P, W)
    cdef cnp.uint64_t[::1] Cw = _to_words(cur, W)
    cdef cnp.uint64_t[::1] Bw = np.zeros(W, dtype=np.uint64)
    cdef Search s
    s.adj = <uint64_t *>&A[0, 0]
    s.V = V
    s.W = W
    s.best = lower
    s.best_set = <uint64_t *>&Bw[0]
    s.found = False
    s.nodes = 0
    s.timed_out = False
    s.has_deadline = budget_s is not None
    s.deadline = time.perf_counter() + budget_s if budget_s is not None else 0.0
    _rec(&s, <uint64_t *>&Pw[0], <uint64_t *>&Cw[0], bin(cur).count("1"))
    best_set = int.from_bytes(np.asarray(Bw).tobytes(), "little") if s.found else None
    return best_set, s.best, s.nodes, bool(s.timed_out)
