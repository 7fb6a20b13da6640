"""Pure-Python kernels: conflict adjacency and branch-and-bound independent set.

Bitsets are Python ints over vertex indices.  ``_ckernels`` implements the same
algorithms node for node; both must return identical results.
"""
from __future__ import annotations

import sys
import time

NAME = "python"
CHECK_EVERY = 1024


def build_adjacency(masks, p, q, patterns):
    """Adjacency rows (bit j of row i set iff masks i and j conflict)."""
    zero = p == 0 and q == 0
    V = len(masks)
    rows = [0] * V
    for i in range(V):
        F = masks[i]
        row = rows[i]
        for j in range(i + 1, V):
            G = masks[j]
            a = F & ~G
            b = G & ~F
            if zero:
                fg = gf = True
            else:
                na = bin(a).count("1")
                nb = bin(b).count("1")
                # orientation (F, G) needs p|a| = q|b|, (G, F) needs p|b| = q|a|
                fg = p * na == q * nb
                gf = p * nb == q * na
                if not (fg or gf):
                    continue
            if patterns and a and b:
                fg = fg and (a & -a).bit_length() > b.bit_length()
                gf = gf and (b & -b).bit_length() > a.bit_length()
            if fg or gf:
                row |= 1 << j
                rows[j] |= 1 << i
        rows[i] = row
    return rows


def _popcount(x):
    return bin(x).count("1")


def clique_cover_size(adj, P):
    """Greedy partition of P into cliques, lowest index first; bounds α(G[P])."""
    count = 0
    while P:
        low = P & -P
        v = low.bit_length() - 1
        P ^= low
        C = P & adj[v]
        while C:
            low = C & -C
            w = low.bit_length() - 1
            P ^= low
            C &= adj[w]
        count += 1
    return count


def pick_vertex(adj, P):
    best_v, best_d = -1, -1
    Q = P
    while Q:
        low = Q & -Q
        v = low.bit_length() - 1
        Q ^= low
        d = _popcount(adj[v] & P)
        if d > best_d:
            best_v, best_d = v, d
    return best_v, best_d


def mis_search(adj, P, cur, lower, budget_s=None):
    """Branch and bound for a maximum independent set extending ``cur`` inside ``P``.

    Returns ``(best_set, best_size, nodes, timed_out)``; ``best_set`` is None
    when nothing larger than ``lower`` was found.
    """
    deadline = None if budget_s is None else time.perf_counter() + budget_s
    state = {"best": lower, "best_set": None, "nodes": 0, "timed_out": False}

    def rec(P, cur, size):
        while True:
            state["nodes"] += 1
            if deadline is not None and state["nodes"] % CHECK_EVERY == 0:
                if time.perf_counter() > deadline:
                    state["timed_out"] = True
            if state["timed_out"]:
                return
            if not P:
                if size > state["best"]:
                    state["best"], state["best_set"] = size, cur
                return
            if size + clique_cover_size(adj, P) <= state["best"]:
                return
            v, d = pick_vertex(adj, P)
            bit = 1 << v
            if d == 0:
                total = size + _popcount(P)
                if total > state["best"]:
                    state["best"], state["best_set"] = total, cur | P
                return
            rec(P & ~adj[v] & ~bit, cur | bit, size + 1)
            P &= ~bit

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, len(adj) + 1000))
    try:
        rec(P, cur, _popcount(cur))
    finally:
        sys.setrecursionlimit(old)
    return state["best_set"], state["best"], state["nodes"], state["timed_out"]
