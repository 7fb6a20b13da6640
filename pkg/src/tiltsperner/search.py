"""Extremal search: a valid family is an independent set of the conflict graph.

The full-lattice graph has one vertex per subset (vertex index == mask), so it
is limited to n <= 16.  Exact sizes come from a branch-and-bound maximum
independent set search in :mod:`tiltsperner.kernels`.
"""
from __future__ import annotations

import csv
import io
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from . import kernels
from ._pykernels import pick_vertex
from .concentration import explicit_upper_bound
from .core import (
    Family,
    TiltParams,
    is_conflicting_pair,
    normalize_params,
    popcount,
    verify_family,
)

FULL_LATTICE_MAX_N = 16
SELF_TEST_PAIRS = 1000


class GraphTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ConflictGraph:
    n: int
    params: TiltParams
    vertices: tuple[int, ...]
    adj: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def degree(self, i: int) -> int:
        return popcount(self.adj[i])

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i, row in enumerate(self.adj):
            r = row >> (i + 1)
            j = i + 1
            while r:
                if r & 1:
                    out.append((self.vertices[i], self.vertices[j]))
                r >>= 1
                j += 1
        return out

    def is_independent(self, chosen: int) -> bool:
        """``chosen`` is a bitset over vertex indices."""
        c = chosen
        while c:
            low = c & -c
            if self.adj[low.bit_length() - 1] & chosen:
                return False
            c ^= low
        return True

    def to_family(self, chosen: int) -> Family:
        ms = []
        i = 0
        while chosen:
            if chosen & 1:
                ms.append(self.vertices[i])
            chosen >>= 1
            i += 1
        return Family.from_masks(self.n, ms)


def build_conflict_graph(
    n: int,
    params: TiltParams,
    vertices: Sequence[int] | None = None,
    self_test: bool = True,
) -> ConflictGraph:
    params = normalize_params(params)
    if vertices is None:
        if n > FULL_LATTICE_MAX_N:
            raise GraphTooLarge(
                f"full-lattice graph needs n <= {FULL_LATTICE_MAX_N}; use greedy or a vertex subset"
            )
        vertices = range(1 << n)
    verts = tuple(vertices)
    adj = kernels.current().build_adjacency(list(verts), params.p, params.q, params.patterns)
    g = ConflictGraph(n, params, verts, tuple(adj))
    if self_test and len(verts) > 1:
        _self_test(g)
    return g


def _self_test(g: ConflictGraph) -> None:
    rng = random.Random(0)
    V = len(g.vertices)
    for _ in range(SELF_TEST_PAIRS):
        i, j = rng.randrange(V), rng.randrange(V)
        edge = bool(g.adj[i] >> j & 1)
        if edge != is_conflicting_pair(g.vertices[i], g.vertices[j], g.params):
            raise AssertionError(f"adjacency disagrees with predicate at ({i}, {j})")


@lru_cache(maxsize=32)
def _cached_full_graph(n: int, params: TiltParams, backend: str) -> ConflictGraph:
    return build_conflict_graph(n, params)


def full_graph(n: int, params: TiltParams) -> ConflictGraph:
    return _cached_full_graph(n, normalize_params(params), kernels.current().NAME)


def graph_valid(fam: Family, params: TiltParams) -> bool:
    """Validity via the conflict graph restricted to the family's members."""
    g = build_conflict_graph(fam.n, params, fam.members, self_test=False)
    return not any(g.adj)


# --- greedy and constructions -------------------------------------------------

ORDER_POLICIES = ("middle", "random", "degree")


def _order(g: ConflictGraph, policy: str, seed: int) -> list[int]:
    n = g.n
    idx = list(range(len(g.vertices)))
    if policy == "middle":
        idx.sort(key=lambda i: (abs(2 * popcount(g.vertices[i]) - n), popcount(g.vertices[i]), g.vertices[i]))
    elif policy == "random":
        random.Random(seed).shuffle(idx)
    elif policy == "degree":
        idx.sort(key=lambda i: (g.degree(i), g.vertices[i]))
    else:
        raise ValueError(f"unknown order policy {policy!r}; choose from {ORDER_POLICIES}")
    return idx


def greedy_indices(g: ConflictGraph, policy: str = "middle", seed: int = 0) -> int:
    chosen = 0
    for i in _order(g, policy, seed):
        if not g.adj[i] & chosen:
            chosen |= 1 << i
    return chosen


def greedy_family(
    n: int, params: TiltParams, order_policy: str = "middle", seed: int = 0, verify: bool = True
) -> Family:
    g = full_graph(n, params)
    fam = g.to_family(greedy_indices(g, order_policy, seed))
    if verify and not verify_family(fam, params, max_conflicts=1):
        raise AssertionError("greedy produced an invalid family")
    return fam


def construct_middle_level(n: int) -> Family:
    return Family.from_masks(n, (m for m in range(1 << n) if popcount(m) == n // 2))


def levels_nearest_middle(n: int, count: int) -> list[int]:
    order = sorted(range(n + 1), key=lambda k: (abs(2 * k - n), k))
    return sorted(order[:count])


def construct_consecutive_levels(n: int, p: int, q: int) -> Family:
    """Union of the |q - p| levels nearest n/2 (p, q normalized first)."""
    params = normalize_params(TiltParams(p, q, False))
    width = abs(params.q - params.p)
    if width == 0:
        raise ValueError("p == q leaves no consecutive-level construction")
    levels = set(levels_nearest_middle(n, width))
    return Family.from_masks(n, (m for m in range(1 << n) if popcount(m) in levels))


# --- exact search ---------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    size: int
    witness: Family
    optimal: bool
    nodes_explored: int
    time_budget_hit: bool
    params: TiltParams

    def to_json(self) -> dict:
        return {
            "n": self.witness.n,
            "p": self.params.p,
            "q": self.params.q,
            "patterns": self.params.patterns,
            "size": self.size,
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
            "time_budget_hit": self.time_budget_hit,
            "witness": self.witness.as_sets(),
        }


def _split(adj, P: int, cur: int, depth: int, out: list) -> int:
    """Expand the top of the branching tree exactly as the kernel would; returns nodes used."""
    if depth == 0 or not P:
        out.append((P, cur))
        return 0
    v, d = pick_vertex(adj, P)
    if d == 0:
        out.append((P, cur))
        return 0
    bit = 1 << v
    used = _split(adj, P & ~adj[v] & ~bit, cur | bit, depth - 1, out)
    return 1 + used + _split(adj, P & ~bit, cur, depth - 1, out)


def _run_sub(args):
    backend, adj, P, cur, lower, budget = args
    return kernels.get(backend).mis_search(adj, P, cur, lower, budget)


def max_family_exact(
    n: int,
    params: TiltParams,
    time_budget: float | None = None,
    workers: int = 1,
) -> SearchResult:
    """Maximum valid family on [n].

    With ``workers > 1`` the top of the search tree is split into independent
    subtrees; every subtree starts from the same greedy lower bound, so the
    result (including the witness) does not depend on scheduling.
    """
    params = normalize_params(params)
    g = full_graph(n, params)
    adj = list(g.adj)
    full = (1 << len(adj)) - 1
    greedy = max(
        (greedy_indices(g, pol) for pol in ("degree", "middle")),
        key=popcount,
    )
    lower = popcount(greedy)
    kern = kernels.current()
    if workers <= 1:
        best_set, best, nodes, timed_out = kern.mis_search(adj, full, 0, lower, time_budget)
    else:
        subs: list[tuple[int, int]] = []
        depth = max(1, math.ceil(math.log2(4 * workers)))
        nodes = _split(adj, full, 0, depth, subs)
        jobs = [(kern.NAME, adj, P, cur, lower, time_budget) for P, cur in subs]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_sub, jobs))
        best, best_set, timed_out = lower, None, False
        for bs, b, nd, to in results:
            nodes += nd
            timed_out = timed_out or to
            if bs is not None and b > best:
                best, best_set = b, bs
    chosen = best_set if best_set is not None else greedy
    witness = g.to_family(chosen)
    if len(witness) != best or not verify_family(witness, params, max_conflicts=1):
        raise AssertionError("search witness failed re-verification")
    return SearchResult(best, witness, not timed_out, nodes, timed_out, params)


# --- sweeps ------------------------------------------------------------------------

SWEEP_HEADER = ("n", "p", "q", "patterns", "best", "exact", "construction", "greedy", "upper_bound", "ratio")


def upper_bound_for(n: int, params: TiltParams) -> int:
    params = normalize_params(params)
    if params.is_zero_variant or n < 2:
        return 1 << n
    if params.p == 0 or params.q == 0:
        return comb(n, n // 2)
    return explicit_upper_bound(n, params.p, params.q)


def sweep(
    n_values: Iterable[int],
    params: TiltParams,
    mode: str = "exact",
    budget_s: float | None = 1.0,
    seed: int = 0,
) -> list[dict]:
    if mode not in ("exact", "greedy"):
        raise ValueError(f"mode must be 'exact' or 'greedy', got {mode!r}")
    params = normalize_params(params)
    rows = []
    for n in n_values:
        g = full_graph(n, params)
        greedy = max(popcount(greedy_indices(g, pol, seed)) for pol in ORDER_POLICIES)
        if mode == "exact":
            res = max_family_exact(n, params, budget_s)
            best, exact = res.size, res.optimal
        else:
            best, exact = greedy, False
        if params.p != params.q:
            construction: int | str = len(construct_consecutive_levels(n, params.p, params.q))
        else:
            construction = ""
        rows.append(
            {
                "n": n,
                "p": params.p,
                "q": params.q,
                "patterns": params.patterns,
                "best": best,
                "exact": exact,
                "construction": construction,
                "greedy": greedy,
                "upper_bound": upper_bound_for(n, params),
                "ratio": best / (2**n / math.sqrt(n)),
            }
        )
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow(
            [
                r["n"],
                r["p"],
                r["q"],
                str(r["patterns"]).lower(),
                r["best"],
                str(r["exact"]).lower(),
                r["construction"],
                r["greedy"],
                r["upper_bound"],
                f"{r['ratio']:.6f}",
            ]
        )
    return buf.getvalue()
