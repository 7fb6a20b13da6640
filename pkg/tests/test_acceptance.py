"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run standalone for just the summary:  python tests/test_acceptance.py
"""
from __future__ import annotations

import random
import sys
import time
from math import comb, factorial, log
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from tiltsperner.chains import (  # noqa: E402
    BlockPermutation,
    ChainSpec,
    PERMUTATION_CAP,
    double_count_check,
    lym_report,
    verify_chain_forbidden,
)
from tiltsperner.concentration import (  # noqa: E402
    BandSpec,
    count_band_family,
    count_band_family_brute,
    cut_point_window_check,
    per_x_violators,
    sample_outside_band,
)
from tiltsperner.core import Family, TiltParams, verify_family  # noqa: E402
from tiltsperner.cutpoint import cut_points, NoCutPoint, floor_equivalence_check, is_cut_point  # noqa: E402
from tiltsperner.search import (  # noqa: E402
    full_graph,
    graph_valid,
    greedy_family,
    greedy_indices,
    max_family_exact,
    sweep,
)

CUT_PQ = [(1, 1), (1, 2), (2, 1), (2, 3), (1, 3)]


_CAPMAN: list = []


@pytest.fixture(autouse=True)
def _capture_manager(request):
    _CAPMAN[:] = [request.config.pluginmanager.getplugin("capturemanager")]
    yield
    _CAPMAN.clear()


def report(tag: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
    if _CAPMAN and _CAPMAN[0] is not None:
        with _CAPMAN[0].global_and_fixture_disabled():
            print("\n" + line)
    else:
        print(line)


# 1 ---------------------------------------------------------------------------

def test_c01_sperner_recovery():
    t0 = time.perf_counter()
    sizes = [max_family_exact(n, TiltParams(1, 0, True)).size for n in range(1, 6)]
    dt = time.perf_counter() - t0
    ok = sizes == [1, 2, 3, 6, 10] == [comb(n, n // 2) for n in range(1, 6)] and dt < 10
    report("C1 Sperner recovery", ok, f"sizes={sizes} in {dt:.2f}s (limit 10s)")
    assert ok


# 2 ---------------------------------------------------------------------------

@pytest.mark.parametrize("p, q", CUT_PQ)
def test_c02_cut_point_existence(p, q):
    t0 = time.perf_counter()
    missing = []
    for n in range(1, 15):
        for A in range(1 << n):
            try:
                cps = cut_points(A, p, q, n).cutpoints
            except NoCutPoint:
                cps = ()
            if not cps:
                missing.append((n, A))
    dt = time.perf_counter() - t0
    ok = not missing and dt < 60
    first = f", first: n={missing[0][0]} A={oracles.to_set(missing[0][1])}" if missing else ""
    report(
        f"C2 cut-point existence (p,q)=({p},{q})",
        ok,
        f"{len(missing)} sets without a cut point over n<=14{first}; {dt:.2f}s (limit 60s)",
    )
    assert ok


# 3 ---------------------------------------------------------------------------

def test_c03_floor_equivalence():
    mismatches = checked = 0
    for p, q in CUT_PQ:
        for n in range(1, 13):
            for A in range(1 << n):
                for x in range(n + 1):
                    checked += 1
                    mismatches += is_cut_point(A, x, p, q, n) != floor_equivalence_check(A, x, p, q, n)
    report("C3 floor equivalence", mismatches == 0, f"{mismatches} mismatches in {checked} (A, x, p, q)")
    assert mismatches == 0


# 4 ---------------------------------------------------------------------------

def test_c04_chain_forbidden():
    failures = chains_checked = pairs = 0
    for p, q in CUT_PQ:
        for n in range(1, 11):
            for x in range(n + 1):
                for r in range(q):
                    rng = random.Random(f"{p},{q},{n},{x},{r}")
                    perms = [BlockPermutation.identity(x, n)]
                    perms += [BlockPermutation.random(x, n, rng) for _ in range(100)]
                    for pi in perms:
                        spec = ChainSpec(x, r, pi, p, q, n)
                        m = len(spec.members)
                        pairs += m * (m - 1) // 2
                        chains_checked += 1
                        failures += not verify_chain_forbidden(spec)
    report("C4 chain forbidden pairs", failures == 0, f"{failures} failing of {chains_checked} chains, {pairs} pairs")
    assert failures == 0


# 5 ---------------------------------------------------------------------------

def _test_families(n: int, params: TiltParams) -> list[Family]:
    fams = [greedy_family(n, params, "middle"), greedy_family(n, params, "random", seed=n)]
    if n <= 6 or params.p != params.q:
        fams.append(max_family_exact(n, params, time_budget=5).witness)
    return fams


def test_c05_double_counting():
    identity_fail = bound_fail = cases = 0
    for n in range(1, 9):
        xs = sorted({n // 2, (n + 1) // 2})
        for pq in [(1, 2), (2, 3), (1, 1)]:
            params = TiltParams(*pq)
            fams = _test_families(n, params)
            fams.append(Family.from_masks(n, range(1 << n)))  # invalid: identity only
            for fam in fams:
                valid = verify_family(fam, params).valid
                for x in xs:
                    assert factorial(x) * factorial(n - x) <= PERMUTATION_CAP
                    dc = double_count_check(fam, x, *pq)
                    cases += 1
                    identity_fail += not dc.identity_ok
                    if valid:
                        bound_fail += not dc.bound_ok
    ok = identity_fail == 0 and bound_fail == 0
    report(
        "C5 double counting",
        ok,
        f"{identity_fail} identity mismatches, {bound_fail} bound violations in {cases} cases (n<=8, balanced x)",
    )
    assert ok


# 6 ---------------------------------------------------------------------------

def test_c06_lym_inequality():
    violations = checked = 0
    for pq in [(1, 2), (2, 3), (1, 1)]:
        for n in range(1, 6):
            fam = max_family_exact(n, TiltParams(*pq)).witness
            for s in lym_report(fam, *pq).values():
                checked += 1
                violations += s > pq[1]
    configs = [(n, pq) for n in range(6, 11) for pq in [(1, 2), (2, 3), (1, 1)]]
    for i in range(1000):
        n, pq = configs[i % len(configs)]
        params = TiltParams(*pq)
        g = full_graph(n, params)
        fam = g.to_family(greedy_indices(g, "random", seed=i))
        for s in lym_report(fam, *pq).values():
            checked += 1
            violations += s > pq[1]
    report("C6 LYM inequality", violations == 0, f"{violations} violations in {checked} per-x sums (15 witnesses + 1000 greedy)")
    assert violations == 0


# 7 ---------------------------------------------------------------------------

def test_c07_band_family():
    dp_mismatch = [n for n in range(1, 15) if count_band_family(BandSpec(n)) != count_band_family_brute(BandSpec(n))]
    oracle_mismatch = [n for n in range(1, 15) if count_band_family(BandSpec(n)) != oracles.band_count(n)]
    size_fail = [n for n in range(10, 61) if count_band_family(BandSpec(n)) * n > 2 * 2**n]
    tail_fail = []
    for n in range(10, 61):
        spec = BandSpec(n)
        for x in range(1, n + 1):
            v = per_x_violators(spec, x)
            if v and log(v) > log(2) - 2 * n * log(n) / x + n * log(2):
                tail_fail.append((n, x))
    ok = not (dp_mismatch or oracle_mismatch or size_fail or tail_fail)
    report(
        "C7 band family",
        ok,
        f"DP!=brute at {dp_mismatch}, DP!=oracle at {oracle_mismatch}, |G|>2*2^n/n at {size_fail}, "
        f"per-x tail failures {len(tail_fail)}",
    )
    assert ok


# 8 ---------------------------------------------------------------------------

def test_c08_cut_point_concentration():
    violations = total = 0
    for n in (40, 50, 60):
        for pq in [(1, 1), (1, 2)]:
            for F in sample_outside_band(n, 10_000, seed=1000 * n + pq[1]):
                total += 1
                violations += not cut_point_window_check(F, *pq, n).ok
    report("C8 cut-point concentration", violations == 0, f"{violations} violations in {total} samples outside the band")
    assert violations == 0


# 9 ---------------------------------------------------------------------------

def test_c09_bound_soundness():
    bad = []
    rows = 0
    for pq in [(1, 2), (2, 3), (1, 1), (2, 1), (1, 0)]:
        for row in sweep(range(1, 13), TiltParams(*pq), mode="exact", budget_s=0.5):
            rows += 1
            if row["upper_bound"] < row["best"]:
                bad.append(row)
    report("C9 bound soundness", not bad, f"{len(bad)} violations in {rows} sweep rows (n<=12)")
    assert not bad


# 10 --------------------------------------------------------------------------

# max sizes for n = 1..4 from oracles.max_family, frozen
NAIVE_MAX = {(1, 2): [2, 4, 7, 12], (1, 1): [2, 3, 4, 6]}


def test_c10_oracle_equivalence():
    rng = random.Random(2024)
    mismatches = 0
    valid_seen = 0
    for i in range(1000):
        n = rng.randint(1, 12)
        pq = rng.choice([(1, 2), (1, 1), (2, 3), (1, 0), (0, 0)])
        params = TiltParams(*pq, True)
        if i % 2:
            base = list(greedy_family(n, params, "random", seed=i, verify=False).members) if n <= 10 else []
            members = rng.sample(base, min(len(base), rng.randint(1, 30))) if base else []
            if rng.random() < 0.5:
                members.append(rng.randrange(1 << n))
        else:
            members = [rng.randrange(1 << n) for _ in range(rng.randint(0, 15))]
        fam = Family.from_masks(n, members)
        fast = graph_valid(fam, params)
        naive = verify_family(fam, params).valid
        ref = oracles.valid_family([oracles.to_set(m) for m in fam], *pq, True)
        valid_seen += naive
        mismatches += not (fast == naive == ref)
    size_mismatch = []
    for pq, frozen in NAIVE_MAX.items():
        for n in range(1, 5):
            live = oracles.max_family(n, *pq, True)
            got = max_family_exact(n, TiltParams(*pq, True))
            if not (got.optimal and got.size == live == frozen[n - 1]):
                size_mismatch.append((pq, n))
    ok = mismatches == 0 and not size_mismatch
    report(
        "C10 oracle equivalence",
        ok,
        f"{mismatches} validity mismatches in 1000 families ({valid_seen} valid); size mismatches {size_mismatch}",
    )
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
