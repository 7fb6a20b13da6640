"""The band family of subsets whose prefix counts stray from x/2, its exact
size by dynamic programming, the Hoeffding tail bound, and the window that
cut points of in-band sets must fall into.

All threshold comparisons are made against integers: for T = sqrt(n ln n) the
test |c - x/2| > T becomes (2c - x)^2 > floor(4 n ln n), which is exact because
4 n ln n is irrational for n >= 2.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from decimal import Decimal, localcontext
from math import comb, isqrt

from .chains import fx_bound
from .cutpoint import cut_points, choose_cut_point

_PREC = 60
WINDOW_FACTOR = 8


def _ln(n: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = _PREC
        return Decimal(n).ln()


def floor_scaled_nlogn(n: int, scale: int) -> int:
    """floor(scale * n * ln n), exact for the integer arguments used here."""
    with localcontext() as ctx:
        ctx.prec = _PREC
        v = Decimal(scale) * Decimal(n) * _ln(n)
        return int(v.to_integral_value(rounding="ROUND_FLOOR"))


@dataclass(frozen=True)
class BandSpec:
    """Band of half-width ``threshold`` around x/2.  ``threshold=None`` means sqrt(n ln n)."""

    n: int
    threshold: float | None = None

    @property
    def T(self) -> float:
        if self.threshold is None:
            return math.sqrt(self.n * math.log(self.n))
        return self.threshold

    @property
    def limit(self) -> int:
        """Largest integer m with m <= 4 T^2; a walk value s = 2c - x violates iff s^2 > limit."""
        if self.threshold is None:
            return floor_scaled_nlogn(self.n, 4)
        with localcontext() as ctx:
            ctx.prec = _PREC
            return int((4 * Decimal(self.threshold) ** 2).to_integral_value(rounding="ROUND_FLOOR"))


def in_band_family(G: int, spec: BandSpec) -> bool:
    limit = spec.limit
    s = 0
    for i in range(spec.n):
        s += 1 if G >> i & 1 else -1
        if s * s > limit:
            return True
    return False


def count_band_family(spec: BandSpec) -> int:
    """Exact |G| = 2^n minus the number of +-1 walks that never leave the band."""
    limit = spec.limit
    ways = {0: 1}
    for _ in range(spec.n):
        nxt: dict[int, int] = {}
        for s, c in ways.items():
            for t in (s - 1, s + 1):
                if t * t <= limit:
                    nxt[t] = nxt.get(t, 0) + c
        ways = nxt
    return (1 << spec.n) - sum(ways.values())


def count_band_family_brute(spec: BandSpec) -> int:
    return sum(in_band_family(G, spec) for G in range(1 << spec.n))


def per_x_violators(spec: BandSpec, x: int) -> int:
    """Number of subsets of [n] whose prefix [x] alone leaves the band."""
    limit = spec.limit
    inner = sum(comb(x, c) for c in range(x + 1) if (2 * c - x) ** 2 > limit)
    return inner << (spec.n - x)


def chernoff_rhs(n: int, x: int, T: float) -> float:
    """Hoeffding tail 2 exp(-2 T^2 / x) for a sum of x fair coins."""
    if not 0 < x <= n:
        raise ValueError(f"x={x} outside [1, {n}]")
    return 2.0 * math.exp(-2.0 * T * T / x)


def chernoff_dominates(spec: BandSpec, x: int) -> bool:
    """violators(x) <= chernoff_rhs * 2^n, compared in log space to avoid overflow."""
    v = per_x_violators(spec, x)
    if v == 0:
        return True
    n = spec.n
    lhs = math.log(v)
    rhs = math.log(2.0) - 2.0 * spec.T**2 / x + n * math.log(2.0)
    return lhs <= rhs + 1e-12


def band_bound(n: int) -> int:
    """floor(2 * 2^n / n): the explicit-constant form of the band size lemma."""
    return (2 << n) // n


# --- cut-point window -------------------------------------------------------

def window(n: int, p: int, q: int) -> tuple[int, int]:
    """Integer positions x in [0, n] with |x - pn/(p+q)| <= 8 sqrt(n ln n)."""
    # ((p+q)x - pn)^2 <= 64 (p+q)^2 n ln n
    s = isqrt(floor_scaled_nlogn(n, WINDOW_FACTOR**2 * (p + q) ** 2)) if n > 1 else 0
    lo = -((s - p * n) // (p + q))  # ceil((pn - s) / (p+q))
    hi = (p * n + s) // (p + q)
    return max(lo, 0), min(hi, n)


def in_window(x: int, n: int, p: int, q: int) -> bool:
    lo, hi = window(n, p, q)
    return lo <= x <= hi


@dataclass(frozen=True)
class WindowVerdict:
    cutpoints: tuple[int, ...]
    distances: tuple[float, ...]
    radius: float
    ok: bool


class OutsideLemmaDomain(ValueError):
    pass


def cut_point_window_check(F: int, p: int, q: int, n: int) -> WindowVerdict:
    """Check that every cut point of an in-band set F lies in the window."""
    if p < 1 or q < 1:
        raise ValueError("p, q >= 1 required")
    if p > q:
        raise ValueError("window check assumes p <= q; mirror the set and swap p, q")
    if in_band_family(F, BandSpec(n)):
        raise OutsideLemmaDomain("set belongs to the band family; the window bound does not apply")
    cps = cut_points(F, p, q, n).cutpoints
    centre = p * n / (p + q)
    lo, hi = window(n, p, q)
    return WindowVerdict(
        cps,
        tuple(abs(x - centre) for x in cps),
        WINDOW_FACTOR * math.sqrt(n * math.log(n)),
        all(lo <= x <= hi for x in cps),
    )


def sample_outside_band(n: int, count: int, seed: int) -> list[int]:
    rng = random.Random(seed)
    spec = BandSpec(n)
    out = []
    while len(out) < count:
        G = rng.getrandbits(n)
        if not in_band_family(G, spec):
            out.append(G)
    return out


def explicit_upper_bound(n: int, p: int, q: int) -> int:
    """|G| plus the per-position part bounds over the window of chosen cut points.

    For p > q the bound for (q, p) is returned; mirroring is a bijection between
    valid (p, q) and (q, p) families.
    """
    if p < 1 or q < 1:
        raise ValueError("p, q >= 1 required")
    if n < 2:
        raise ValueError("n >= 2 required")
    if p > q:
        p, q = q, p
    lo, hi = window(n, p, q)
    return count_band_family(BandSpec(n)) + sum(fx_bound(x, n, q) for x in range(lo, hi + 1))


def window_stats(n: int, p: int, q: int, samples: list[int]) -> dict:
    """Sampled check of the window over all cut points and the chosen one."""
    violations = 0
    chosen_violations = 0
    max_dist = 0.0
    centre = p * n / (p + q)
    lo, hi = window(n, p, q)
    for F in samples:
        v = cut_point_window_check(F, p, q, n)
        violations += not v.ok
        max_dist = max(max_dist, *v.distances)
        chosen_violations += not lo <= choose_cut_point(F, p, q, n) <= hi
    return {
        "samples": len(samples),
        "violations": violations,
        "chosen_violations": chosen_violations,
        "max_distance": max_dist,
        "radius": WINDOW_FACTOR * math.sqrt(n * math.log(n)),
        "centre": centre,
    }
