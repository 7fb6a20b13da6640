"""Block permutations, canonical sets and the chain double-counting apparatus.

A block permutation fixes the blocks ``[x]`` and ``[n] \\ [x]`` setwise.  The
canonical set ``C(x, k) = {1..j(x,k)} ∪ {x+1..x+k}`` has ``x`` as a cut point,
and for a fixed residue ``r`` the sets ``C(x, tq + r)`` (t = 0, 1, ...) are
pairwise forbidden, so a valid family meets each such chain at most once.
"""
from __future__ import annotations

from random import Random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import Iterator, Sequence

from .core import Family, TiltParams, is_forbidden_ordered, mirror, popcount, prefix_mask
from .cutpoint import choose_cut_point

PERMUTATION_CAP = 10**6


def j_of(x: int, k: int, p: int, q: int, n: int) -> int:
    if x < 0 or k < 0 or x + k > n:
        raise ValueError(f"need 0 <= x, k and x + k <= n, got x={x}, k={k}, n={n}")
    if q < 1:
        raise ValueError("q must be >= 1")
    return (p * (n - x - k)) // q


def canonical_set(x: int, k: int, p: int, q: int, n: int) -> int | None:
    """Mask of C(x, k), or None when j(x, k) > x."""
    j = j_of(x, k, p, q, n)
    if j > x:
        return None
    return prefix_mask(j) | (prefix_mask(k) << x)


@dataclass(frozen=True)
class BlockPermutation:
    """``pi1`` permutes [x], ``pi2`` permutes [n - x]; both are 1-based image tuples."""

    x: int
    pi1: tuple[int, ...]
    pi2: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.pi1) != list(range(1, self.x + 1)):
            raise ValueError("pi1 is not a permutation of [x]")
        if sorted(self.pi2) != list(range(1, len(self.pi2) + 1)):
            raise ValueError("pi2 is not a permutation of [n - x]")

    @property
    def n(self) -> int:
        return self.x + len(self.pi2)

    @classmethod
    def identity(cls, x: int, n: int) -> "BlockPermutation":
        return cls(x, tuple(range(1, x + 1)), tuple(range(1, n - x + 1)))

    @classmethod
    def random(cls, x: int, n: int, rng: Random) -> "BlockPermutation":
        a = list(range(1, x + 1))
        b = list(range(1, n - x + 1))
        rng.shuffle(a)
        rng.shuffle(b)
        return cls(x, tuple(a), tuple(b))

    def image(self, i: int) -> int:
        if i <= self.x:
            return self.pi1[i - 1]
        return self.pi2[i - self.x - 1] + self.x

    def as_list(self) -> list[int]:
        return [self.image(i) for i in range(1, self.n + 1)]


def apply_block_permutation(pi: BlockPermutation, A: int) -> int:
    out = 0
    i = 1
    while A:
        if A & 1:
            out |= 1 << (pi.image(i) - 1)
        A >>= 1
        i += 1
    return out


def block_permutations(x: int, n: int) -> Iterator[BlockPermutation]:
    for a in permutations(range(1, x + 1)):
        for b in permutations(range(1, n - x + 1)):
            yield BlockPermutation(x, a, b)


def chain_members(x: int, r: int, pi: BlockPermutation | None, p: int, q: int, n: int) -> list[int]:
    """Existing sets pi(C(x, tq + r)) in increasing t."""
    if not 0 <= r < q:
        raise ValueError(f"residue r={r} must satisfy 0 <= r < q={q}")
    out = []
    k = r
    while x + k <= n:
        c = canonical_set(x, k, p, q, n)
        if c is not None:
            out.append(c if pi is None else apply_block_permutation(pi, c))
        k += q
    return out


def chain_ks(x: int, r: int, p: int, q: int, n: int) -> list[int]:
    return [k for k in range(r, n - x + 1, q) if j_of(x, k, p, q, n) <= x]


@dataclass(frozen=True)
class ChainSpec:
    x: int
    r: int
    pi: BlockPermutation
    p: int
    q: int
    n: int

    @property
    def members(self) -> list[int]:
        return chain_members(self.x, self.r, self.pi, self.p, self.q, self.n)


def verify_chain_forbidden(spec: ChainSpec) -> bool:
    """Every two chain members conflict, with the larger-k member playing F.

    Also asserts the block structure behind it: the larger-k member gains
    k' - k elements above x and loses j(x,k) - j(x,k') elements at or below x.
    """
    x, p, q, n = spec.x, spec.p, spec.q, spec.n
    params = TiltParams(p, q, True)
    low = prefix_mask(x)
    ks = chain_ks(x, spec.r, p, q, n)
    members = spec.members
    for i in range(len(members)):
        for jdx in range(i + 1, len(members)):
            G, F = members[i], members[jdx]
            k, k2 = ks[i], ks[jdx]
            gained, lost = F & ~G, G & ~F
            assert popcount(gained) == k2 - k
            assert popcount(lost) == j_of(x, k, p, q, n) - j_of(x, k2, p, q, n)
            assert gained & low == 0 and lost & ~low == 0
            if not is_forbidden_ordered(F, G, params):
                return False
    return True


# --- LYM sums and double counting ---------------------------------------------

def lym_term(F: int, x: int, n: int) -> Fraction:
    a = popcount(F & prefix_mask(x))
    k = popcount(F >> x)
    return Fraction(1, comb(x, a) * comb(n - x, k))


def lym_sum(fam: Family | Sequence[int], x: int, p: int, q: int, n: int | None = None) -> Fraction:
    """Sum of 1 / (C(x, |F ∩ [x]|) C(n-x, |F \\ [x]|)) over members whose chosen
    cut point is x.  Raises if some member has a different chosen cut point."""
    if isinstance(fam, Family):
        n = fam.n
    if n is None:
        raise ValueError("n required for a bare mask sequence")
    total = Fraction(0)
    for F in fam:
        if choose_cut_point(F, p, q, n) != x:
            raise ValueError(f"member {F:#x} does not have chosen cut point {x}")
        total += lym_term(F, x, n)
    return total


def partition_by_cut_point(fam: Family, p: int, q: int) -> dict[int, list[int]]:
    parts: dict[int, list[int]] = {}
    for F in fam:
        parts.setdefault(choose_cut_point(F, p, q, fam.n), []).append(F)
    return parts


def lym_report(fam: Family, p: int, q: int) -> dict[int, Fraction]:
    """Per chosen cut point x, the LYM sum of that part of ``fam``.

    For p > q the mirrored family is partitioned under (q, p) instead, and the
    sums are then bounded by p.
    """
    if p > q:
        fam = Family.from_masks(fam.n, (mirror(F, fam.n) for F in fam))
        p, q = q, p
    return {
        x: lym_sum(part, x, p, q, fam.n)
        for x, part in sorted(partition_by_cut_point(fam, p, q).items())
    }


@dataclass(frozen=True)
class DoubleCount:
    lhs: int
    analytic: int
    rhs: int

    @property
    def identity_ok(self) -> bool:
        return self.lhs == self.analytic

    @property
    def bound_ok(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.bound_ok


def double_count_check(fam: Family, x: int, p: int, q: int) -> DoubleCount:
    """Count pairs (pi, chain member) landing in the part of ``fam`` with chosen
    cut point x, by enumerating every block permutation, and compare with the
    closed-form count per member."""
    n = fam.n
    if factorial(x) * factorial(n - x) > PERMUTATION_CAP:
        raise ValueError(f"x!(n-x)! exceeds {PERMUTATION_CAP}; enumeration refused")
    part = {F for F in fam if choose_cut_point(F, p, q, n) == x}
    canon = [c for r in range(q) for c in chain_members(x, r, None, p, q, n)]
    lhs = 0
    if part:
        for pi in block_permutations(x, n):
            for c in canon:
                if apply_block_permutation(pi, c) in part:
                    lhs += 1
    analytic = 0
    for F in part:
        a = popcount(F & prefix_mask(x))
        k = popcount(F >> x)
        analytic += factorial(a) * factorial(x - a) * factorial(k) * factorial(n - x - k)
    return DoubleCount(lhs, analytic, q * factorial(x) * factorial(n - x))


def fx_bound(x: int, n: int, q: int) -> int:
    """Largest possible part size at position x allowed by the LYM sum <= q."""
    if not 0 <= x <= n:
        raise ValueError(f"x={x} outside [0, {n}]")
    return q * comb(x, x // 2) * comb(n - x, (n - x) // 2)


def surjection_witness(F: int, x: int, p: int, q: int, n: int) -> BlockPermutation:
    """A block permutation mapping C(x, |F \\ [x]|) onto F (x must be a cut point of F)."""
    low = [i for i in range(1, x + 1) if F >> (i - 1) & 1]
    high = [i - x for i in range(x + 1, n + 1) if F >> (i - 1) & 1]
    k = len(high)
    if len(low) != j_of(x, k, p, q, n):
        raise ValueError("x is not a cut point of F")
    rest_low = [i for i in range(1, x + 1) if i not in low]
    rest_high = [i for i in range(1, n - x + 1) if i not in high]
    # pi1 sends 1..j onto F ∩ [x]; pi2 sends 1..k onto F \ [x] (shifted)
    return BlockPermutation(x, tuple(low + rest_low), tuple(high + rest_high))
