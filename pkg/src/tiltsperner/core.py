"""Subsets of [n] as bit masks, tilt parameters and the forbidden-pair predicate.

Element ``i`` of the ground set ``[n] = {1, ..., n}`` is stored in bit ``i - 1``.
A family is a sorted tuple of distinct masks.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator

MAX_N = 62


class FamilyFormatError(ValueError):
    """Raised for malformed family JSON; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class GroundSpec:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_N:
            raise ValueError(f"n must be an integer in [1, {MAX_N}], got {self.n!r}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1


@dataclass(frozen=True)
class TiltParams:
    """Forbidden-configuration parameters.

    ``p = q = 0`` is only meaningful with ``patterns=True``: the pair condition on
    sizes is dropped and only the ordering condition remains.
    """

    p: int
    q: int
    patterns: bool = True

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"p and q must be nonnegative, got ({self.p}, {self.q})")
        if self.p == 0 and self.q == 0 and not self.patterns:
            raise ValueError("p = q = 0 requires patterns=True")

    @property
    def is_zero_variant(self) -> bool:
        return self.p == 0 and self.q == 0


def normalize_params(params: TiltParams) -> TiltParams:
    g = gcd(params.p, params.q)
    if g <= 1:
        return params
    return TiltParams(params.p // g, params.q // g, params.patterns)


# --- masks -----------------------------------------------------------------

def mask_from_elements(elements: Iterable[int], n: int) -> int:
    mask = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside [1, {n}]")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def prefix_mask(x: int) -> int:
    """Mask of [x] = {1, ..., x}."""
    return (1 << x) - 1


def mirror(mask: int, n: int) -> int:
    """Complement-and-reverse: i is in the image iff n + 1 - i is not in ``mask``.

    Maps forbidden (p, q) pairs exactly onto forbidden (q, p) pairs, same orientation.
    """
    comp = ~mask & ((1 << n) - 1)
    return int(format(comp, f"0{n}b")[::-1], 2)


def check_mask(mask: int, n: int) -> None:
    if mask < 0 or mask >> n:
        raise ValueError(f"mask {mask:#x} has bits outside [1, {n}]")


# --- predicate ---------------------------------------------------------------

def is_forbidden_ordered(F: int, G: int, params: TiltParams, n: int | None = None) -> bool:
    """True iff (F, G) is a forbidden ordered pair.

    Size condition: ``p |F \\ G| = q |G \\ F|`` (skipped for the (0, 0) variant).
    Ordering condition (patterns only): every element of F \\ G exceeds every
    element of G \\ F, vacuous when either difference is empty.
    """
    if n is not None:
        check_mask(F, n)
        check_mask(G, n)
    if F == G:
        return False
    a = F & ~G
    b = G & ~F
    if not params.is_zero_variant and params.p * popcount(a) != params.q * popcount(b):
        return False
    if not params.patterns or a == 0 or b == 0:
        return True
    # min(F \ G) > max(G \ F)
    return (a & -a).bit_length() > b.bit_length()


def is_conflicting_pair(F: int, G: int, params: TiltParams, n: int | None = None) -> bool:
    return is_forbidden_ordered(F, G, params, n) or is_forbidden_ordered(G, F, params, n)


# --- families ----------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    n: int
    members: tuple[int, ...] = field(default=())

    def __post_init__(self):
        GroundSpec(self.n)
        ms = tuple(sorted(set(self.members)))
        if len(ms) != len(self.members):
            raise ValueError("family has duplicate members")
        for m in ms:
            check_mask(m, self.n)
        object.__setattr__(self, "members", ms)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "Family":
        return cls(n, tuple(sorted(set(masks))))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls.from_masks(n, (mask_from_elements(s, n) for s in sets))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: object) -> bool:
        return mask in set(self.members)

    def as_sets(self) -> list[list[int]]:
        return [elements_of(m) for m in self.members]


@dataclass
class Verdict:
    valid: bool
    conflicts: list[tuple[int, int]]

    def __bool__(self) -> bool:
        return self.valid


def verify_family(fam: Family, params: TiltParams, max_conflicts: int | None = None) -> Verdict:
    """Naive O(|fam|^2) validity check.

    Each conflicting pair is reported once, oriented so the first set is the
    one playing F in a forbidden ordered pair.
    """
    conflicts: list[tuple[int, int]] = []
    ms = fam.members
    for i, F in enumerate(ms):
        for G in ms[i + 1:]:
            if is_forbidden_ordered(F, G, params):
                conflicts.append((F, G))
            elif is_forbidden_ordered(G, F, params):
                conflicts.append((G, F))
            else:
                continue
            if max_conflicts is not None and len(conflicts) >= max_conflicts:
                return Verdict(False, conflicts)
    return Verdict(not conflicts, conflicts)


# --- JSON --------------------------------------------------------------------

def _require_int(doc: dict, key: str, lo: int, hi: int | None = None) -> int:
    if key not in doc:
        raise FamilyFormatError(key, "missing")
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise FamilyFormatError(key, f"expected integer, got {v!r}")
    if v < lo or (hi is not None and v > hi):
        raise FamilyFormatError(key, f"value {v} out of range")
    return v


def family_from_json(doc: dict | str) -> tuple[Family, TiltParams]:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise FamilyFormatError("json", str(exc)) from None
    if not isinstance(doc, dict):
        raise FamilyFormatError("json", "top-level value must be an object")
    n = _require_int(doc, "n", 1, MAX_N)
    p = _require_int(doc, "p", 0)
    q = _require_int(doc, "q", 0)
    patterns = doc.get("patterns", True)
    if not isinstance(patterns, bool):
        raise FamilyFormatError("patterns", f"expected boolean, got {patterns!r}")
    try:
        params = TiltParams(p, q, patterns)
    except ValueError as exc:
        raise FamilyFormatError("p", str(exc)) from None
    sets = doc.get("sets")
    if not isinstance(sets, list):
        raise FamilyFormatError("sets", "expected a list of element lists")
    masks = []
    for idx, s in enumerate(sets):
        where = f"sets[{idx}]"
        if not isinstance(s, list) or any(isinstance(e, bool) or not isinstance(e, int) for e in s):
            raise FamilyFormatError(where, "expected a list of integers")
        if any(b <= a for a, b in zip(s, s[1:])):
            raise FamilyFormatError(where, "elements must be strictly increasing")
        if s and (s[0] < 1 or s[-1] > n):
            raise FamilyFormatError(where, f"elements must lie in [1, {n}]")
        masks.append(mask_from_elements(s, n))
    if len(set(masks)) != len(masks):
        raise FamilyFormatError("sets", "duplicate sets")
    return Family.from_masks(n, masks), params


def family_to_json(fam: Family, params: TiltParams) -> dict:
    return {
        "n": fam.n,
        "p": params.p,
        "q": params.q,
        "patterns": params.patterns,
        "sets": fam.as_sets(),
    }


def all_masks(n: int) -> range:
    return range(1 << n)


def masks_by_level(n: int) -> list[list[int]]:
    levels: list[list[int]] = [[] for _ in range(n + 1)]
    for m in range(1 << n):
        levels[popcount(m)].append(m)
    return levels
