"""Cut points of a subset: where the weighted prefix count of A meets the
weighted count of non-members above it.

For ``u`` in ``{0, ..., n}``::

    f(A, u) = |A ∩ [u]| / p
    g(A, u) = (n - u - |A \\ [u]|) / q

``x`` is a cut point of ``A`` when ``0 <= g(A, x) - f(A, x) < 1/p``.  Position 0
is allowed: for ``A = [n]`` it is the only cut point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import popcount, prefix_mask


class NoCutPoint(ValueError):
    pass


def _missing(A: int, p: int, q: int, n: int):
    msg = f"no cut point for A={A:#x}, n={n}, (p,q)=({p},{q})"
    if p > q:
        return NoCutPoint(msg + "; existence needs p <= q")
    return AssertionError(msg)


def _check_u(u: int, n: int) -> None:
    if not 0 <= u <= n:
        raise ValueError(f"u={u} outside [0, {n}]")


def f_value(A: int, u: int, p: int, n: int) -> Fraction:
    _check_u(u, n)
    return Fraction(popcount(A & prefix_mask(u)), p)


def g_value(A: int, u: int, q: int, n: int) -> Fraction:
    _check_u(u, n)
    return Fraction(n - u - popcount(A >> u), q)


def is_cut_point(A: int, x: int, p: int, q: int, n: int) -> bool:
    # p*q*(g - f) in [0, q), all in integers
    a = popcount(A & prefix_mask(x))
    k = popcount(A >> x)
    d = p * (n - x - k) - q * a
    return 0 <= d < q


@dataclass(frozen=True)
class CutPointReport:
    set: int
    n: int
    p: int
    q: int
    cutpoints: tuple[int, ...]
    trace: tuple[tuple[Fraction, Fraction], ...] | None = None


def cut_points(A: int, p: int, q: int, n: int, trace: bool = False) -> CutPointReport:
    if p < 1 or q < 1:
        raise ValueError("cut points need p, q >= 1")
    found = []
    rows = []
    a = 0  # |A ∩ [u]|
    k = popcount(A)  # |A \ [u]|
    for u in range(n + 1):
        if u:
            if A >> (u - 1) & 1:
                a += 1
                k -= 1
        d = p * (n - u - k) - q * a
        if 0 <= d < q:
            found.append(u)
        if trace:
            rows.append((Fraction(a, p), Fraction(n - u - k, q)))
    if not found:
        raise _missing(A, p, q, n)
    return CutPointReport(A, n, p, q, tuple(found), tuple(rows) if trace else None)


def choose_cut_point(A: int, p: int, q: int, n: int) -> int:
    """Smallest cut point; this fixes the partition of a family by position."""
    a = 0
    k = popcount(A)
    for u in range(n + 1):
        if u and A >> (u - 1) & 1:
            a += 1
            k -= 1
        d = p * (n - u - k) - q * a
        if 0 <= d < q:
            return u
    raise _missing(A, p, q, n)


def floor_equivalence_check(A: int, x: int, p: int, q: int, n: int) -> bool:
    """Whether |A ∩ [x]| equals floor((p/q) * (n - x - |A \\ [x]|))."""
    _check_u(x, n)
    k = popcount(A >> x)
    return popcount(A & prefix_mask(x)) == (p * (n - x - k)) // q
