import math
import random

import pytest

from tiltsperner.chains import fx_bound
from tiltsperner.concentration import (
    BandSpec,
    OutsideLemmaDomain,
    band_bound,
    chernoff_dominates,
    chernoff_rhs,
    count_band_family,
    count_band_family_brute,
    cut_point_window_check,
    explicit_upper_bound,
    floor_scaled_nlogn,
    in_band_family,
    per_x_violators,
    sample_outside_band,
    window,
)
from tiltsperner.core import mask_from_elements

import oracles


def test_band_examples():
    spec4 = BandSpec(4)
    assert not any(in_band_family(G, spec4) for G in range(16))
    assert in_band_family((1 << 50) - 1, BandSpec(50))
    for n in range(2, 61):
        alternating = mask_from_elements(range(1, n + 1, 2), n)
        assert not in_band_family(alternating, BandSpec(n))


def test_integer_threshold():
    for n in range(2, 63):
        lim = BandSpec(n).limit
        assert lim <= 4 * n * math.log(n) < lim + 1
    assert floor_scaled_nlogn(1, 4) == 0


def test_custom_threshold():
    spec = BandSpec(6, threshold=1.0)
    # walk value s = 2c - x leaves the band when s^2 > 4
    assert spec.limit == 4
    assert in_band_family(0b000111, spec)
    assert not in_band_family(0b010101, spec)


@pytest.mark.parametrize("n", range(1, 13))
def test_dp_matches_brute_force(n):
    spec = BandSpec(n)
    assert count_band_family(spec) == count_band_family_brute(spec) == oracles.band_count(n)


def test_small_n_band_is_empty():
    assert count_band_family(BandSpec(4)) == 0


def test_chernoff_rhs_examples():
    n = 40
    T = math.sqrt(n * math.log(n))
    assert chernoff_rhs(n, n, T) == pytest.approx(2 / n**2)
    assert chernoff_rhs(n, n // 2, T) == pytest.approx(2 / n**4)
    assert chernoff_rhs(n, 3, 0.0) == 2.0
    with pytest.raises(ValueError):
        chernoff_rhs(n, 0, T)


def test_per_x_violators_brute():
    n = 12
    spec = BandSpec(n, threshold=1.5)
    for x in range(1, n + 1):
        brute = sum(
            1 for G in range(1 << n) if (2 * bin(G & ((1 << x) - 1)).count("1") - x) ** 2 > spec.limit
        )
        assert per_x_violators(spec, x) == brute


@pytest.mark.parametrize("n", [10, 25, 40, 60])
def test_per_x_hoeffding(n):
    spec = BandSpec(n)
    assert all(chernoff_dominates(spec, x) for x in range(1, n + 1))


def test_band_lemma_constant():
    for n in range(10, 61):
        assert count_band_family(BandSpec(n)) <= band_bound(n)


def test_window_saturates_at_desk_scale():
    for n in range(2, 63):
        for p, q in [(1, 1), (1, 2), (2, 3)]:
            assert window(n, p, q) == (0, n)


def test_window_matches_scan():
    for n in (3, 17, 1000, 10**5):
        for p, q in [(1, 1), (1, 2), (2, 3)]:
            lim = 64 * (p + q) ** 2 * n * math.log(n)
            centre = p * n
            lo, hi = window(n, p, q)
            for x in {lo, hi} | ({lo - 1} if lo > 0 else set()) | ({hi + 1} if hi < n else set()):
                inside = ((p + q) * x - centre) ** 2 <= lim
                assert inside == (lo <= x <= hi)
    lo, hi = window(10**5, 1, 1)
    assert 0 < lo < 50_000 < hi < 10**5


def test_window_check_examples():
    rng = random.Random(3)
    for F in sample_outside_band(60, 50, seed=1):
        v = cut_point_window_check(F, 1, 1, 60)
        assert v.ok
        assert v.radius == pytest.approx(8 * math.sqrt(60 * math.log(60)))
    # the empty set leaves the band at large n, so the window lemma does not apply
    assert in_band_family(0, BandSpec(60))
    with pytest.raises(OutsideLemmaDomain):
        cut_point_window_check(0, 1, 2, 60)
    with pytest.raises(ValueError):
        cut_point_window_check(rng.getrandbits(10), 2, 1, 10)


def test_explicit_upper_bound_saturated():
    for n in (2, 4, 8, 12):
        for p, q in [(1, 2), (1, 1), (2, 3)]:
            expected = count_band_family(BandSpec(n)) + sum(fx_bound(x, n, q) for x in range(n + 1))
            assert explicit_upper_bound(n, p, q) == expected
    assert explicit_upper_bound(4, 1, 2) >= 12
    assert explicit_upper_bound(6, 2, 1) == explicit_upper_bound(6, 1, 2)


# bound / (2^n / sqrt(n)) at powers of two, frozen from explicit_upper_bound
RATIOS_12 = {2: 3.535534, 4: 5.5, 8: 8.529476, 16: 13.034668, 32: 19.554599}


def test_scale_ratio_regression():
    for n, r in RATIOS_12.items():
        assert explicit_upper_bound(n, 1, 2) / (2**n / math.sqrt(n)) == pytest.approx(r, rel=1e-6)
