from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, strategies as st

from tseq.tracker import (
    PAPER_DEFAULT,
    TrackerError,
    TrackerSpec,
    default_epsilon,
    exp_plus_square,
    gap_stats,
    growth_table,
    poly,
    preset_remark2,
    track,
    tracking_ratio_profile,
)
from tseq.zbase import CharacterBase, ModuliChain, QuadraticIrrational, factorial_chain, padic

TWO_ADIC = padic(2, 64)
SQ = TrackerSpec(poly(2), PAPER_DEFAULT, TWO_ADIC)


def brute_track(base, f, eps, cap):
    """Oracle: scan every integer of the interval at every level."""
    lo, hi = f - eps, f + eps
    pts = [x for x in range(int(lo) - 1, int(hi) + 2) if lo <= x <= hi]
    k = max(i for i in range(cap + 1) if any(base.member(i, x) for x in pts))
    best = [x for x in pts if base.member(k, x)]
    a = min(best, key=lambda x: (abs(x - f), x))
    return k, a


def test_default_epsilon_examples():
    assert default_epsilon(SQ, 5) == Fraction(5, 2)
    assert default_epsilon(SQ, 1) == 0
    assert default_epsilon(SQ, 2) == 1


def test_default_epsilon_growth_violation():
    spec = TrackerSpec(growth_table([0, 1, 4, 4, 9]), PAPER_DEFAULT, TWO_ADIC)
    with pytest.raises(TrackerError, match="growth violation"):
        default_epsilon(spec, 3)


def test_default_epsilon_bound_holds():
    for n in range(2, 500):
        eps = default_epsilon(SQ, n)
        f = n * n
        assert eps <= Fraction(1, 2) * min(isqrt(f), (n + 1) ** 2 - f, f - (n - 1) ** 2)
        assert 2 * eps <= isqrt(f)


def test_track_examples():
    seq = track(SQ, 5)
    got = {e.n: (e.a, e.k) for e in seq.entries}
    assert got[2] == (4, 2)
    assert got[3] == (8, 3)
    assert got[5] == (24, 3)
    assert got[1] == (1, 0)


@pytest.mark.parametrize("use_kernel", [True, False])
def test_track_matches_brute_force(use_kernel):
    seq = track(SQ, 300, use_kernel=use_kernel)
    for e in seq.entries:
        assert (e.k, e.a) == brute_track(TWO_ADIC, e.f, e.eps, 20), e.n


def test_track_factorial_chain_matches_brute_force():
    base = factorial_chain(12)
    spec = TrackerSpec(poly(3), lambda n: Fraction(n, 3), base)
    for e in track(spec, 200).entries:
        assert (e.k, e.a) == brute_track(base, e.f, e.eps, base.depth)


def test_track_character_base_matches_brute_force():
    base = CharacterBase(QuadraticIrrational(2), depth=12)
    spec = TrackerSpec(poly(2), PAPER_DEFAULT, base, level_cap=12)
    for e in track(spec, 60).entries:
        if not e.cap_limited:
            assert (e.k, e.a) == brute_track(base, e.f, e.eps, 12), e.n
        # maximality within the interval at the next level
        lo, hi = e.f - e.eps, e.f + e.eps
        if e.k < 12:
            assert not any(base.member(e.k + 1, x) for x in range(int(lo), int(hi) + 2) if lo <= x <= hi)


def test_track_character_cap_flagged():
    base = CharacterBase(QuadraticIrrational(2), depth=40)
    spec = TrackerSpec(poly(2), PAPER_DEFAULT, base, level_cap=3)
    seq = track(spec, 40)
    assert any(e.cap_limited for e in seq.entries)
    assert all(e.k <= 3 for e in seq.entries)


def test_track_negative_eps_rejected():
    spec = TrackerSpec(poly(2), lambda n: Fraction(-1), TWO_ADIC)
    with pytest.raises(TrackerError, match="empty interval"):
        track(spec, 3)


def test_invariants_tracked():
    seq = track(SQ, 2000)
    for e in seq.entries:
        assert abs(e.a - e.f) <= e.eps
        assert TWO_ADIC.member(e.k, e.a)
        if e.eps >= 1:
            assert e.k >= max(i for i in range(65) if 2**i <= 2 * e.eps)


def test_monotone_divergence_evidence():
    seq = track(SQ, 2**13 - 1)
    mins = []
    for j in range(1, 13):
        mins.append(min(e.k for e in seq.entries if 2**j <= e.n < 2 ** (j + 1)))
    assert mins == sorted(mins)


def test_ratio_profile():
    seq = track(SQ, 5)
    prof = {n: (d, b) for n, d, b in tracking_ratio_profile(seq)}
    assert prof[5] == (Fraction(1, 25), Fraction(1, 10))
    assert prof[1][0] == 0
    assert prof[2][0] == 0


def test_gap_stats_examples():
    lin = gap_stats(list(range(1, 101)), 10)
    assert lin["block_minima"] == [1] * 10
    assert lin["violates_at"] == 1
    pw = gap_stats([2**n for n in range(1, 17)], 4)
    assert pw["block_minima"] == [2, 32, 512, 8192]
    assert pw["violates_at"] is None


def test_gap_stats_tracked():
    vals = track(SQ, 2000).values()
    st_ = gap_stats(vals, 16)
    mins = st_["block_minima"]
    assert all(m > 10 for m in mins[4:])
    assert st_["violates_at"] is None


def test_gap_stats_rejects_non_increasing():
    with pytest.raises(TrackerError, match="not strictly increasing"):
        gap_stats([1, 3, 3, 4], 2)


def test_gap_stats_bigint_path():
    vals = [2**n for n in range(60, 80)]
    assert gap_stats(vals, 5)["block_minima"] == [2**60, 2**65, 2**70, 2**75]


def test_preset_remark2():
    base = factorial_chain(20)
    assert preset_remark2(2, base).f(3) == 17
    assert preset_remark2(Fraction(3, 2), base).f(1) == 2
    assert preset_remark2(2, base).f(1) == 3
    assert preset_remark2(2, base).epsilon(7) == 7
    with pytest.raises(TrackerError):
        preset_remark2(1, base)


@given(st.integers(1, 10**6))
def test_exp_plus_square_floor(n_small):
    n = n_small % 200 + 1
    f = exp_plus_square(Fraction(7, 5))
    assert f(n) == (7**n) // (5**n) + n * n
