import random

import pytest
from hypothesis import given, strategies as st

from tseq.finvec import FinVec, e, parse_finvec
from tseq.seqs import from_expr, pow2, pow_seq, shifted, table
from tseq.ringseq import ring_seq
from tseq.topology import (
    CanonicalNbhd,
    TailSumQuery,
    diagonal_escape_report,
    member_nbhd_free,
    member_nbhd_free_batch,
    member_nbhd_int,
    sup_witness_pairs,
)

from oracles import pairs_quadratic, slot_assignment_exists, tail_sum_member


def random_nbhd(rng, max_value=8, max_steps=4):
    vals = sorted(rng.randint(0, max_value) for _ in range(rng.randint(1, max_steps)))
    starts = sorted(rng.sample(range(1, 8), len(vals) - 1))
    pref = []
    for j in range((starts[-1] if starts else 0) + 1):
        k = sum(1 for s in starts if s <= j)
        pref.append(vals[k])
    return CanonicalNbhd.from_prefix(pref)


# -- canonical neighborhoods ------------------------------------------------

def test_canonical_encoding():
    nb = CanonicalNbhd.from_prefix([0, 2, 2, 5])
    assert nb.steps == ((0, 0), (1, 2), (3, 5))
    assert nb.prefix(6) == [0, 2, 2, 5, 5, 5]
    assert CanonicalNbhd.parse("2,2") == CanonicalNbhd.constant(2)
    with pytest.raises(ValueError):
        CanonicalNbhd.from_prefix([3, 1])
    with pytest.raises(ValueError):
        CanonicalNbhd(((0, 1), (2, 1)))


# -- free-group membership ---------------------------------------------------

def test_free_examples():
    assert member_nbhd_free(parse_finvec("e3+e5"), CanonicalNbhd.parse("2,2"))
    assert not member_nbhd_free(2 * e(1), CanonicalNbhd.parse("0,2"))
    assert member_nbhd_free(FinVec(), CanonicalNbhd.constant(7))


def test_free_matches_brute_force_random():
    rng = random.Random(7)
    for _ in range(60):
        nb = random_nbhd(rng)
        for _ in range(80):
            x = FinVec((rng.randrange(10), rng.randint(-3, 3)) for _ in range(rng.randint(0, 4)))
            expect = slot_assignment_exists(x.units(), nb.slot, nb.steps[-1][0])
            assert member_nbhd_free(x, nb) == expect, (x, nb)


def test_free_batch_agrees_with_scalar():
    rng = random.Random(11)
    xs = [FinVec((rng.randrange(12), rng.randint(-4, 4)) for _ in range(rng.randint(0, 5))) for _ in range(500)]
    for _ in range(20):
        nb = random_nbhd(rng, 10)
        assert list(member_nbhd_free_batch(xs, nb)) == [member_nbhd_free(x, nb) for x in xs]


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(-3, 3)), max_size=5),
       st.lists(st.integers(0, 6), min_size=1, max_size=6),
       st.lists(st.integers(0, 3), min_size=1, max_size=6))
def test_free_monotone_in_slots(items, base, bumps):
    base = sorted(base)
    nb = CanonicalNbhd.from_prefix(base)
    n = max(len(base), len(bumps))
    bigger = [nb.slot(j) + (bumps[j] if j < len(bumps) else bumps[-1]) for j in range(n)]
    bigger = [max(bigger[: j + 1]) for j in range(n)]
    nb2 = CanonicalNbhd.from_prefix(bigger)
    x = FinVec(items)
    if member_nbhd_free(x, nb2):
        assert member_nbhd_free(x, nb)


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(-3, 3)), max_size=4),
       st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_free_symmetric(items, slots):
    nb = CanonicalNbhd.from_prefix(sorted(slots))
    x = FinVec(items)
    assert member_nbhd_free(x, nb) == member_nbhd_free(-x, nb)


# -- integer membership -----------------------------------------------------

def test_int_examples():
    r = member_nbhd_int(pow2(), TailSumQuery(12, CanonicalNbhd.constant(0), 2))
    assert r.member and sorted(pow2()[i] * s for s, i in r.summands) == [4, 8]
    assert member_nbhd_int(pow2(), TailSumQuery(0, CanonicalNbhd.constant(3), 1)).member
    r = member_nbhd_int(pow2(), TailSumQuery(1, CanonicalNbhd.constant(1), 10))
    assert r.verdict == "not-member-within-cap"


def test_int_rejects_non_monotone():
    with pytest.raises(ValueError):
        member_nbhd_int(table([1, 3, 2, 5, 9, 20]), TailSumQuery(7, CanonicalNbhd.constant(0), 2, index_cap=5))


@pytest.mark.parametrize("seq", [pow2(), from_expr("n^2+1"), pow_seq(3), from_expr("3*n+2")])
def test_int_matches_brute_force(seq):
    rng = random.Random(3)
    index_cap = 6
    vals = seq.upto(index_cap)
    for _ in range(40):
        nb = random_nbhd(rng, 4, 3)
        depth = rng.randint(1, 3)
        slots = nb.prefix(depth)
        for x in range(-40, 41):
            got = member_nbhd_int(seq, TailSumQuery(x, nb, depth, index_cap=index_cap))
            assert got.member == tail_sum_member(vals, 0, slots, depth, index_cap, x), (x, slots)
            if got.member:
                assert sum(s * seq[i] for s, i in got.summands) == x
                assert all(i >= nb.slot(j) for j, (_, i) in enumerate(got.summands))


# -- supremum witnesses ------------------------------------------------------

def test_sup_examples():
    a = pow2()
    assert sup_witness_pairs(a, shifted(a, 7), 7, 100) == [(n, n) for n in range(101)]
    assert sup_witness_pairs(pow2(), pow_seq(3), 1, 20) == [(1, 1), (3, 2)]
    assert sup_witness_pairs(pow2(), pow2(), 5, 20) == []
    with pytest.raises(ValueError, match="non-zero"):
        sup_witness_pairs(a, a, 0, 5)


@pytest.mark.parametrize("a, b, g", [
    (pow2(), pow_seq(3), 1),
    (from_expr("n^2"), from_expr("n^2+2*n"), 1),
    (ring_seq(2), pow2(), 1),
    (from_expr("n^2"), from_expr("n^2"), 15),
])
def test_sup_complete_against_quadratic(a, b, g):
    N = 200
    assert sup_witness_pairs(a, b, g, N) == pairs_quadratic(a.upto(N), b.upto(N), g)


def test_diagonal_reports():
    a = pow2()
    rep = diagonal_escape_report(a, shifted(a, 3), 3, 1000)
    assert rep.verdict == "certified"
    assert all(ev["pair"] == [ev["n0"], ev["n0"]] for ev in rep.evidence)
    rep = diagonal_escape_report(pow2(), pow_seq(3), 1, 1000)
    assert rep.verdict == "inconclusive"
    assert rep.bounds["largest_pair"] == [3, 2]
    rep = diagonal_escape_report(a, shifted(a, 1), 2, 200)
    assert rep.verdict == "inconclusive"
