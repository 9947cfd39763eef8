from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tseq.finvec import FinVec, FinVecSyntaxError, e, parse_finvec
from tseq.seqs import SeqError, floor_pow, from_expr, parse_expr, parse_fraction, pow2, pow_seq, shifted, table


def test_parse_finvec_examples():
    assert dict(parse_finvec("3e0-2e7").items()) == {0: 3, 7: -2}
    assert parse_finvec("e1+e1") == 2 * e(1)
    assert parse_finvec("e1-e1") == FinVec()
    assert parse_finvec("0") == FinVec()
    assert parse_finvec("-e3 + 4*e2") == FinVec({2: 4, 3: -1})


@pytest.mark.parametrize("bad, pos", [("3e0 2e1", 4), ("", 0), ("3x1", 0), ("e1+", 2)])
def test_parse_finvec_errors(bad, pos):
    with pytest.raises(FinVecSyntaxError) as exc:
        parse_finvec(bad)
    assert exc.value.pos == pos


@given(st.lists(st.tuples(st.integers(0, 50), st.integers(-10**30, 10**30)), max_size=8))
def test_finvec_text_and_json_roundtrip(items):
    x = FinVec(items)
    assert parse_finvec(str(x)) == x
    assert FinVec.from_json(x.to_json()) == x
    assert list(x) == sorted(x)
    assert 0 not in dict(x.items()).values()


def test_finvec_json_form():
    assert parse_finvec("3e0-2e7").to_json() == [[0, "3"], [7, "-2"]]


def test_parse_fraction():
    assert parse_fraction("3/2") == Fraction(3, 2)
    assert parse_fraction("-7") == -7
    with pytest.raises(SeqError):
        parse_fraction("3/0")
    with pytest.raises(SeqError):
        parse_fraction("1.5")


def test_expressions():
    assert from_expr("2^n+1").upto(4) == [2, 3, 5, 9, 17]
    assert from_expr("n^2").upto(3) == [0, 1, 4, 9]
    assert from_expr("(3/2)^n+n^2").upto(3) == [floor_pow(Fraction(3, 2), n) + n * n for n in range(4)]
    assert from_expr("3*n^2 - 1")[4] == 47
    assert parse_expr("2^(n+1)")(3) == 16
    with pytest.raises(SeqError):
        parse_expr("2^^n")
    with pytest.raises(SeqError):
        parse_expr("n + $")


def test_presets_and_laziness():
    s = pow2()
    assert s.upto(5) == [1, 2, 4, 8, 16, 32]
    assert pow_seq(Fraction(3, 2))[4] == 5
    sh = shifted(s, 5)
    assert sh[3] == 13 and sh.provenance["params"]["c"] == "5"
    t = table([4, 9, 16], start=2)
    assert t[3] == 9
    with pytest.raises(IndexError):
        t[5]
    big = pow2()[4000]
    assert big == 1 << 4000
