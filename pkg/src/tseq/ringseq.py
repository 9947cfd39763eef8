"""Ratio-r integer sequences that cannot converge to zero in any ring topology.

For rational ``r > 1`` the sequence is ``a_n = floor(r**n)``, except at the
special indices ``n = 2*3**k`` (``k >= 1``) where ``a_n = floor(r**(n/2))**2 + 1``.
Then ``a_{2*3^k} - a_{3^k}**2 = 1`` for every k, which rules out a ring topology
in which ``a_n -> 0``: both terms would tend to zero while their difference is 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .reports import WitnessReport
from .seqs import IntSeq, floor_pow as _floor_pow

__all__ = [
    "RatioTarget",
    "RingSeq",
    "floor_pow",
    "is_special",
    "special_indices",
    "gen_theorem2",
    "obstruction_witnesses",
    "obstruction_report",
    "ratio_profile",
    "block_profile",
    "ring_seq",
]


@dataclass(frozen=True)
class RatioTarget:
    r: Fraction

    def __post_init__(self):
        r = Fraction(self.r)
        object.__setattr__(self, "r", r)
        if r <= 1:
            raise ValueError(f"ratio must exceed 1, got {r}")


def floor_pow(r: RatioTarget | Fraction, n: int) -> int:
    """``floor(r**n)`` computed as ``p**n // q**n``."""
    if isinstance(r, RatioTarget):
        r = r.r
    return _floor_pow(r, n)


def is_special(n: int) -> bool:
    """True iff ``n = 2*3**k`` for some ``k >= 1``."""
    if n < 6 or n % 2:
        return False
    m = n // 2
    while m % 3 == 0:
        m //= 3
    return m == 1


def special_indices(N: int) -> list[int]:
    out, s = [], 6
    while s <= N:
        out.append(s)
        s *= 3
    return out


def _term(r: Fraction, n: int) -> int:
    if is_special(n):
        return _floor_pow(r, n // 2) ** 2 + 1
    return _floor_pow(r, n)


@dataclass(frozen=True)
class RingSeq:
    r: Fraction
    values: tuple[int, ...]  # a_1 .. a_N
    special: tuple[int, ...]

    @property
    def N(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.N:
            raise IndexError(f"index {n} outside 1..{self.N}")
        return self.values[n - 1]


def gen_theorem2(r: RatioTarget | Fraction, N: int) -> RingSeq:
    if not isinstance(r, RatioTarget):
        r = RatioTarget(r)
    if N < 1:
        raise ValueError("N must be positive")
    vals = tuple(_term(r.r, n) for n in range(1, N + 1))
    return RingSeq(r.r, vals, tuple(special_indices(N)))


def ring_seq(r) -> IntSeq:
    """The same sequence as a lazy :class:`IntSeq`."""
    r = RatioTarget(r).r
    return IntSeq(lambda n: _term(r, n), "thm2", {"r": r})


def obstruction_witnesses(seq: RingSeq, kmax: int) -> list[tuple[int, int]]:
    """``(k, a_{2*3^k} - a_{3^k}**2)`` for ``k = 1..kmax``."""
    if 2 * 3**kmax > seq.N:
        raise IndexError(f"2*3^{kmax} = {2 * 3**kmax} exceeds N = {seq.N}")
    return [(k, seq[2 * 3**k] - seq[3**k] ** 2) for k in range(1, kmax + 1)]


def obstruction_report(seq: RingSeq, kmax: int) -> WitnessReport:
    wits = obstruction_witnesses(seq, kmax)
    ok = all(v == 1 for _, v in wits)
    return WitnessReport(
        claim="thm2-ring-obstruction",
        params={"r": seq.r, "N": seq.N, "kmax": kmax},
        evidence=[{"k": k, "index": 2 * 3**k, "difference": v} for k, v in wits],
        verdict="certified" if ok else "refuted",
        bounds={"kmax": kmax},
    )


def ratio_profile(seq: RingSeq, start: int, stop: int) -> Fraction:
    """``max |a_{n+1}/a_n - r|`` over ``start <= n < stop``, exactly."""
    if not 1 <= start < stop <= seq.N:
        raise ValueError(f"need 1 <= from < to <= N, got [{start}, {stop}) with N = {seq.N}")
    worst = Fraction(0)
    for n in range(start, stop):
        a = seq[n]
        if a == 0:
            raise ZeroDivisionError(f"a_{n} = 0")
        worst = max(worst, abs(Fraction(seq[n + 1], a) - seq.r))
    return worst


def block_profile(seq: RingSeq) -> list[dict]:
    """Maximum ratio deviation per dyadic block ``[2^j, 2^{j+1})``.

    ``clean`` is False for blocks that contain a special index or its successor.
    """
    out = []
    j = 0
    while 2**j < seq.N:
        lo, hi = 2**j, min(2 ** (j + 1), seq.N)
        touched = any(lo <= s < hi or lo <= s + 1 < hi for s in seq.special)
        out.append({"j": j, "from": lo, "to": hi,
                     "max_deviation": ratio_profile(seq, lo, hi), "clean": not touched})
        j += 1
    return out
