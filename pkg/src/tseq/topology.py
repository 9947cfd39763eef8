"""Basic neighborhoods of the strongest group topology in which a sequence
converges to zero, and witnesses for non-closed diagonals of suprema.

For a sequence ``(a_n)`` and a nondecreasing slot sequence ``m_0 <= m_1 <= ...``
the basic neighborhood of zero is

    V(m) = union over k of (A_{m_0} + ... + A_{m_k}),  A_m = {0} ∪ {±a_n : n >= m}.

Summand indices need not be distinct.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Sequence

import numpy as np

from . import kernels
from .finvec import FinVec
from .reports import WitnessReport
from .seqs import IntSeq

__all__ = [
    "CanonicalNbhd",
    "TailSumQuery",
    "IntMembership",
    "member_nbhd_int",
    "member_nbhd_free",
    "member_nbhd_free_batch",
    "PackedVecs",
    "sup_witness_pairs",
    "diagonal_escape_report",
]


@dataclass(frozen=True)
class CanonicalNbhd:
    """Eventually constant slot sequence stored as ``((start_slot, value), ...)``.

    The first step starts at slot 0; the last value repeats forever.
    """

    steps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        steps = tuple((int(s), int(v)) for s, v in self.steps)
        if not steps or steps[0][0] != 0:
            raise ValueError("first step must start at slot 0")
        for (s0, v0), (s1, v1) in zip(steps, steps[1:]):
            if s1 <= s0 or v1 <= v0:
                raise ValueError("steps must have increasing starts and increasing values")
        if any(v < 0 for _, v in steps):
            raise ValueError("slot values must be natural numbers")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def from_prefix(cls, values: Sequence[int]) -> "CanonicalNbhd":
        """Slots ``values[0], values[1], ...`` with the last value repeated."""
        vals = [int(v) for v in values]
        if not vals:
            raise ValueError("empty slot list")
        steps = [(0, vals[0])]
        for j, v in enumerate(vals[1:], start=1):
            if v < steps[-1][1]:
                raise ValueError(f"slot values must be nondecreasing (slot {j})")
            if v > steps[-1][1]:
                steps.append((j, v))
        return cls(tuple(steps))

    @classmethod
    def parse(cls, text: str) -> "CanonicalNbhd":
        return cls.from_prefix([int(t) for t in text.split(",") if t.strip()])

    @classmethod
    def constant(cls, m: int) -> "CanonicalNbhd":
        return cls(((0, m),))

    def slot(self, j: int) -> int:
        k = bisect.bisect_right(self._starts, j) - 1
        return self.steps[k][1]

    @property
    def _starts(self) -> list[int]:
        return [s for s, _ in self.steps]

    def prefix(self, length: int) -> list[int]:
        return [self.slot(j) for j in range(length)]

    def dominates(self, other: "CanonicalNbhd", horizon: int | None = None) -> bool:
        """Pointwise ``self.slot(j) >= other.slot(j)``."""
        h = horizon or (max(self.steps[-1][0], other.steps[-1][0]) + 1)
        return all(self.slot(j) >= other.slot(j) for j in range(h)) and \
            self.steps[-1][1] >= other.steps[-1][1]

    def __str__(self):
        return ",".join(str(v) for v in self.prefix(self.steps[-1][0] + 1))


@dataclass(frozen=True)
class TailSumQuery:
    x: int
    nbhd: CanonicalNbhd
    depth_cap: int
    index_cap: int | None = None

    def __post_init__(self):
        if self.depth_cap < 1:
            raise ValueError("depth_cap must be at least 1")


@dataclass(frozen=True)
class IntMembership:
    member: bool
    summands: tuple[tuple[int, int], ...]  # (sign, index) per nonzero slot, slot order
    depth_cap: int
    index_cap: int

    @property
    def verdict(self) -> str:
        return "member" if self.member else "not-member-within-cap"


def member_nbhd_int(a: IntSeq, q: TailSumQuery) -> IntMembership:
    """Bounded search for ``x`` as a sum of at most ``depth_cap`` slot terms.

    Any representation can be rearranged so its nonzero terms fill a prefix of
    the slots with indices nondecreasing; opposite terms at the same index
    cancel and are never needed.  The search therefore walks nondecreasing index
    sequences, pruning by magnitude (``|residual| <= remaining * max|a|``) and
    by divisibility (``residual`` must lie in the subgroup generated by the
    usable values).  Indices are limited to ``index_cap``, by default two past
    the first index where ``a_n > |x|``.
    """
    x = q.x
    if x == 0:
        return IntMembership(True, (), q.depth_cap, 0)
    start = a.start
    cap = q.index_cap
    if cap is None:
        n = start
        while a[n] <= abs(x):
            n += 1
        cap = n + 2
    vals = a.upto(cap)
    prev = None
    for v in vals:
        if v <= 0 or (prev is not None and v <= prev):
            raise ValueError(f"{a.name} must be strictly increasing and positive")
        prev = v
    # suffix gcd / max over usable indices
    size = len(vals)
    sgcd = [0] * (size + 1)
    for i in range(size - 1, -1, -1):
        sgcd[i] = gcd(vals[i], sgcd[i + 1])
    vmax = vals[-1]
    slots = q.nbhd.prefix(q.depth_cap)

    @lru_cache(maxsize=None)
    def search(pos: int, prev: int, residual: int, last_sign: int):
        if residual == 0:
            return ()
        if pos == q.depth_cap:
            return None
        lo = max(prev, slots[pos] - start, 0)
        if lo >= size:
            return None
        if abs(residual) > (q.depth_cap - pos) * vmax or residual % sgcd[lo]:
            return None
        for i in range(lo, size):
            for sign in (1, -1) if residual > 0 else (-1, 1):
                if i == prev and sign == -last_sign:
                    continue
                rest = search(pos + 1, i, residual - sign * vals[i], sign)
                if rest is not None:
                    return ((sign, i + start),) + rest
        return None

    found = search(0, 0, x, 0)
    search.cache_clear()
    if found is None:
        return IntMembership(False, (), q.depth_cap, cap)
    assert sum(s * a[i] for s, i in found) == x
    return IntMembership(True, found, q.depth_cap, cap)


def member_nbhd_free(x: FinVec, nbhd: CanonicalNbhd) -> bool:
    """Exact membership of ``x`` in ``V(m)`` for the generator sequence ``(e_n)``.

    ``x`` needs ``|x_i|`` unit summands at index i and slot j accepts indices
    ``>= m_j``.  Because the slots are nondecreasing, a feasible assignment
    exists iff the ascending list of unit indices, matched to slots 0, 1, ...,
    satisfies ``m_j <= index_j`` (Hall's condition for nested neighborhoods).
    """
    pos = 0
    for i, c in x.items():
        pos += abs(c)
        if nbhd.slot(pos - 1) > i:
            return False
    return True


@dataclass(frozen=True)
class PackedVecs:
    """Unit-index lists of many vectors, concatenated for the batch kernel."""

    units: np.ndarray
    offsets: np.ndarray
    longest: int

    @classmethod
    def pack(cls, xs: Sequence[FinVec]) -> "PackedVecs":
        units: list[int] = []
        offsets = [0]
        longest = 1
        for x in xs:
            u = x.units()
            units.extend(u)
            offsets.append(len(units))
            longest = max(longest, len(u))
        return cls(np.array(units, dtype=np.int64), np.array(offsets, dtype=np.int64), longest)


def member_nbhd_free_batch(xs: "Sequence[FinVec] | PackedVecs", nbhd: CanonicalNbhd) -> np.ndarray:
    """Vectorised :func:`member_nbhd_free` over many vectors."""
    packed = xs if isinstance(xs, PackedVecs) else PackedVecs.pack(xs)
    slots = np.array(nbhd.prefix(packed.longest), dtype=np.int64)
    return kernels.slot_feasible(packed.units, packed.offsets, slots)


def sup_witness_pairs(a: IntSeq, b: IntSeq, g: int, N: int) -> list[tuple[int, int]]:
    """All ``(n, m)`` with indices ``<= N`` and ``b_m - a_n = g``, sorted."""
    if g == 0:
        raise ValueError("g must be non-zero")
    where: dict[int, list[int]] = {}
    for n in range(a.start, N + 1):
        where.setdefault(a[n], []).append(n)
    pairs = []
    for m in range(b.start, N + 1):
        for n in where.get(b[m] - g, ()):
            pairs.append((n, m))
    pairs.sort()
    return pairs


def _grid(lo: int, N: int, points: int = 12) -> list[int]:
    if N - lo + 1 <= points:
        return list(range(lo, N + 1))
    step = (N - lo) / (points - 1)
    return sorted({lo + round(k * step) for k in range(points)})


def diagonal_escape_report(a: IntSeq, b: IntSeq, g: int, N: int) -> WitnessReport:
    """Finite evidence that ``g = b_m - a_n`` with ``n, m >= n0`` for every ``n0 <= N``."""
    pairs = sup_witness_pairs(a, b, g, N)
    lo = min(a.start, b.start)
    # best[n0]: a pair with min index >= n0, chosen lexicographically smallest
    by_min: dict[int, tuple[int, int]] = {}
    for p in pairs:
        by_min.setdefault(min(p), p)
    reach = max((min(p) for p in pairs), default=None)
    evidence = []
    for n0 in _grid(lo, N):
        cands = [p for k, p in by_min.items() if k >= n0]
        evidence.append({"n0": n0, "pair": list(min(cands)) if cands else None})
    certified = reach is not None and reach >= N
    return WitnessReport(
        claim="thm5-diagonal-escape",
        params={"a": a.provenance, "b": b.provenance, "g": g, "N": N},
        evidence=evidence,
        verdict="certified" if certified else "inconclusive",
        bounds={"N": N, "pairs_found": len(pairs),
                "largest_pair": list(max(pairs, key=lambda p: (min(p), p))) if pairs else None},
    )
