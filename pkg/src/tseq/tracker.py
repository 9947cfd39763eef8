"""Greedy tracking of a growth function by a sequence that converges to zero.

Given a strictly increasing ``f: N -> N``, a tolerance ``eps`` and a countable
base ``U_0 ⊇ U_1 ⊇ ...`` of a metrizable totally bounded topology on Z, each
index n picks the deepest level ``k(n)`` whose neighborhood meets
``I_n = [f(n) - eps(n), f(n) + eps(n)]`` and a point ``a_n`` of ``U_{k(n)} ∩ I_n``.
Then ``|a_n - f(n)| <= eps(n)`` and ``k(n) -> inf``, so ``a_n -> 0`` in the
topology while ``a_n / f(n) -> 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Sequence, Union

from . import kernels
from ._accel import INT64_SAFE
from .seqs import IntSeq, floor_pow, parse_expr, table
from .zbase import CharacterBase, ModuliChain, NeighborhoodBase

__all__ = [
    "TrackerError",
    "GrowthFn",
    "TrackerSpec",
    "TrackedEntry",
    "TrackedSeq",
    "poly",
    "exp_plus_square",
    "growth_table",
    "growth_expr",
    "default_epsilon",
    "track",
    "tracking_ratio_profile",
    "gap_stats",
    "preset_remark2",
    "PAPER_DEFAULT",
]

PAPER_DEFAULT = "paper-default"


class TrackerError(ValueError):
    pass


@dataclass(frozen=True)
class GrowthFn:
    fn: Callable[[int], int] = field(compare=False)
    name: str

    def __call__(self, n: int) -> int:
        return self.fn(n)


def poly(d: int) -> GrowthFn:
    return GrowthFn(lambda n: n**d, f"n^{d}")


def exp_plus_square(r) -> GrowthFn:
    """``floor(r**n) + n**2``."""
    r = Fraction(r)
    return GrowthFn(lambda n: floor_pow(r, n) + n * n, f"({r})^n+n^2")


def growth_table(values: Sequence[int], start: int = 0) -> GrowthFn:
    vals = [int(v) for v in values]

    def f(n):
        if not start <= n < start + len(vals):
            raise TrackerError(f"growth table has no value at n={n}")
        return vals[n - start]

    return GrowthFn(f, "table")


def growth_expr(text: str) -> GrowthFn:
    return GrowthFn(parse_expr(text), text)


EpsFn = Union[str, Callable[[int], Fraction]]


@dataclass(frozen=True)
class TrackerSpec:
    f: GrowthFn
    eps: EpsFn
    base: NeighborhoodBase
    level_cap: int = 64

    def epsilon(self, n: int) -> Fraction:
        if self.eps == PAPER_DEFAULT:
            return default_epsilon(self, n)
        v = Fraction(self.eps(n))
        if v < 0:
            raise TrackerError(f"eps({n}) = {v} is negative: empty interval")
        return v


def default_epsilon(spec: TrackerSpec, n: int) -> Fraction:
    """0 at n = 1, else ``min(isqrt(f(n)), f(n+1)-f(n), f(n)-f(n-1)) / 2``."""
    if n < 1:
        raise TrackerError("n must be at least 1")
    if n == 1:
        return Fraction(0)
    f = spec.f
    prev, cur, nxt = f(n - 1), f(n), f(n + 1)
    if not prev < cur < nxt:
        raise TrackerError(f"growth violation: f is not strictly increasing around n={n}")
    return Fraction(min(isqrt(cur), nxt - cur, cur - prev), 2)


@dataclass(frozen=True)
class TrackedEntry:
    n: int
    f: int
    eps: Fraction
    a: int
    k: int
    cap_limited: bool = False


@dataclass(frozen=True)
class TrackedSeq:
    spec: TrackerSpec = field(repr=False)
    entries: tuple[TrackedEntry, ...]

    def __len__(self):
        return len(self.entries)

    def values(self) -> list[int]:
        return [e.a for e in self.entries]

    def as_intseq(self) -> IntSeq:
        s = table(self.values(), start=self.entries[0].n, name="tracked")
        s.params.update({"f": self.spec.f.name})
        return s


def _int_interval(f: int, eps: Fraction) -> tuple[int, int]:
    lo = f - eps
    hi = f + eps
    return -((-lo.numerator) // lo.denominator), hi.numerator // hi.denominator


def _closest(points, f: int) -> int:
    return min(points, key=lambda x: (abs(x - f), x))


def _track_moduli_one(base: ModuliChain, n: int, f: int, eps: Fraction) -> TrackedEntry:
    lo, hi = _int_interval(f, eps)
    ds = base.divisors
    if lo <= 0 <= hi:
        return TrackedEntry(n, f, eps, 0, base.depth, True)
    k = 0
    for i in range(1, len(ds)):
        d = ds[i]
        if lo > 0 and d > hi:
            break
        if hi // d >= -((-lo) // d):
            k = i
        else:
            break
    d = ds[k]
    below = (f // d) * d
    cands = [x for x in (below, below + d) if lo <= x <= hi]
    a = _closest(cands, f)
    return TrackedEntry(n, f, eps, a, k, k == base.depth)


def _track_character_one(base: CharacterBase, n: int, f: int, eps: Fraction, cap: int) -> TrackedEntry:
    lo, hi = _int_interval(f, eps)
    # nearest-first order realises the tie-break rule
    order = sorted(range(lo, hi + 1), key=lambda x: (abs(x - f), x))
    cap = min(cap, base.depth)
    k, a = 0, order[0]
    for level in range(1, cap + 1):
        hit = next((x for x in order if base.member(level, x)), None)
        if hit is None:
            return TrackedEntry(n, f, eps, a, k, False)
        k, a = level, hit
    return TrackedEntry(n, f, eps, a, k, True)


def track(spec: TrackerSpec, N: int, start: int = 1, use_kernel: bool = True) -> TrackedSeq:
    """Tracked entries for ``n = start..N``.

    For moduli chains with every operand inside int64 the batch kernel in
    :mod:`tseq.kernels` is used; ``use_kernel=False`` forces the exact path.
    """
    if N < start:
        raise TrackerError("N must be at least the start index")
    ns = range(start, N + 1)
    fs = [spec.f(n) for n in ns]
    epss = [spec.epsilon(n) for n in ns]
    base = spec.base
    if isinstance(base, ModuliChain):
        entries = None
        if use_kernel:
            entries = _track_moduli_batch(base, ns, fs, epss)
        if entries is None:
            entries = [_track_moduli_one(base, n, f, e) for n, f, e in zip(ns, fs, epss)]
    else:
        entries = [_track_character_one(base, n, f, e, spec.level_cap) for n, f, e in zip(ns, fs, epss)]
    return TrackedSeq(spec, tuple(entries))


def _track_moduli_batch(base: ModuliChain, ns, fs, epss):
    bounds = [_int_interval(f, e) for f, e in zip(fs, epss)]
    if any(lo <= 0 for lo, _ in bounds) or any(hi >= INT64_SAFE for _, hi in bounds):
        return None
    top = max(hi for _, hi in bounds)
    # drop unreachable levels so the divisor array fits int64
    ds = [d for d in base.divisors if d <= top] or [1]
    import numpy as np

    f_arr = np.array(fs, dtype=np.int64)
    lo_arr = np.array([b[0] for b in bounds], dtype=np.int64)
    hi_arr = np.array([b[1] for b in bounds], dtype=np.int64)
    k_arr, a_arr = kernels.moduli_track(f_arr, lo_arr, hi_arr, np.array(ds, dtype=np.int64))
    depth = base.depth
    return [TrackedEntry(n, f, e, int(a), int(k), int(k) == depth)
            for n, f, e, a, k in zip(ns, fs, epss, a_arr, k_arr)]


def tracking_ratio_profile(seq: TrackedSeq) -> list[tuple[int, Fraction, Fraction]]:
    """``(n, |a_n/f(n) - 1|, eps(n)/f(n))`` per entry."""
    out = []
    for e in seq.entries:
        if e.f <= 0:
            raise TrackerError(f"f({e.n}) must be positive")
        dev = abs(Fraction(e.a, e.f) - 1)
        bound = e.eps / e.f
        assert dev <= bound
        out.append((e.n, dev, bound))
    return out


DEFAULT_C_GRID = (1, 2, 5, 10, 20, 50, 100)


def gap_stats(values: Sequence[int], window: int, c_grid: Sequence[int] = DEFAULT_C_GRID) -> dict:
    """Finite evidence about ``a_{n+1} - a_n -> inf`` on a prefix.

    Gaps are grouped into blocks of ``window`` consecutive gaps.  For every C in
    ``c_grid`` the report counts gaps ``<= C`` and records whether one occurs in
    the final block; ``violates_at`` is the smallest such C, or None.
    """
    vals = [int(v) for v in values]
    if len(vals) < 2:
        raise TrackerError("need at least two terms")
    if window < 1:
        raise TrackerError("window must be positive")
    gaps = [b - a for a, b in zip(vals, vals[1:])]
    bad = next((i for i, g in enumerate(gaps) if g <= 0), None)
    if bad is not None:
        raise TrackerError(f"sequence not strictly increasing at position {bad + 1}")
    arr = kernels.as_int64(vals)
    if arr is not None:
        minima = [int(m) for m in kernels.block_min_gaps(arr, window)]
    else:
        minima = [min(gaps[i:i + window]) for i in range(0, len(gaps), window)]
    last_block = gaps[(len(minima) - 1) * window:]
    per_c = []
    for C in c_grid:
        hits = [i for i, g in enumerate(gaps) if g <= C]
        per_c.append({
            "C": C,
            "count": len(hits),
            "last_position": hits[-1] if hits else None,
            "in_final_block": any(g <= C for g in last_block),
        })
    violating = [row["C"] for row in per_c if row["in_final_block"]]
    return {
        "length": len(vals),
        "window": window,
        "block_minima": minima,
        "per_C": per_c,
        "violates_at": min(violating) if violating else None,
    }


def preset_remark2(r, base: NeighborhoodBase, level_cap: int = 64) -> TrackerSpec:
    """``f(n) = floor(r**n) + n**2`` tracked with ``eps(n) = n``."""
    r = Fraction(r)
    if r <= 1:
        raise TrackerError(f"r must exceed 1, got {r}")
    return TrackerSpec(exp_plus_square(r), lambda n: Fraction(n), base, level_cap)
