"""Batch int64 kernels with numba and pure-numpy implementations.

Each public kernel dispatches to the ``_nb`` variant when numba is available
and to the ``_np`` variant otherwise.  Both variants are importable directly so
tests and ``benchmarks/bench_kernels.py`` can compare them.  Callers must check
that all operands are below :data:`tseq._accel.INT64_SAFE`; arbitrary-precision
inputs go through the exact Python paths in the owning modules instead.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit


@njit(cache=True)
def moduli_track_nb(f, lo, hi, divisors):
    n = f.shape[0]
    levels = divisors.shape[0]
    k = np.empty(n, dtype=np.int64)
    a = np.empty(n, dtype=np.int64)
    for t in range(n):
        best = 0
        for i in range(1, levels):
            d = divisors[i]
            if hi[t] // d >= -((-lo[t]) // d):
                best = i
            else:
                break
        d = divisors[best]
        below = (f[t] // d) * d
        above = below + d if below != f[t] else below
        choice = below
        if below < lo[t]:
            choice = above
        elif above <= hi[t] and above - f[t] < f[t] - below:
            choice = above
        k[t] = best
        a[t] = choice
    return k, a


def moduli_track_np(f, lo, hi, divisors):
    f = np.asarray(f, dtype=np.int64)
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    d = np.asarray(divisors, dtype=np.int64)[None, :]
    hits = (hi[:, None] // d) >= -((-lo[:, None]) // d)
    # nested chain: hits is a prefix of True per row
    k = hits.sum(axis=1).astype(np.int64) - 1
    dk = d[0, k]
    below = (f // dk) * dk
    above = np.where(below != f, below + dk, below)
    take_above = (below < lo) | ((above <= hi) & (above - f < f - below))
    a = np.where(take_above, above, below)
    return k, a


@njit(cache=True)
def block_min_gaps_nb(values, window):
    n = values.shape[0] - 1
    blocks = (n + window - 1) // window
    out = np.empty(blocks, dtype=np.int64)
    for b in range(blocks):
        lo = b * window
        hi = min(lo + window, n)
        m = values[lo + 1] - values[lo]
        for j in range(lo + 1, hi):
            g = values[j + 1] - values[j]
            if g < m:
                m = g
        out[b] = m
    return out


def block_min_gaps_np(values, window):
    gaps = np.diff(np.asarray(values, dtype=np.int64))
    starts = np.arange(0, gaps.shape[0], window)
    return np.minimum.reduceat(gaps, starts)


@njit(cache=True)
def slot_feasible_nb(units, offsets, slots):
    m = offsets.shape[0] - 1
    out = np.empty(m, dtype=np.bool_)
    last = slots.shape[0] - 1
    for t in range(m):
        ok = True
        for j in range(offsets[t], offsets[t + 1]):
            pos = j - offsets[t]
            s = slots[pos] if pos <= last else slots[last]
            if s > units[j]:
                ok = False
                break
        out[t] = ok
    return out


def slot_feasible_np(units, offsets, slots):
    units = np.asarray(units, dtype=np.int64)
    offsets = np.asarray(offsets, dtype=np.int64)
    slots = np.asarray(slots, dtype=np.int64)
    m = offsets.shape[0] - 1
    if units.shape[0] == 0:
        return np.ones(m, dtype=bool)
    row = np.repeat(np.arange(m), np.diff(offsets))
    pos = np.arange(units.shape[0]) - offsets[row]
    need = slots[np.minimum(pos, slots.shape[0] - 1)]
    bad = np.zeros(m, dtype=bool)
    np.logical_or.at(bad, row, need > units)
    return ~bad


if HAVE_NUMBA:
    moduli_track = moduli_track_nb
    block_min_gaps = block_min_gaps_nb
    slot_feasible = slot_feasible_nb
else:
    moduli_track = moduli_track_np
    block_min_gaps = block_min_gaps_np
    slot_feasible = slot_feasible_np


def as_int64(values):
    """Return an int64 array, or None if any value leaves the safe range."""
    from ._accel import INT64_SAFE

    if any(abs(v) >= INT64_SAFE for v in values):
        return None
    return np.fromiter(values, dtype=np.int64, count=len(values))
