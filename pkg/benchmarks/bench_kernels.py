"""Time the numba kernels against their numpy fallbacks and the exact Python paths.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import timeit

import numpy as np

from tseq import kernels
from tseq._accel import HAVE_NUMBA
from tseq.finvec import FinVec
from tseq.topology import CanonicalNbhd, PackedVecs, member_nbhd_free
from tseq.tracker import PAPER_DEFAULT, TrackerSpec, _int_interval, poly, track
from tseq.zbase import padic


def _tracker_inputs(N):
    base = padic(2, 48)
    spec = TrackerSpec(poly(2), PAPER_DEFAULT, base)
    f, lo, hi = [], [], []
    for n in range(2, N + 1):
        fn, eps = n * n, spec.epsilon(n)
        a, b = _int_interval(fn, eps)
        f.append(fn), lo.append(a), hi.append(b)
    arr = lambda v: np.array(v, dtype=np.int64)  # noqa: E731
    return spec, arr(f), arr(lo), arr(hi), arr(base.divisors)


def _free_inputs(count):
    rng = random.Random(0)
    xs = [FinVec((rng.randrange(32), rng.randint(-4, 4)) for _ in range(5)) for _ in range(count)]
    nb = CanonicalNbhd.from_prefix([1, 2, 2, 4, 6, 9])
    packed = PackedVecs.pack(xs)
    return xs, nb, packed, np.array(nb.prefix(packed.longest), dtype=np.int64)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--N", type=int, default=10**5)
    args = ap.parse_args()

    spec, f, lo, hi, ds = _tracker_inputs(args.N)
    vals = np.cumsum(np.arange(1, args.N + 1, dtype=np.int64))
    xs, nb, packed, slots = _free_inputs(args.N)

    cases = {
        "moduli_track": {
            "numpy": lambda: kernels.moduli_track_np(f, lo, hi, ds),
            "exact": lambda: track(spec, args.N, use_kernel=False),
        },
        "block_min_gaps": {
            "numpy": lambda: kernels.block_min_gaps_np(vals, 16),
        },
        "slot_feasible": {
            "numpy": lambda: kernels.slot_feasible_np(packed.units, packed.offsets, slots),
            "exact": lambda: [member_nbhd_free(x, nb) for x in xs],
        },
    }
    if HAVE_NUMBA:
        cases["moduli_track"]["numba"] = lambda: kernels.moduli_track_nb(f, lo, hi, ds)
        cases["block_min_gaps"]["numba"] = lambda: kernels.block_min_gaps_nb(vals, 16)
        cases["slot_feasible"]["numba"] = lambda: kernels.slot_feasible_nb(packed.units, packed.offsets, slots)
        for impls in cases.values():
            impls["numba"]()  # compile outside the timing

    print(f"N = {args.N}, best of {args.repeat}; numba available: {HAVE_NUMBA}")
    print(f"{'kernel':<16}{'variant':<8}{'seconds':>10}")
    for name, impls in cases.items():
        for variant in ("numba", "numpy", "exact"):
            if variant in impls:
                reps = 1 if variant == "exact" else args.repeat
                best = min(timeit.repeat(impls[variant], number=1, repeat=reps))
                print(f"{name:<16}{variant:<8}{best:>10.6f}")


if __name__ == "__main__":
    main()
