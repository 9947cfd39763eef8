"""The numba and pure-numpy kernels agree with each other and with the exact paths."""
import os
import subprocess
import sys

import numpy as np
import pytest

from tseq import kernels
from tseq._accel import HAVE_NUMBA
from tseq.finvec import FinVec
from tseq.topology import CanonicalNbhd, member_nbhd_free
from tseq.tracker import PAPER_DEFAULT, TrackerSpec, _int_interval, poly, track
from tseq.zbase import factorial_chain, padic

VARIANTS = [kernels.moduli_track_np]
if HAVE_NUMBA:
    VARIANTS.append(kernels.moduli_track_nb)


@pytest.mark.parametrize("kernel", VARIANTS)
@pytest.mark.parametrize("base", [padic(2, 40), padic(3, 25), factorial_chain(18)])
def test_moduli_track_kernels_match_exact(kernel, base):
    spec = TrackerSpec(poly(2), PAPER_DEFAULT, base)
    exact = track(spec, 3000, start=2, use_kernel=False).entries
    f = np.array([e.f for e in exact], dtype=np.int64)
    bounds = [_int_interval(e.f, e.eps) for e in exact]
    lo = np.array([b[0] for b in bounds], dtype=np.int64)
    hi = np.array([b[1] for b in bounds], dtype=np.int64)
    ds = np.array([d for d in base.divisors if d <= hi.max()], dtype=np.int64)
    k, a = kernel(f, lo, hi, ds)
    assert [int(v) for v in k] == [e.k for e in exact]
    assert [int(v) for v in a] == [e.a for e in exact]


def test_block_min_gaps_variants():
    rng = np.random.default_rng(0)
    vals = np.cumsum(rng.integers(1, 1000, size=5001)).astype(np.int64)
    ref = [min(np.diff(vals)[i:i + 37]) for i in range(0, 5000, 37)]
    assert list(kernels.block_min_gaps_np(vals, 37)) == ref
    if HAVE_NUMBA:
        assert list(kernels.block_min_gaps_nb(vals, 37)) == ref


def test_slot_feasible_variants():
    rng = np.random.default_rng(1)
    xs = [FinVec((int(i), int(c)) for i, c in zip(rng.integers(0, 10, 4), rng.integers(-3, 4, 4))) for _ in range(400)]
    units, offsets = [], [0]
    for x in xs:
        units.extend(x.units())
        offsets.append(len(units))
    units = np.array(units, dtype=np.int64)
    offsets = np.array(offsets, dtype=np.int64)
    for pref in ([0], [1, 3, 3, 5], [2, 2, 6], [0, 0, 0, 0, 9]):
        nb = CanonicalNbhd.from_prefix(pref)
        slots = np.array(nb.prefix(12), dtype=np.int64)
        ref = [member_nbhd_free(x, nb) for x in xs]
        assert list(kernels.slot_feasible_np(units, offsets, slots)) == ref
        if HAVE_NUMBA:
            assert list(kernels.slot_feasible_nb(units, offsets, slots)) == ref


def test_as_int64_guard():
    assert kernels.as_int64([1, 2, 3]).dtype == np.int64
    assert kernels.as_int64([2**63]) is None


def test_env_flag_disables_numba():
    code = "from tseq import _accel, kernels; print(_accel.HAVE_NUMBA, kernels.moduli_track is kernels.moduli_track_np)"
    env = dict(os.environ, TSEQ_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]
