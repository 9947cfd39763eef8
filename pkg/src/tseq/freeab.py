"""The free abelian group on generators ``e_n`` with its fibered subgroup H and
the dyadic neighborhoods ``U_n = {x : 2**n | x_i for all i}``.

``H = {x : f(i) | x_i for all i}`` for a fiber function f whose fibers are all
infinite.  Every vector of norm ``<= n0`` in H lies in the part supported on
``{i : f(i) <= n0}``, while ``{0} ∪ {(n0+1) e_i : f(i) = n0+1}`` is an infinite
compact subset of the complementary summand.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .finvec import FinVec, e
from .reports import WitnessReport
from .topology import CanonicalNbhd, member_nbhd_free

__all__ = [
    "FiberFn",
    "FiberAuditError",
    "SubgroupH",
    "nu2",
    "norm1",
    "in_H",
    "split_H",
    "in_Un",
    "ball",
    "ball_cap_Un",
    "compact_witness",
    "nondiscrete_witness",
    "BALL_LIMIT",
]


class FiberAuditError(ValueError):
    pass


def nu2(n: int) -> int:
    """2-adic valuation of a positive integer."""
    if n <= 0:
        raise ValueError("nu2 needs a positive integer")
    return (n & -n).bit_length() - 1


@dataclass(frozen=True)
class FiberFn:
    """A map ``f: N -> {1, 2, ...}`` meant to have infinite fibers.

    The preset is ``f(i) = nu2(i+1) + 1`` whose fiber over n is the residue
    class ``i + 1 ≡ 2**(n-1) (mod 2**n)``.  A user rule is accepted as-is and
    checked by :meth:`audit` on a finite window.
    """

    rule: Callable[[int], int] = field(compare=False)
    name: str = "custom"

    @classmethod
    def dyadic(cls) -> "FiberFn":
        return cls(lambda i: nu2(i + 1) + 1, "dyadic-valuation")

    def __call__(self, i: int) -> int:
        v = self.rule(i)
        if v < 1:
            raise FiberAuditError(f"f({i}) = {v} is not a positive integer")
        return v

    def fiber(self, n: int, count: int, search_limit: int = 1 << 20) -> list[int]:
        """First ``count`` indices i with ``f(i) = n``."""
        if self.name == "dyadic-valuation":
            # closed form: i = 2**(n-1) * (2t + 1) - 1
            return [(1 << (n - 1)) * (2 * t + 1) - 1 for t in range(count)]
        out = []
        for i in range(search_limit):
            if self(i) == n:
                out.append(i)
                if len(out) == count:
                    return out
        raise FiberAuditError(f"fiber over {n} has fewer than {count} points below {search_limit}")

    def audit(self, max_value: int, window: int, min_hits: int = 2) -> None:
        """Require every value ``1..max_value`` to occur ``min_hits`` times in ``[0, window)``."""
        counts: dict[int, int] = {}
        for i in range(window):
            v = self(i)
            counts[v] = counts.get(v, 0) + 1
        short = [n for n in range(1, max_value + 1) if counts.get(n, 0) < min_hits]
        if short:
            raise FiberAuditError(f"fiber audit failed for values {short} on window [0, {window})")


@dataclass(frozen=True)
class SubgroupH:
    fiber: FiberFn = field(default_factory=FiberFn.dyadic)

    def __contains__(self, x: FinVec) -> bool:
        return in_H(x, self)


def norm1(x: FinVec) -> int:
    return x.norm1()


def in_H(x: FinVec, H: SubgroupH) -> bool:
    return all(c % H.fiber(i) == 0 for i, c in x.items())


def split_H(x: FinVec, n0: int, H: SubgroupH) -> tuple[FinVec, FinVec]:
    """``x = x' + x''`` with ``x'`` on ``{f <= n0}`` and ``x''`` on ``{f > n0}``."""
    if not in_H(x, H):
        raise ValueError(f"{x} is not in H")
    low, high = [], []
    for i, c in x.items():
        (low if H.fiber(i) <= n0 else high).append((i, c))
    return FinVec(low), FinVec(high)


def in_Un(x: FinVec, n: int) -> bool:
    m = 1 << n
    return all(c % m == 0 for _, c in x.items())


BALL_LIMIT = 128


def ball(radius: int, window: int):
    """Every vector with norm1 ``<= radius`` supported in ``[0, window)``."""
    yield FinVec()
    for size in range(1, min(radius, window) + 1):
        for support in itertools.combinations(range(window), size):
            for mags in _compositions(radius, size):
                for signs in itertools.product((1, -1), repeat=size):
                    yield FinVec(zip(support, (s * m for s, m in zip(signs, mags))))


def _compositions(limit: int, parts: int):
    """Tuples of ``parts`` positive integers with sum ``<= limit``."""
    if parts == 0:
        yield ()
        return
    for first in range(1, limit - parts + 2):
        for rest in _compositions(limit - first, parts - 1):
            yield (first,) + rest


def ball_cap_Un(n0: int, window: int) -> WitnessReport:
    """Exhaustively check ``U_{n0} ∩ {norm1 <= n0} = {0}`` on ``[0, window)``."""
    if n0 < 1 or window < 1:
        raise ValueError("n0 and window must be positive")
    if n0 * window > BALL_LIMIT:
        raise ValueError(f"window too large: n0*window = {n0 * window} > {BALL_LIMIT}")
    survivors = []
    checked = 0
    for x in ball(n0, window):
        checked += 1
        if in_Un(x, n0):
            survivors.append(x)
    ok = survivors == [FinVec()]
    return WitnessReport(
        claim="thm6-ball-cap",
        params={"n0": n0, "window": window},
        evidence=[str(x) for x in survivors],
        verdict="certified" if ok else "refuted",
        bounds={"enumerated": checked},
    )


def compact_witness(n0: int, fiber: FiberFn, count: int) -> list[FinVec]:
    """``[0, (n0+1) e_i, ...]`` over the first ``count`` indices with ``f(i) = n0+1``."""
    if count < 1:
        raise ValueError("count must be positive")
    idx = fiber.fiber(n0 + 1, count)
    if any(fiber(i) != n0 + 1 for i in idx):
        raise FiberAuditError("fiber listing disagrees with the rule")
    return [FinVec()] + [(n0 + 1) * e(i) for i in idx]


def nondiscrete_witness(n: int, nbhd: CanonicalNbhd, count: int) -> list[FinVec]:
    """The first ``count`` vectors ``2**n e_i`` (ascending i) lying in the neighborhood."""
    if count < 1:
        raise ValueError("count must be positive")
    m = 1 << n
    out = []
    # membership is monotone in i and holds once i >= slot(2**n - 1)
    for i in itertools.count():
        w = m * e(i)
        if member_nbhd_free(w, nbhd):
            out.append(w)
            if len(out) == count:
                return out
