"""Decidable neighborhood bases of metrizable totally bounded topologies on Z.

Two families are provided.  A :class:`ModuliChain` has ``U_i = d_i Z`` for a
divisibility chain ``1 = d_0 | d_1 | ...`` (p-adic topologies are the special
case ``d_i = p**i``).  A :class:`CharacterBase` has
``U_i = {x : dist(alpha*x, Z) < 2**-i}`` for an irrational ``alpha`` given
exactly, either as a quadratic irrational or as an infinite continued fraction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, isqrt
from typing import Callable, Iterator, Sequence, Union

__all__ = [
    "BaseError",
    "QuadraticIrrational",
    "ContinuedFraction",
    "ModuliChain",
    "CharacterBase",
    "NeighborhoodBase",
    "member",
    "cover_radius",
    "separation_level",
    "padic",
    "factorial_chain",
    "base_from_config",
    "base_to_config",
]


class BaseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact real parameters


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class QuadraticIrrational:
    """The number ``a + b*sqrt(d)`` with rational ``a``, ``b`` and non-square ``d``."""

    d: int
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.d <= 0 or _is_square(self.d) or self.b == 0:
            raise BaseError("base not Hausdorff: alpha is rational")

    def interval(self, x: int, prec: int) -> tuple[Fraction, Fraction]:
        """Rational bounds on ``alpha*x`` of width at most ``2**-prec``."""
        coef = self.b * x
        shift = prec + abs(coef.numerator).bit_length() + 1
        s = isqrt(self.d << (2 * shift))
        lo = coef * Fraction(s, 1 << shift)
        hi = coef * Fraction(s + 1, 1 << shift)
        if coef < 0:
            lo, hi = hi, lo
        base = self.a * x
        return base + lo, base + hi

    def cf_terms(self) -> Iterator[int]:
        # alpha = (A + B*sqrt(d)) / C with integers, C > 0
        den = self.a.denominator * self.b.denominator
        A = self.a.numerator * (den // self.a.denominator)
        B = self.b.numerator * (den // self.b.denominator)
        C = den
        d = self.d
        while True:
            r = isqrt(B * B * d)
            s = r if B > 0 else -r - 1  # floor(B*sqrt(d)); irrational, never exact
            q = (A + s) // C
            yield q
            # 1 / ((A - qC + B sqrt d)/C) = C(A' - B sqrt d) / (A'^2 - B^2 d)
            A1 = A - q * C
            num_a, num_b = C * A1, -C * B
            den2 = A1 * A1 - B * B * d
            if den2 < 0:
                num_a, num_b, den2 = -num_a, -num_b, -den2
            A, B, C = num_a, num_b, den2

    def describe(self) -> dict:
        return {"sqrt": str(self.d), "a": str(self.a), "b": str(self.b)}


@dataclass(frozen=True)
class ContinuedFraction:
    """An irrational given by its (infinite) continued fraction terms.

    ``head`` terms are followed by ``period`` repeated forever, or by
    ``tail(k)`` for ``k = 0, 1, ...`` when a generating rule is supplied.
    """

    head: tuple[int, ...]
    period: tuple[int, ...] = ()
    tail: Callable[[int], int] | None = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(int(t) for t in self.head))
        object.__setattr__(self, "period", tuple(int(t) for t in self.period))
        if not self.period and self.tail is None:
            raise BaseError("base not Hausdorff: a finite continued fraction is rational")
        if any(t < 1 for t in self.head[1:]) or any(t < 1 for t in self.period):
            raise BaseError("continued fraction terms after the first must be positive")

    @classmethod
    def euler(cls) -> "ContinuedFraction":
        # e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
        def tail(k):
            return 2 * (k // 3 + 1) if k % 3 == 1 else 1

        return cls(head=(2,), tail=tail, name="e")

    def cf_terms(self) -> Iterator[int]:
        yield from self.head
        if self.period:
            yield from itertools.cycle(self.period)
        else:
            for k in itertools.count():
                t = self.tail(k)
                if t < 1:
                    raise BaseError("continued fraction terms after the first must be positive")
                yield t

    def _convergents(self) -> Iterator[tuple[int, int]]:
        cache = self.__dict__.get("_conv")
        if cache is None:
            cache = []
            object.__setattr__(self, "_conv", cache)
            object.__setattr__(self, "_terms", self.cf_terms())
        h0, h1, k0, k1 = 1, 0, 0, 1
        for i in itertools.count():
            if i == len(cache):
                t = next(self._terms)
                if cache:
                    (h0, k0), (h1, k1) = cache[-1], (cache[-2] if len(cache) > 1 else (1, 0))
                cache.append((t * h0 + h1, t * k0 + k1))
            yield cache[i]

    def interval(self, x: int, prec: int) -> tuple[Fraction, Fraction]:
        # consecutive convergents bracket alpha
        bound = Fraction(1, 1 << prec)
        ax = abs(x)
        prev = None
        for h, k in self._convergents():
            if prev is not None:
                ph, pk = prev
                # |h/k - ph/pk| = 1/(k*pk)
                if ax << prec <= k * pk:
                    lo, hi = sorted((Fraction(ph * x, pk), Fraction(h * x, k)))
                    return lo, hi
            prev = (h, k)
        raise AssertionError("unreachable")

    def describe(self) -> dict:
        if self.name == "e":
            return {"cf": "e"}
        return {"cf": [str(t) for t in self.head], "period": [str(t) for t in self.period]}


Alpha = Union[QuadraticIrrational, ContinuedFraction]


def _frac_bounds(alpha: Alpha, x: int) -> tuple[Fraction, Fraction]:
    """Bounds on the fractional part of ``alpha*x`` (x != 0), not straddling an integer."""
    prec = 64
    while True:
        lo, hi = alpha.interval(x, prec)
        m = floor(lo)
        if floor(hi) == m and hi != m + 1 and lo != m:
            return lo - m, hi - m
        prec *= 2


def dist_bounds(alpha: Alpha, x: int) -> tuple[Fraction, Fraction]:
    """Lower and upper bounds on ``dist(alpha*x, Z)``."""
    if x == 0:
        return Fraction(0), Fraction(0)
    flo, fhi = _frac_bounds(alpha, x)
    return min(flo, 1 - fhi), min(fhi, 1 - flo, Fraction(1, 2))


def dist_less(alpha: Alpha, x: int, delta: Fraction) -> bool:
    """Decide ``dist(alpha*x, Z) < delta`` exactly."""
    if x == 0:
        return delta > 0
    prec = 64
    while True:
        lo, hi = alpha.interval(x, prec)
        for m in range(floor(lo) - 1, floor(hi) + 3):
            if m - delta < lo and hi < m + delta:
                return True
        if all(hi <= m - delta or lo >= m + delta for m in range(floor(lo) - 1, floor(hi) + 3)):
            return False
        prec *= 2


# ---------------------------------------------------------------------------
# bases


@dataclass(frozen=True)
class ModuliChain:
    divisors: tuple[int, ...]

    def __post_init__(self):
        ds = tuple(int(d) for d in self.divisors)
        object.__setattr__(self, "divisors", ds)
        if not ds or ds[0] != 1:
            raise BaseError("moduli chain must start with d_0 = 1")
        for i in range(len(ds) - 1):
            if ds[i + 1] % ds[i] != 0:
                raise BaseError(f"d_{i} = {ds[i]} does not divide d_{i + 1} = {ds[i + 1]}")
            if i >= 1 and ds[i + 1] <= ds[i]:
                raise BaseError(f"moduli chain must increase strictly after d_1 (at index {i + 1})")

    @property
    def depth(self) -> int:
        return len(self.divisors) - 1

    def _check(self, level: int) -> None:
        if level < 0 or level > self.depth:
            raise BaseError(f"level {level} outside 0..{self.depth}")

    def member(self, level: int, x: int) -> bool:
        self._check(level)
        return x % self.divisors[level] == 0

    def cover_radius(self, level: int) -> int:
        self._check(level)
        return self.divisors[level]


@dataclass(frozen=True)
class CharacterBase:
    alpha: Alpha
    depth: int = 32

    def __post_init__(self):
        if self.depth < 0:
            raise BaseError("depth must be non-negative")

    def _check(self, level: int) -> None:
        if level < 0 or level > self.depth:
            raise BaseError(f"level {level} outside 0..{self.depth}")

    @staticmethod
    def radius(level: int) -> Fraction:
        return Fraction(1, 1 << level)

    def member(self, level: int, x: int) -> bool:
        self._check(level)
        return dist_less(self.alpha, x, self.radius(level))

    def cover_radius(self, level: int, scan_limit: int = 256) -> int:
        """A certified ``l`` with ``Z = union of s + U_level over |s| < l``.

        An upper bound comes from the three-gap theorem: the points ``s*alpha``,
        ``0 <= s < q_k``, cut the circle into gaps of length at most
        ``||q_{k-1} alpha|| + ||q_k alpha||``.  When that bound is small enough
        the symmetric window ``|s| < L`` is scanned for a smaller certified L.
        """
        self._check(level)
        two_delta = 2 * self.radius(level)
        if two_delta >= 1:
            # dist(alpha*x, Z) < 1/2 for every x since alpha*x is never a half-integer
            return 1
        bound = None
        for q_prev, q in self._convergent_pairs():
            if dist_bounds(self.alpha, q_prev)[1] + dist_bounds(self.alpha, q)[1] < two_delta:
                bound = q
                break
        limit = min(bound, scan_limit)
        pts = [(Fraction(0), Fraction(0))]
        for L in range(1, limit + 1):
            if L > 1:
                pts.append(_frac_bounds(self.alpha, L - 1))
                pts.append(_frac_bounds(self.alpha, 1 - L))
            if _max_gap_upper(pts) < two_delta:
                return L
        return bound

    def _convergent_pairs(self) -> Iterator[tuple[int, int]]:
        terms = self.alpha.cf_terms()
        next(terms)
        k_prev, k = 0, 1  # q_{-1}, q_0
        for t in terms:
            k_prev, k = k, t * k + k_prev
            if k > k_prev:
                yield k_prev, k

def _max_gap_upper(pts: list[tuple[Fraction, Fraction]]) -> Fraction:
    """Upper bound on the largest circular gap between points known up to intervals."""
    pts = sorted(pts)
    worst = pts[0][1] + 1 - pts[-1][0]
    for (lo0, hi0), (lo1, hi1) in zip(pts, pts[1:]):
        if hi0 >= lo1:
            return Fraction(1)  # order not certified; no bound
        worst = max(worst, hi1 - lo0)
    return worst


NeighborhoodBase = Union[ModuliChain, CharacterBase]


def member(base: NeighborhoodBase, level: int, x: int) -> bool:
    return base.member(level, x)


def cover_radius(base: NeighborhoodBase, level: int) -> int:
    return base.cover_radius(level)


def separation_level(base: NeighborhoodBase, x: int, depth_cap: int | None = None) -> int | None:
    """Smallest level whose neighborhood excludes ``x``, or None if none up to the cap."""
    if x == 0:
        raise BaseError("zero is in every neighborhood")
    cap = base.depth if depth_cap is None else min(depth_cap, base.depth)
    for i in range(cap + 1):
        if not base.member(i, x):
            return i
    return None


def padic(p: int, depth: int) -> ModuliChain:
    if p < 2:
        raise BaseError("p must be at least 2")
    return ModuliChain(tuple(p**i for i in range(depth + 1)))


def factorial_chain(depth: int) -> ModuliChain:
    ds, acc = [], 1
    for i in range(depth + 1):
        acc *= max(i, 1)
        ds.append(acc)
    return ModuliChain(tuple(ds))


# ---------------------------------------------------------------------------
# config documents


def _int(v) -> int:
    if isinstance(v, bool):
        raise BaseError(f"expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise BaseError(f"expected a decimal integer string, got {v!r}")


def _alpha_from_config(doc) -> Alpha:
    if not isinstance(doc, dict):
        raise BaseError("alpha must be an object")
    if "sqrt" in doc:
        unknown = set(doc) - {"sqrt", "a", "b"}
        if unknown:
            raise BaseError(f"unknown alpha keys: {sorted(unknown)}")
        return QuadraticIrrational(_int(doc["sqrt"]), Fraction(str(doc.get("a", "0"))), Fraction(str(doc.get("b", "1"))))
    if "cf" in doc:
        unknown = set(doc) - {"cf", "period"}
        if unknown:
            raise BaseError(f"unknown alpha keys: {sorted(unknown)}")
        if doc["cf"] == "e":
            return ContinuedFraction.euler()
        return ContinuedFraction(tuple(_int(t) for t in doc["cf"]), tuple(_int(t) for t in doc.get("period", [])))
    raise BaseError("alpha needs 'sqrt' or 'cf'")


def base_from_config(doc: dict) -> NeighborhoodBase:
    """Build a base from ``{"kind": "moduli" | "padic" | "factorial" | "character", ...}``."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise BaseError("base description must be an object with a 'kind'")
    kind = doc["kind"]
    allowed = {
        "moduli": {"kind", "divisors"},
        "padic": {"kind", "p", "depth"},
        "factorial": {"kind", "depth"},
        "character": {"kind", "alpha", "depth"},
    }
    if kind not in allowed:
        raise BaseError(f"unknown base kind {kind!r}")
    unknown = set(doc) - allowed[kind]
    if unknown:
        raise BaseError(f"unknown keys for {kind} base: {sorted(unknown)}")
    if kind == "moduli":
        return ModuliChain(tuple(_int(d) for d in doc["divisors"]))
    if kind == "padic":
        return padic(_int(doc["p"]), _int(doc.get("depth", 64)))
    if kind == "factorial":
        return factorial_chain(_int(doc.get("depth", 64)))
    return CharacterBase(_alpha_from_config(doc["alpha"]), _int(doc.get("depth", 32)))


def base_to_config(base: NeighborhoodBase) -> dict:
    if isinstance(base, ModuliChain):
        return {"kind": "moduli", "divisors": [str(d) for d in base.divisors]}
    return {"kind": "character", "alpha": base.alpha.describe(), "depth": str(base.depth)}
