"""Lazily evaluated integer sequences with provenance.

Sequences are indexed from 0 (``a_0, a_1, ...``) unless a finite table says
otherwise.  Values are computed on demand and memoized per instance.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Sequence

__all__ = [
    "IntSeq",
    "SeqError",
    "floor_pow",
    "parse_fraction",
    "parse_expr",
    "pow_seq",
    "pow2",
    "shifted",
    "table",
    "from_expr",
]


class SeqError(ValueError):
    pass


def floor_pow(r: Fraction, n: int) -> int:
    """Exact floor of ``r**n`` for rational ``r``."""
    if n < 0:
        raise SeqError("exponent must be non-negative")
    r = Fraction(r)
    return r.numerator**n // r.denominator**n


_FRACTION = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*")


def parse_fraction(text: str) -> Fraction:
    """Parse ``"3"``, ``"-7"`` or ``"3/2"`` into an exact Fraction."""
    m = _FRACTION.fullmatch(text)
    if not m:
        raise SeqError(f"not a fraction: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise SeqError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


class IntSeq:
    """An integer sequence ``n -> a_n`` evaluated lazily.

    ``length`` is None for infinite sequences; finite ones raise IndexError
    past their end.  ``provenance`` records the construction that produced it.
    """

    def __init__(self, fn: Callable[[int], int], name: str, params: dict | None = None,
                 length: int | None = None, start: int = 0):
        self._fn = fn
        self._cache: dict[int, int] = {}
        self.name = name
        self.params = dict(params or {})
        self.length = length
        self.start = start

    @property
    def provenance(self) -> dict:
        return {"name": self.name, "params": {k: str(v) for k, v in self.params.items()}}

    def __getitem__(self, n: int) -> int:
        if n < self.start or (self.length is not None and n >= self.start + self.length):
            raise IndexError(f"{self.name}: index {n} out of range")
        try:
            return self._cache[n]
        except KeyError:
            v = self._cache[n] = int(self._fn(n))
            return v

    def upto(self, N: int) -> list[int]:
        """Values ``a_start, ..., a_N``."""
        return [self[n] for n in range(self.start, N + 1)]

    def check_increasing(self, N: int) -> None:
        prev = None
        for n in range(self.start, N + 1):
            v = self[n]
            if prev is not None and v <= prev:
                raise SeqError(f"{self.name} is not strictly increasing at n={n}")
            prev = v

    def __repr__(self):
        return f"IntSeq({self.name}, {self.params})"


def pow_seq(r) -> IntSeq:
    r = Fraction(r)
    return IntSeq(lambda n: floor_pow(r, n), "pow", {"r": r})


def pow2() -> IntSeq:
    return IntSeq(lambda n: 1 << n, "pow2")


def shifted(base: IntSeq, c: int) -> IntSeq:
    return IntSeq(lambda n: base[n] + c, "shifted",
                  {"base": base.name, "c": c, **{f"base.{k}": v for k, v in base.params.items()}},
                  length=base.length, start=base.start)


def table(values: Sequence[int], start: int = 0, name: str = "table") -> IntSeq:
    vals = [int(v) for v in values]
    return IntSeq(lambda n: vals[n - start], name, {}, length=len(vals), start=start)


# ---------------------------------------------------------------------------
# closed-form expressions such as "2^n+1", "n^2", "(3/2)^n + n^2", "3*n^2 - 1"

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<n>n)|(?P<op>[-+*^/()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise SeqError(f"unexpected character at position {pos} in {text!r}")
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise SeqError(f"expected {value or kind} at position {tok[2]} in {self.text!r}")
        self.i += 1
        return tok

    # expr := term (('+'|'-') term)*
    def expr(self):
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        terms = [(sign, self.term())]
        while self.peek()[1] in ("+", "-"):
            s = -1 if self.take()[1] == "-" else 1
            terms.append((s, self.term()))
        return lambda n: sum(s * t(n) for s, t in terms)

    # term := power ('*' power)*
    def term(self):
        factors = [self.power()]
        while self.peek()[1] == "*":
            self.take()
            factors.append(self.power())

        def ev(n):
            out = Fraction(1)
            for f in factors:
                out *= f(n)
            return out

        return ev

    # power := atom ('^' atom)?
    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            exp = self.atom()

            def ev(n):
                e = exp(n)
                if e.denominator != 1 or e < 0:
                    raise SeqError(f"non-integer or negative exponent in {self.text!r}")
                return base(n) ** int(e)

            return ev
        return base

    # atom := number ('/' number)? | 'n' | '(' expr ')'
    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            v = Fraction(int(val))
            if self.peek()[1] == "/":
                self.take()
                den = int(self.take("num")[1])
                if den == 0:
                    raise SeqError(f"zero denominator at position {pos} in {self.text!r}")
                v = v / den
            return lambda n: v
        if kind == "n":
            self.take()
            return lambda n: Fraction(n)
        if val == "(":
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise SeqError(f"unexpected token at position {pos} in {self.text!r}")


def parse_expr(text: str) -> Callable[[int], int]:
    """Compile an expression in ``n`` into ``n -> floor(value)``."""
    p = _Parser(text)
    ev = p.expr()
    if p.i != len(p.toks):
        raise SeqError(f"trailing input at position {p.peek()[2]} in {text!r}")

    def f(n: int) -> int:
        v = ev(n)
        return v.numerator // v.denominator

    return f


def from_expr(text: str) -> IntSeq:
    return IntSeq(parse_expr(text), "expr", {"text": text})
