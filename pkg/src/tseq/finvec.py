"""Finitely supported integer vectors, i.e. elements of the direct sum of
countably many copies of Z, with generators ``e_n``."""
from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping

__all__ = ["FinVec", "FinVecSyntaxError", "parse_finvec", "e"]


class FinVecSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class FinVec(Mapping[int, int]):
    """Immutable sparse vector ``index -> nonzero coefficient``.

    Iteration runs over support indices in ascending order.
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        acc: dict[int, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for i, c in items:
            i, c = int(i), int(c)
            if i < 0:
                raise ValueError(f"negative index {i}")
            acc[i] = acc.get(i, 0) + c
        self._items = tuple(sorted((i, c) for i, c in acc.items() if c != 0))
        self._hash = None

    @classmethod
    def unit(cls, i: int, c: int = 1) -> "FinVec":
        return cls(((i, c),))

    def __getitem__(self, i: int) -> int:
        for j, c in self._items:
            if j == i:
                return c
        raise KeyError(i)

    def coeff(self, i: int) -> int:
        return dict(self._items).get(i, 0)

    def __iter__(self) -> Iterator[int]:
        return (i for i, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def items(self):
        return self._items

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._items)

    def __eq__(self, other):
        if isinstance(other, FinVec):
            return self._items == other._items
        if isinstance(other, int) and other == 0:
            return not self._items
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __bool__(self):
        return bool(self._items)

    def __add__(self, other: "FinVec") -> "FinVec":
        if not isinstance(other, FinVec):
            return NotImplemented
        return FinVec(self._items + other._items)

    def __neg__(self) -> "FinVec":
        return FinVec((i, -c) for i, c in self._items)

    def __sub__(self, other: "FinVec") -> "FinVec":
        if not isinstance(other, FinVec):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k: int) -> "FinVec":
        if not isinstance(k, int):
            return NotImplemented
        return FinVec((i, k * c) for i, c in self._items)

    __rmul__ = __mul__

    def norm1(self) -> int:
        return sum(abs(c) for _, c in self._items)

    def units(self) -> list[int]:
        """Support indices repeated ``|x_i|`` times, ascending."""
        out = []
        for i, c in self._items:
            out.extend([i] * abs(c))
        return out

    def __str__(self):
        if not self._items:
            return "0"
        parts = []
        for i, c in self._items:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(f"{sign}{mag}e{i}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self):
        return f"FinVec({str(self)!r})"

    def to_json(self) -> list:
        return [[i, str(c)] for i, c in self._items]

    @classmethod
    def from_json(cls, doc) -> "FinVec":
        return cls((int(i), int(c)) for i, c in doc)


def e(i: int) -> FinVec:
    return FinVec.unit(i)


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(?:\*\s*)?e(\d+)\s*")


def parse_finvec(text: str) -> FinVec:
    """Parse ``"3e0-2e7"``; repeated indices are summed, ``"0"`` is the zero vector."""
    if text.strip() == "0":
        return FinVec()
    pos, items = 0, []
    first = True
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TERM.match(text, pos)
        if not m:
            raise FinVecSyntaxError("expected a term like '3e5'", text, pos)
        sign, coef, idx = m.groups()
        if sign is None and not first:
            raise FinVecSyntaxError("missing '+' or '-' between terms", text, m.start())
        c = int(coef) if coef is not None else 1
        items.append((int(idx), -c if sign == "-" else c))
        pos = m.end()
        first = False
    if first:
        raise FinVecSyntaxError("empty vector", text, 0)
    return FinVec(items)
