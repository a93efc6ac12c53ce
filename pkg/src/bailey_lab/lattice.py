"""Multi-indices, the componentwise order and bounded boxes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterable, Iterator

from .errors import RankMismatch


class MultiIndex(tuple):
    """A length-l tuple of nonnegative integers.

    Tuples compare lexicographically (leftmost component most
    significant), which is exactly the row/column order of the
    transform matrices.
    """

    __slots__ = ()

    def __new__(cls, components: Iterable[int] = ()):
        comps = tuple(int(c) for c in components)
        if not comps:
            raise ValueError("a multi-index needs rank >= 1")
        if any(c < 0 for c in comps):
            raise ValueError(f"negative component in {comps}")
        return super().__new__(cls, comps)

    @property
    def rank(self) -> int:
        return len(self)

    @property
    def weight(self) -> int:
        return sum(self)

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        parts = [p.strip() for p in text.split(",")]
        if not all(p.lstrip("-").isdigit() for p in parts):
            raise ValueError(f"malformed multi-index {text!r}")
        return cls(int(p) for p in parts)

    @classmethod
    def zero(cls, rank: int) -> "MultiIndex":
        return cls((0,) * rank)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self)

    def __repr__(self) -> str:
        return f"MultiIndex({str(self)})"


def leq_componentwise(i: Iterable[int], j: Iterable[int]) -> bool:
    i, j = tuple(i), tuple(j)
    if len(i) != len(j):
        raise RankMismatch(f"ranks differ: {len(i)} vs {len(j)}")
    return all(a <= b for a, b in zip(i, j))


def box_enumerate(upper: Iterable[int]) -> Iterator[MultiIndex]:
    """Yield every y with 0 <= y <= upper in increasing lexicographic order."""
    upper = MultiIndex(upper)
    for comps in itertools.product(*(range(n + 1) for n in upper)):
        yield MultiIndex(comps)


def interval(lower: Iterable[int], upper: Iterable[int]) -> Iterator[MultiIndex]:
    """Indices y with lower <= y <= upper, lexicographic; empty if lower > upper."""
    lower, upper = tuple(lower), tuple(upper)
    if len(lower) != len(upper):
        raise RankMismatch(f"ranks differ: {len(lower)} vs {len(upper)}")
    ranges = [range(lo, hi + 1) for lo, hi in zip(lower, upper)]
    for comps in itertools.product(*ranges):
        yield MultiIndex(comps)


@dataclass(frozen=True)
class Box:
    upper: MultiIndex

    def __post_init__(self):
        if not isinstance(self.upper, MultiIndex):
            object.__setattr__(self, "upper", MultiIndex(self.upper))

    @classmethod
    def parse(cls, text: str) -> "Box":
        return cls(MultiIndex.parse(text))

    @property
    def rank(self) -> int:
        return len(self.upper)

    def __iter__(self) -> Iterator[MultiIndex]:
        return box_enumerate(self.upper)

    def __len__(self) -> int:
        return prod(n + 1 for n in self.upper)

    def __contains__(self, index) -> bool:
        index = tuple(index)
        return len(index) == self.rank and all(
            0 <= a <= b for a, b in zip(index, self.upper)
        )

    def position(self, index: Iterable[int]) -> int:
        """Lexicographic position of ``index`` in the enumeration."""
        index = tuple(index)
        if index not in self:
            raise IndexError(f"{index} not in box {self.upper}")
        pos = 0
        for c, n in zip(index, self.upper):
            pos = pos * (n + 1) + c
        return pos

    def __str__(self) -> str:
        return str(self.upper)
