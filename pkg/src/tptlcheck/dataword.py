"""Finite and ultimately periodic data words.

A data word is a sequence of ``(props, value)`` pairs where ``props`` is a set
of atomic propositions and ``value`` a natural number.  Infinite words are
always given in the form ``u1 (u2)^omega_{+k}``: the prefix ``u1`` followed by
the period ``u2`` repeated forever, every repetition shifted by ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

INFINITY = math.inf


class NegativeValueError(ValueError):
    """A shift would move a data value below zero."""


class NotQuasiMonotonicError(ValueError):
    pass


@dataclass(frozen=True)
class DataPoint:
    props: frozenset[str]
    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.props, frozenset):
            object.__setattr__(self, "props", frozenset(self.props))
        if self.value < 0:
            raise NegativeValueError(f"data value {self.value} is negative")
        for p in self.props:
            if not isinstance(p, str) or not p:
                raise ValueError(f"bad proposition {p!r}")

    def shifted(self, k: int) -> DataPoint:
        return DataPoint(self.props, self.value + k)

    def __repr__(self) -> str:
        props = ",".join(sorted(self.props))
        return f"({{{props}}},{self.value})"


PointLike = Union[DataPoint, tuple]


def point(props: Iterable[str] | str, value: int) -> DataPoint:
    """Build a point; a bare string is taken as a single proposition."""
    if isinstance(props, str):
        props = (props,) if props else ()
    return DataPoint(frozenset(props), value)


def _as_point(p: PointLike) -> DataPoint:
    if isinstance(p, DataPoint):
        return p
    props, value = p
    return point(props, value)


@dataclass(frozen=True)
class DataWord:
    """A finite data word.  Supports ``len``, indexing, slicing and ``+``."""

    points: tuple[DataPoint, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.points, tuple):
            object.__setattr__(self, "points", tuple(self.points))

    @classmethod
    def of(cls, *items: PointLike) -> DataWord:
        return cls(tuple(_as_point(p) for p in items))

    @classmethod
    def from_values(cls, values: Iterable[int], props: Iterable[str] = ()) -> DataWord:
        """A word carrying the same proposition set at every position (pure by default)."""
        ps = frozenset(props)
        return cls(tuple(DataPoint(ps, v) for v in values))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[DataPoint]:
        return iter(self.points)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return DataWord(self.points[i])
        return self.points[i]

    def __add__(self, other: DataWord) -> DataWord:
        return concat(self, other)

    @property
    def values(self) -> list[int]:
        return [p.value for p in self.points]

    def min(self) -> int:
        return min(p.value for p in self.points)

    def max(self) -> int:
        return max(p.value for p in self.points)

    def __repr__(self) -> str:
        return "DataWord(" + "".join(map(repr, self.points)) + ")"


@dataclass(frozen=True)
class PeriodicWord:
    """The infinite word ``prefix (period)^omega_{+offset}``."""

    prefix: DataWord
    period: DataWord
    offset: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.prefix, DataWord):
            object.__setattr__(self, "prefix", DataWord(tuple(self.prefix)))
        if not isinstance(self.period, DataWord):
            object.__setattr__(self, "period", DataWord(tuple(self.period)))
        if len(self.period) == 0:
            raise ValueError("period of a periodic word must be nonempty")
        if self.offset < 0:
            raise ValueError("offset must be a natural number")

    def __len__(self) -> int:  # pragma: no cover - len() must return int
        raise TypeError("periodic words are infinite; use length()")

    def __getitem__(self, i: int) -> DataPoint:
        return at(self, i)

    def expand(self, n: int) -> DataWord:
        """The first ``n`` points."""
        return DataWord(tuple(at(self, i) for i in range(n)))

    def fold(self, i: int) -> int:
        """Map a position to its representative in ``[0, |u1|+|u2|)``."""
        n1 = len(self.prefix)
        if i < n1:
            return i
        return (i - n1) % len(self.period) + n1


def length(w: DataWord | PeriodicWord) -> int | float:
    if isinstance(w, PeriodicWord):
        return INFINITY
    return len(w)


def at(w: PeriodicWord | DataWord, i: int) -> DataPoint:
    if i < 0:
        raise IndexError(i)
    if isinstance(w, DataWord):
        return w.points[i]
    n1 = len(w.prefix)
    if i < n1:
        return w.prefix.points[i]
    q, r = divmod(i - n1, len(w.period))
    p = w.period.points[r]
    if q == 0 or w.offset == 0:
        return p
    return DataPoint(p.props, p.value + q * w.offset)


def shift(w: DataWord, k: int) -> DataWord:
    if k == 0:
        return w
    if w.points and min(p.value for p in w.points) + k < 0:
        raise NegativeValueError(f"shift by {k} makes a data value negative")
    return DataWord(tuple(DataPoint(p.props, p.value + k) for p in w.points))


def concat(u: DataWord, v: DataWord) -> DataWord:
    return DataWord(u.points + v.points)


def is_quasi_monotonic(w: PeriodicWord) -> bool:
    max1 = w.prefix.max() if len(w.prefix) else 0
    return max1 <= w.period.max() <= w.period.min() + w.offset


def shrink(w: PeriodicWord, bound: int) -> PeriodicWord:
    """Compress the data values of a quasi-monotonic word.

    ``bound`` is the largest absolute constant of the formula to be checked.
    Gaps between consecutive distinct values larger than ``bound`` become
    ``bound + 1``; every difference between two positions keeps its position
    relative to the constants ``-bound .. bound``, so TPTL verdicts are kept.
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    if not is_quasi_monotonic(w):
        raise NotQuasiMonotonicError("word is not quasi-monotonic")
    distinct = sorted({p.value for p in w.prefix} | {p.value for p in w.period})
    remap = {distinct[0]: 0}
    prev, cur = distinct[0], 0
    for v in distinct[1:]:
        cur += min(v - prev, bound + 1)
        remap[v] = cur
        prev = v

    def apply(u: DataWord) -> DataWord:
        return DataWord(tuple(DataPoint(p.props, remap[p.value]) for p in u.points))

    v1, v2 = apply(w.prefix), apply(w.period)
    gap = w.period.min() + w.offset - w.period.max()
    offset = v2.max() - v2.min() + min(gap, bound + 1)
    return PeriodicWord(v1, v2, offset)
