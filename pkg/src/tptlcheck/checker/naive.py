"""Direct evaluation of the satisfaction relation, used as the reference oracle.

Valuations are absolute: a register holds the data value at the position
where it was frozen, and ``x ~ c`` compares ``d_i - nu(x)`` with ``c``.
Annotated Untils are evaluated natively through ``d_j - d_i in I``.

On a periodic word each Until looks at most ``unroll_horizon`` positions
ahead; beyond that window every register has drifted past all constants and
the word repeats, so no new witness can appear.  The word itself is indexed
lazily, so nested operators may look arbitrarily far.
"""

from __future__ import annotations

import math
from typing import Callable, Mapping

from .. import formula as fm
from ..dataword import DataWord, PeriodicWord, at
from .common import (
    AND, CONS, FREEZE, NOT, NPROP, NTRUE, OR, PROP, RELEASE, TRUE, UANN, UNTIL,
    Interned, Verdict, ensure_recursion_limit,
)


def _min_pair_difference(values: list[int]) -> int:
    """``min(0, min_{p < i} values[i] - values[p])``."""
    best, high = 0, values[0]
    for v in values[1:]:
        best = min(best, v - high)
        high = max(high, v)
    return best


def unroll_horizon(w: PeriodicWord, phi: fm.Formula, min_delta: int | None = None) -> int:
    """Lookahead after which an Until on ``w`` cannot find new witnesses.

    With ``k = 0`` two periods past the prefix suffice.  Otherwise the bound
    is ``|u1| + n * |u2|`` where ``n`` is the number of periods after which
    every register value exceeds ``C + M``, computed from the smallest
    register difference that can ever occur and the largest value in
    ``u1 u2``.  ``min_delta`` overrides that smallest difference, for
    evaluations started from arbitrary valuations.
    """
    n1, n2, k = len(w.prefix), len(w.period), w.offset
    if k == 0:
        return n1 + 2 * n2
    C = fm.c_phi(phi)
    per = w.period.values
    M = max(per) - min(per)
    m2 = min(per)
    window = w.expand(n1 + 2 * n2).values
    m_low = _min_pair_difference(window) if min_delta is None else min(0, min_delta)
    d_max = max(window[: n1 + n2])
    n = max(2, -((-(C + M + 1 + d_max - m_low - m2)) // k) + 1)
    return n1 + n * n2


class _NaiveEval:
    def __init__(self, w, phi: fm.Formula, horizon: int | None, relative: bool) -> None:
        ensure_recursion_limit()
        self.t = Interned(phi)
        self.relative = relative
        if isinstance(w, DataWord):
            if len(w) == 0:
                raise ValueError("the word must be nonempty")
            pts = w.points
            self.length = len(pts)
            self.point: Callable = pts.__getitem__
            self.window = None
        else:
            cache: dict = {}

            def point(i: int):
                p = cache.get(i)
                if p is None:
                    p = cache[i] = at(w, i)
                return p

            self.point = point
            self.length = None
            self.window = horizon if horizon is not None else unroll_horizon(w, phi)
        self.memo: dict = {}

    def last(self, i: int) -> int:
        if self.length is not None:
            return self.length - 1
        return i + self.window

    def holds(self, n: int, i: int, val: tuple) -> bool:
        t = self.t
        kind = t.kind[n]
        if kind == TRUE:
            return True
        if kind == NTRUE:
            return False
        if kind == PROP:
            return t.a[n] in self.point(i).props
        if kind == NPROP:
            return t.a[n] not in self.point(i).props
        if kind == CONS:
            r = t.a[n]
            diff = val[r] if self.relative else self.point(i).value - val[r]
            return t.b[n].holds(diff)
        if kind == NOT:
            return not self.holds(t.a[n], i, val)
        if kind == AND:
            return self.holds(t.a[n], i, val) and self.holds(t.b[n], i, val)
        if kind == OR:
            return self.holds(t.a[n], i, val) or self.holds(t.b[n], i, val)
        if kind == FREEZE:
            r = t.a[n]
            new = 0 if self.relative else self.point(i).value
            return self.holds(t.b[n], i, val[:r] + (new,) + val[r + 1:])
        key = (n, i, tuple(val[r] for r in t.free[n]))
        res = self.memo.get(key)
        if res is None:
            res = self.memo[key] = self._temporal(n, kind, i, val)
        return res

    def _advance(self, val: tuple, i: int, j: int) -> tuple:
        if not self.relative or not val:
            return val
        d = self.point(j).value - self.point(i).value
        return tuple(v + d for v in val)

    def _temporal(self, n: int, kind: int, i: int, val: tuple) -> bool:
        t = self.t
        left = t.a[n]
        if kind == UANN:
            right, ivs = t.b[n]
            base = self.point(i).value
            for j in range(i + 1, self.last(i) + 1):
                vj = self._advance(val, i, j)
                if ivs.contains(self.point(j).value - base) and self.holds(right, j, vj):
                    return True
                if not self.holds(left, j, vj):
                    return False
            return False
        right = t.b[n]
        for j in range(i + 1, self.last(i) + 1):
            vj = self._advance(val, i, j)
            if kind == UNTIL:
                if self.holds(right, j, vj):
                    return True
                if not self.holds(left, j, vj):
                    return False
            else:
                if not self.holds(right, j, vj):
                    return False
                if self.holds(left, j, vj):
                    return True
        return kind == RELEASE

    def valuation(self, given: Mapping[str, int] | None, i: int) -> tuple:
        regs = self.t.registers
        given = dict(given or {})
        if self.relative:
            return tuple(given.get(r, 0) for r in regs)
        d0 = self.point(0).value
        return tuple(given.get(r, d0) for r in regs)


def check_naive(w: DataWord | PeriodicWord, phi: fm.Formula, horizon: int | None = None) -> Verdict:
    """Evaluate ``phi`` at position 0 with every register holding ``d_0``."""
    ev = _NaiveEval(w, phi, horizon, relative=False)
    res = ev.holds(ev.t.root, 0, ev.valuation(None, 0))
    stats = {"engine": "naive", "memo-entries": len(ev.memo)}
    if ev.window is not None:
        stats["horizon"] = ev.window
    return Verdict(res, None, stats)


def holds_at(w, phi: fm.Formula, i: int, valuation: Mapping[str, int] | None = None,
             horizon: int | None = None) -> bool:
    """Absolute semantics at position ``i``; unmentioned registers hold ``d_0``."""
    ev = _NaiveEval(w, phi, horizon, relative=False)
    return ev.holds(ev.t.root, i, ev.valuation(valuation, i))


def holds_relative(w, phi: fm.Formula, i: int, delta: Mapping[str, int] | None = None,
                   horizon: int | None = None) -> bool:
    """Relative semantics at position ``i``: ``delta(x)`` is ``d_i - nu(x)``.

    Positions are never folded and valuations never clamped, so this is the
    plain definition the engines' shortcuts are tested against.
    """
    ev = _NaiveEval(w, phi, horizon, relative=True)
    return ev.holds(ev.t.root, i, ev.valuation(delta, i))
