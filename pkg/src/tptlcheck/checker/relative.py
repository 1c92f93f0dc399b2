"""Path checking over periodic and SLP-compressed words with relative valuations.

A configuration is ``(i, delta, psi)``: a position, the difference
``d_i - nu(x)`` for every register free in ``psi``, and a subformula in
negation normal form.  Three facts keep the set of configurations finite:

* inside the periodic part, position ``i`` and ``i + |u2|`` satisfy the same
  formulas under the same relative valuation, so positions are folded into
  ``[0, |u1| + |u2|)``;
* in the periodic part a register value above ``C + M`` behaves like
  ``C + M + 1`` forever after (``C`` the largest constant, ``M`` the spread
  of data values in ``u2``), so valuations are clamped there;
* an Until only needs to look ``n`` periods ahead, where ``n`` is the number
  of periods after which every free register is clamped.

Configurations are solved by a memoized AND-OR recursion.  Until and Release
scan their window left to right over a tree of blocks (SLP variables and
ranges of period copies).  Each block carries the range of its data values
and the propositions common to, or present in, its points; a block on which
the scan provably cannot stop is skipped in one step.  This is what makes a
search across ``2^20`` compressed positions cheap.
"""

from __future__ import annotations

from typing import Optional

from .. import formula as fm
from ..dataword import DataWord, PeriodicWord
from ..slp import Concat, Leaf, Shift, Slp, SlpBuilder, slp_at
from .common import (
    AND, CONS, FREEZE, NPROP, NTRUE, OR, PROP, RELEASE, TRUE, UNTIL,
    Interned, Verdict, WitnessStep, ensure_recursion_limit,
)

WITNESS_LIMIT = 200


class _Track:
    """The word as seen by the engine: prefix and optional period SLPs."""

    def __init__(self, prefix: Optional[Slp], period: Optional[Slp], offset: int,
                 points: Optional[list] = None) -> None:
        if prefix is None and period is None:
            raise ValueError("the word must be nonempty")
        self.prefix, self.period, self.k = prefix, period, offset
        self.n1 = len(prefix) if prefix is not None else 0
        self.n2 = len(period) if period is not None else 0
        self.infinite = period is not None
        self.summary: dict[int, dict[str, tuple]] = {}
        for g in (prefix, period):
            if g is not None and id(g) not in self.summary:
                self.summary[id(g)] = _props_summary(g)
        self._points = points
        self._cache: dict[int, tuple[int, frozenset]] = {}

    def point(self, f: int) -> tuple[int, frozenset]:
        """Value and propositions at folded position ``f``."""
        if self._points is not None:
            return self._points[f]
        p = self._cache.get(f)
        if p is None:
            pt = slp_at(self.prefix, f) if f < self.n1 else slp_at(self.period, f - self.n1)
            p = self._cache[f] = (pt.value, pt.props)
        return p

    def fold(self, j: int) -> int:
        if j < self.n1:
            return j
        return (j - self.n1) % self.n2 + self.n1


def _props_summary(g: Slp) -> dict[str, tuple]:
    out: dict[str, tuple] = {}
    for n in g.order:
        r = g.rules[n]
        if isinstance(r, Leaf):
            out[n] = (r.props, r.props)
        elif isinstance(r, Shift):
            out[n] = out[r.child]
        else:
            a, b = out[r.left], out[r.right]
            out[n] = (a[0] & b[0], a[1] | b[1])
    return out


def _explicit_track(prefix: DataWord, period: Optional[DataWord], offset: int) -> _Track:
    b = SlpBuilder()
    pre = b.build(b.word(prefix)) if len(prefix) else None
    per = b.build(b.word(period)) if period is not None else None
    pts = [(p.value, p.props) for p in prefix]
    if period is not None:
        pts += [(p.value, p.props) for p in period]
    return _Track(pre, per, offset, pts)


def _cmp_range(c: fm.Constraint, lo: int, hi: int) -> Optional[bool]:
    """Truth of ``x ~ c`` for every ``x`` in ``[lo, hi]``; ``None`` if mixed."""
    rel, k = c.rel, c.const
    if rel == "<":
        return True if hi < k else False if lo >= k else None
    if rel == "<=":
        return True if hi <= k else False if lo > k else None
    if rel == "=":
        return True if lo == hi == k else False if k < lo or k > hi else None
    if rel == ">=":
        return True if lo >= k else False if hi < k else None
    return True if lo > k else False if hi <= k else None


class RelativeEngine:
    def __init__(self, track: _Track, phi: fm.Formula, memoize: bool = True) -> None:
        ensure_recursion_limit()
        self.w = track
        self.t = Interned(fm.nnf(fm.desugar(phi)))
        self.C = fm.c_phi(self.t.formula[self.t.root])
        self.memoize = memoize
        self.memo: dict = {}
        if track.infinite:
            g = track.period
            self.m2 = g.low[g.output]
            self.M = g.high[g.output] - self.m2
            self.cap = self.C + self.M + 1
        self.max_window = 0

    # -- exact evaluation ---------------------------------------------------

    def holds(self, n: int, i: int, d: tuple) -> bool:
        t = self.t
        kind = t.kind[n]
        if kind == TRUE:
            return True
        if kind == NTRUE:
            return False
        if kind == PROP:
            return t.a[n] in self.w.point(i)[1]
        if kind == NPROP:
            return t.a[n] not in self.w.point(i)[1]
        if kind == CONS:
            return t.b[n].holds(d[t.a[n]])
        if kind == AND:
            return self.holds(t.a[n], i, d) and self.holds(t.b[n], i, d)
        if kind == OR:
            return self.holds(t.a[n], i, d) or self.holds(t.b[n], i, d)
        if kind == FREEZE:
            r = t.a[n]
            return self.holds(t.b[n], i, d[:r] + (0,) + d[r + 1:])
        if not self.memoize:
            return self.scan(n, i, d)[0]
        key = (n, i, tuple(d[r] for r in t.free[n]))
        res = self.memo.get(key)
        if res is None:
            res = self.memo[key] = self.scan(n, i, d)[0]
        return res

    # -- three-valued evaluation over a block -------------------------------

    def _abstract(self, n: int, d: tuple, lo: int, hi: int, pall, pany, clamp: bool) -> Optional[bool]:
        """Truth of node ``n`` at every point of a block, or ``None``.

        ``lo``/``hi`` bound the block's data values after subtracting the
        current position's value.
        """
        t = self.t
        kind = t.kind[n]
        if kind == TRUE:
            return True
        if kind == NTRUE:
            return False
        if kind == PROP:
            p = t.a[n]
            return True if p in pall else False if p not in pany else None
        if kind == NPROP:
            p = t.a[n]
            return False if p in pall else True if p not in pany else None
        if kind == CONS:
            v = d[t.a[n]]
            a, b = v + lo, v + hi
            if clamp:
                a, b = min(a, self.cap), min(b, self.cap)
            return _cmp_range(t.b[n], a, b)
        if kind == AND or kind == OR:
            x = self._abstract(t.a[n], d, lo, hi, pall, pany, clamp)
            stop = kind == OR  # value that decides the connective
            if x is stop:
                return stop
            y = self._abstract(t.b[n], d, lo, hi, pall, pany, clamp)
            if y is stop:
                return stop
            if x is None or y is None:
                return None
            return not stop
        return None

    # -- Until / Release ----------------------------------------------------

    def window(self, n: int, i: int, d: tuple, di: int) -> int:
        """Number of period copies an Until at ``(i, d)`` has to inspect."""
        w = self.w
        free = self.t.free[n]
        if w.k == 0 or not free:
            return 2
        m_delta = min(d[r] for r in free)
        need = self.C + self.M + 1 + di - m_delta - self.m2
        return max(2, -(-need // w.k) + 1)

    def scan(self, n: int, i: int, d: tuple) -> tuple[bool, Optional[int], Optional[tuple]]:
        """Decide an Until/Release node; also return the deciding position.

        For ``a U b`` the scan stops at the first ``j > i`` where ``b`` holds
        (true) or ``a`` fails (false).  For ``a R b`` it stops where ``b``
        fails (false) or ``a`` holds (true).  Running off the window means
        false for Until and true for Release.
        """
        t, w = self.t, self.w
        until = t.kind[n] == UNTIL
        left, right = t.a[n], t.b[n]
        di = w.point(i)[0]
        n1, n2, k = w.n1, w.n2, w.k
        # Skip condition: ``right`` never decides and ``left`` never stops.
        skip_right, skip_left = (False, True) if until else (True, False)

        def block_skippable(lo, hi, pall, pany, clamp):
            if self._abstract(right, d, lo - di, hi - di, pall, pany, clamp) is not skip_right:
                return False
            return self._abstract(left, d, lo - di, hi - di, pall, pany, clamp) is skip_left

        def visit(j, value):
            """Exact step at position ``j`` (folded coordinates)."""
            f = j if j < n1 else (j - n1) % n2 + n1
            shift = value - di
            dj = tuple(v + shift for v in d)
            if j >= n1 and w.infinite:
                cap = self.cap
                dj = tuple(v if v <= cap else cap for v in dj)
            if until:
                if self.holds(right, f, dj):
                    return True, dj
                if not self.holds(left, f, dj):
                    return False, dj
            else:
                if not self.holds(right, f, dj):
                    return False, dj
                if self.holds(left, f, dj):
                    return True, dj
            return None, dj

        def descend(g: Slp, summary, start: int, acc: int, first: int, clamp: bool):
            """Scan ``val(g)`` placed at ``start`` with values raised by ``acc``."""
            rules, length, low, high = g.rules, g.length, g.low, g.high
            stack = [(g.output, start, acc)]
            while stack:
                name, s, a = stack.pop()
                e = s + length[name]
                if e <= first:
                    continue
                r = rules[name]
                while isinstance(r, Shift):
                    a += r.delta
                    name = r.child
                    r = rules[name]
                if isinstance(r, Leaf):
                    res, dj = visit(s, r.value + a)
                    if res is not None:
                        return res, s, dj
                    continue
                # A summary covering extra points before ``first`` is still
                # a sound reason to skip.
                pall, pany = summary[name]
                if block_skippable(low[name] + a, high[name] + a, pall, pany, clamp):
                    continue
                stack.append((r.right, s + length[r.left], a))
                stack.append((r.left, s, a))
            return None

        if w.prefix is not None and i + 1 < n1:
            found = descend(w.prefix, w.summary[id(w.prefix)], 0, 0, i + 1, False)
            if found:
                return found
        if not w.infinite:
            return (not until), None, None

        copies = self.window(n, i, d, di)
        self.max_window = max(self.max_window, copies)
        g = w.period
        summary = w.summary[id(g)]
        plo, phi = g.low[g.output], g.high[g.output]
        pall, pany = summary[g.output]
        first = i + 1
        # Copy ranges [t0, t1) of the period, split in halves unless skippable.
        stack = [(0, copies)]
        while stack:
            t0, t1 = stack.pop()
            start = n1 + t0 * n2
            if start + (t1 - t0) * n2 <= first:
                continue
            if block_skippable(plo + t0 * k, phi + (t1 - 1) * k, pall, pany, True):
                continue
            if t1 - t0 > 1:
                mid = (t0 + t1) // 2
                stack.append((mid, t1))
                stack.append((t0, mid))
                continue
            found = descend(g, summary, start, t0 * k, first, True)
            if found:
                return found
        return (not until), None, None

    # -- witnesses ----------------------------------------------------------

    def absolute_value(self, j_abs: int) -> int:
        w = self.w
        f = w.fold(j_abs) if w.infinite else j_abs
        v = w.point(f)[0]
        if w.infinite and j_abs >= w.n1:
            v += ((j_abs - w.n1) // w.n2) * w.k
        return v

    def explain(self, n: int, i: int, i_abs: int, d: tuple, out: list) -> None:
        """Record the existential choices of a satisfied configuration."""
        t = self.t
        todo = [(n, i, i_abs, d)]
        while todo and len(out) < WITNESS_LIMIT:
            n, i, i_abs, d = todo.pop()
            kind = t.kind[n]
            if kind == AND:
                todo.append((t.b[n], i, i_abs, d))
                todo.append((t.a[n], i, i_abs, d))
            elif kind == OR:
                side = "left" if self.holds(t.a[n], i, d) else "right"
                out.append(self._step(n, i_abs, d, side))
                todo.append((t.a[n] if side == "left" else t.b[n], i, i_abs, d))
            elif kind == FREEZE:
                r = t.a[n]
                todo.append((t.b[n], i, i_abs, d[:r] + (0,) + d[r + 1:]))
            elif kind in (UNTIL, RELEASE):
                res, j, dj = self.scan(n, i, d)
                if j is None:
                    out.append(self._step(n, i_abs, d, "always"))
                    continue
                j_abs = i_abs + (j - i)
                out.append(self._step(n, i_abs, d, j_abs))
                f = self.w.fold(j) if self.w.infinite else j
                todo.append((t.b[n] if kind == UNTIL else t.a[n], f, j_abs, dj))

    def _step(self, n: int, i_abs: int, d: tuple, choice) -> WitnessStep:
        t = self.t
        v = self.absolute_value(i_abs)
        regs = tuple((t.registers[r], v - d[r]) for r in t.free[n])
        return WitnessStep(fm.to_text(t.formula[n]), i_abs, regs, choice)

    def run(self, witness: bool = True) -> Verdict:
        d0 = (0,) * len(self.t.registers)
        res = self.holds(self.t.root, 0, d0)
        steps = None
        if res and witness:
            out: list = []
            self.explain(self.t.root, 0, 0, d0, out)
            steps = tuple(out)
        stats = {"memo-entries": len(self.memo), "window": self.max_window}
        return Verdict(res, steps, stats)


def check_periodic(w: PeriodicWord | DataWord, phi: fm.Formula, memoize: bool = True,
                   witness: bool = True) -> Verdict:
    """Decide ``w |= phi``; a plain ``DataWord`` is checked as a finite word."""
    if isinstance(w, DataWord):
        if len(w) == 0:
            raise ValueError("the word must be nonempty")
        track = _explicit_track(w, None, 0)
    else:
        track = _explicit_track(w.prefix, w.period, w.offset)
    v = RelativeEngine(track, phi, memoize).run(witness)
    v.stats["engine"] = "periodic"
    return v


def check_slp(u1: Optional[Slp], u2: Optional[Slp], k: int, phi: fm.Formula,
              witness: bool = True) -> Verdict:
    """Decide ``val(u1) val(u2)^omega_{+k} |= phi`` without expanding.

    With ``u2 = None`` the finite word ``val(u1)`` is checked; ``u1 = None``
    stands for an empty prefix.
    """
    if k < 0:
        raise ValueError("offset must be a natural number")
    v = RelativeEngine(_Track(u1, u2, k), phi).run(witness)
    v.stats["engine"] = "slp"
    return v


def holds_engine(w: PeriodicWord, phi: fm.Formula, i: int, delta: dict[str, int]) -> bool:
    """Engine verdict at a folded position and relative valuation (for tests)."""
    eng = RelativeEngine(_explicit_track(w.prefix, w.period, w.offset), phi)
    d = tuple(delta.get(r, 0) for r in eng.t.registers)
    return eng.holds(eng.t.root, i, d)
