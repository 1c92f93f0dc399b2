"""Polynomial-time path checking for one-register formulas on periodic words.

With a single register every freeze subformula ``x.psi`` is closed, so its
truth at a position depends on the position alone, and inside the period it
repeats with the period.  Working from the innermost freeze outwards, each
one is evaluated at the ``|u1| + |u2|`` representative positions and then
replaced by a fresh proposition ``$f<n>``.

Evaluating ``x.psi`` at position ``i`` starts by rotating the word so that
``i`` becomes position 0.  Once nested freezes are gone, every constraint in
``psi`` compares a data value with ``d_i``.  Along the copies of the period
such a comparison changes truth value at most twice (one switching point for
``<``, ``<=``, ``>=``, ``>``; two for ``=``), so the copies split into a few
runs on which every constraint is a fixed proposition ``$c<n>``.  A run of
``N`` copies can be shortened to ``min(N, |psi|)`` copies without changing
any LTL verdict, and the last run becomes a plain period.  The constraint-
free result is decided by the periodic engine.
"""

from __future__ import annotations

from .. import formula as fm
from ..dataword import DataPoint, DataWord, PeriodicWord
from .common import RegisterCountError, Verdict
from .relative import check_periodic

_Points = list[tuple[int, frozenset]]


def _switches(rel: str, c: int, base: int, k: int) -> list[int]:
    """Copy indices ``a >= 1`` where ``base + a*k ~ c`` may change truth."""
    if k == 0:
        return []
    room = c - base
    if rel in ("<", ">="):
        cuts = [-(-room // k)]
    elif rel in ("<=", ">"):
        cuts = [room // k + 1]
    else:
        cuts = [room // k, room // k + 1] if room % k == 0 else []
    return [a for a in cuts if a >= 1]


def _rotate(prefix: _Points, period: _Points, k: int, i: int) -> tuple[_Points, _Points]:
    n1 = len(prefix)
    if i < n1:
        return prefix[i:], period
    r = i - n1
    return [], period[r:] + [(v + k, ps) for v, ps in period[:r]]


def _label_constraints(
    points: _Points, constraints: list[tuple[str, fm.Constraint]], d0: int, shift: int
) -> list[DataPoint]:
    out = []
    for v, ps in points:
        diff = v + shift - d0
        extra = {name for name, c in constraints if c.holds(diff)}
        out.append(DataPoint(ps | extra, 0))
    return out


def _freeze_at_zero(body: fm.Formula, prefix: _Points, period: _Points, k: int) -> bool:
    """Decide ``(w, 0, nu(x) = d_0) |= body`` for a body without freezes."""
    table: dict[fm.Formula, fm.Formula] = {}
    constraints: list[tuple[str, fm.Constraint]] = []
    for g in fm.subformulas(body):
        if isinstance(g, fm.Constraint) and g not in table:
            name = f"$c{len(constraints)}"
            table[g] = fm.Prop(name)
            constraints.append((name, g))
    ltl = fm.replace(body, table)
    d0 = (prefix or period)[0][0]
    cuts = sorted({a for v, _ in period for _, c in constraints for a in _switches(c.rel, c.const, v - d0, k)})
    cap = fm.size(ltl)
    word = _label_constraints(prefix, constraints, d0, 0)
    starts = [0, *cuts]
    for lo, hi in zip(starts, starts[1:]):
        copy = _label_constraints(period, constraints, d0, lo * k)
        word.extend(copy * min(hi - lo, cap))
    last = _label_constraints(period, constraints, d0, starts[-1] * k)
    v = check_periodic(PeriodicWord(DataWord(tuple(word)), DataWord(tuple(last)), 0), ltl,
                       witness=False)
    return v.satisfied


def check_tptl1(w: PeriodicWord, phi: fm.Formula) -> Verdict:
    phi = fm.desugar(phi)
    regs = fm.registers(phi)
    if len(regs) > 1:
        raise RegisterCountError(f"one register allowed, formula uses {len(regs)}")
    if regs:
        (x,) = regs
        if x in fm.free_registers(phi):
            # The initial valuation maps x to d_0, as if frozen at position 0.
            phi = fm.Freeze(x, phi)
    prefix: _Points = [(p.value, p.props) for p in w.prefix]
    period: _Points = [(p.value, p.props) for p in w.period]
    k = w.offset
    n_all = len(prefix) + len(period)

    freezes: list[fm.Freeze] = []
    seen = set()
    for g in reversed(list(fm.subformulas(phi))):  # children before parents
        if isinstance(g, fm.Freeze) and g not in seen:
            seen.add(g)
            freezes.append(g)
    table: dict[fm.Formula, fm.Formula] = {}
    evaluated = 0
    for s, fz in enumerate(freezes):
        body = fm.replace(fz.body, table)
        name = f"$f{s}"
        truth = []
        for i in range(n_all):
            pre, per = _rotate(prefix, period, k, i)
            truth.append(_freeze_at_zero(body, pre, per, k))
            evaluated += 1
        n1 = len(prefix)
        prefix = [(v, ps | {name}) if truth[i] else (v, ps) for i, (v, ps) in enumerate(prefix)]
        period = [(v, ps | {name}) if truth[n1 + i] else (v, ps) for i, (v, ps) in enumerate(period)]
        table[fz] = fm.Prop(name)

    top = fm.replace(phi, table)
    word = PeriodicWord(
        DataWord(tuple(DataPoint(ps, v) for v, ps in prefix)),
        DataWord(tuple(DataPoint(ps, v) for v, ps in period)),
        k,
    )
    v = check_periodic(word, top, witness=False)
    return Verdict(v.satisfied, None, {"engine": "tptl1", "freeze-evaluations": evaluated})
