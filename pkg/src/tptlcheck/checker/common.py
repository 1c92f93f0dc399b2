"""Shared pieces of the evaluation engines."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Any, Optional

from .. import formula as fm

RECURSION_LIMIT = 20000


def ensure_recursion_limit(n: int = RECURSION_LIMIT) -> None:
    if sys.getrecursionlimit() < n:
        sys.setrecursionlimit(n)


@dataclass(frozen=True)
class WitnessStep:
    """One existential choice: ``formula`` held at ``position`` via ``choice``.

    ``choice`` is the witnessing position of an Until (or of the second
    alternative of a Release) or ``"left"``/``"right"`` for a disjunction.
    ``valuation`` maps registers to absolute data values at ``position``.
    """

    formula: str
    position: int
    valuation: tuple[tuple[str, int], ...]
    choice: Any


@dataclass
class Verdict:
    satisfied: bool
    witness: Optional[tuple[WitnessStep, ...]] = None
    stats: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.satisfied


class RegisterCountError(ValueError):
    pass


# Node kinds of the interned representation.
TRUE, NTRUE, PROP, NPROP, CONS, NOT, AND, OR, UNTIL, RELEASE, FREEZE, UANN = range(12)


class Interned:
    """Flat, id-indexed view of a formula DAG.

    ``kind[n]``, ``a[n]``, ``b[n]`` hold the node kind and its operands:
    children ids for connectives, the proposition name, the register index and
    ``Constraint`` for constraints, the register index for freeze.
    ``free[n]`` is the sorted tuple of register indices free in node ``n``.
    """

    def __init__(self, root: fm.Formula, registers: tuple[str, ...] | None = None) -> None:
        regs = registers if registers is not None else tuple(sorted(fm.registers(root)))
        self.registers = regs
        self.reg_index = {r: i for i, r in enumerate(regs)}
        self.kind: list[int] = []
        self.a: list[Any] = []
        self.b: list[Any] = []
        self.free: list[tuple[int, ...]] = []
        self.formula: list[fm.Formula] = []
        self._ids: dict[fm.Formula, int] = {}
        self.root = self._intern(root)

    def _intern(self, root: fm.Formula) -> int:
        ids = self._ids
        stack = [(root, False)]
        while stack:
            f, expanded = stack.pop()
            if f in ids:
                continue
            kids = fm.children(f)
            if kids and not expanded:
                stack.append((f, True))
                stack.extend((c, False) for c in kids if c not in ids)
                continue
            ids[f] = self._add(f)
        return ids[root]

    def _add(self, f: fm.Formula) -> int:
        ids = self._ids
        a = b = None
        free: frozenset[int] = frozenset()
        if isinstance(f, fm.TrueFormula):
            kind = TRUE
        elif isinstance(f, fm.Prop):
            kind, a = PROP, f.name
        elif isinstance(f, fm.Constraint):
            kind, a, b = CONS, self.reg_index[f.register], f
            free = frozenset((a,))
        elif isinstance(f, fm.Not):
            c = ids[f.arg]
            if self.kind[c] == TRUE:
                kind = NTRUE
            elif self.kind[c] == PROP:
                kind, a = NPROP, self.a[c]
            else:
                kind, a = NOT, c
            free = frozenset(self.free[c])
        elif isinstance(f, fm.Freeze):
            kind, a, b = FREEZE, self.reg_index[f.register], ids[f.body]
            free = frozenset(self.free[b]) - {a}
        else:
            a, b = ids[f.left], ids[f.right]
            kind = {fm.And: AND, fm.Or: OR, fm.Until: UNTIL, fm.Release: RELEASE,
                    fm.UntilAnnotated: UANN}[type(f)]
            free = frozenset(self.free[a]) | frozenset(self.free[b])
            if kind == UANN:
                b = (b, f.intervals)
        self.kind.append(kind)
        self.a.append(a)
        self.b.append(b)
        self.free.append(tuple(sorted(free)))
        self.formula.append(f)
        return len(self.kind) - 1

    def __len__(self) -> int:
        return len(self.kind)
