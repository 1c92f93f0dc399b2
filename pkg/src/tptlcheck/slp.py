"""Straight-line programs (SLPs) generating data words.

Every variable has one rule: ``Concat(B, C)``, ``Shift(B, d)`` with ``d >= 0``
or ``Leaf(props, d)``.  Lengths, minima and maxima are computed bottom-up when
the program is built, so none of the compressed-domain queries ever expands
the word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

from .dataword import DataPoint, DataWord, NegativeValueError

DEFAULT_BUDGET = 1 << 20


class SlpError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    """Expansion would produce more points than the configured budget."""


@dataclass(frozen=True)
class Concat:
    left: str
    right: str


@dataclass(frozen=True)
class Shift:
    child: str
    delta: int

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise SlpError("shift rules take a natural offset")


@dataclass(frozen=True)
class Leaf:
    props: frozenset[str]
    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.props, frozenset):
            object.__setattr__(self, "props", frozenset(self.props))
        if self.value < 0:
            raise NegativeValueError("leaf value must be a natural number")


Rule = Union[Concat, Shift, Leaf]


@dataclass(frozen=True)
class SlpPeriodicWord:
    """``val(prefix) (val(period))^omega_{+offset}``; ``prefix`` may be ``None``."""

    prefix: Optional["Slp"]
    period: "Slp"
    offset: int = 0

    def __post_init__(self) -> None:
        if self.offset < 0:
            raise ValueError("offset must be a natural number")


def _children(rule: Rule) -> tuple[str, ...]:
    if isinstance(rule, Concat):
        return (rule.left, rule.right)
    if isinstance(rule, Shift):
        return (rule.child,)
    return ()


class Slp:
    """An acyclic grammar with a designated output variable.

    Rules unreachable from the output are dropped.  ``order`` lists the
    variables children-first; ``length``, ``low`` and ``high`` map each
    variable to the length, minimum and maximum of the word it generates.
    """

    __slots__ = ("output", "rules", "order", "length", "low", "high")

    def __init__(self, rules: Mapping[str, Rule], output: str) -> None:
        self.output = output
        order: list[str] = []
        state: dict[str, int] = {}  # 1 = on stack, 2 = done
        stack: list[tuple[str, int]] = [(output, 0)]
        while stack:
            name, idx = stack.pop()
            if idx == 0:
                if state.get(name) == 2:
                    continue
                if name not in rules:
                    raise SlpError(f"variable {name!r} has no rule")
                state[name] = 1
            kids = _children(rules[name])
            if idx < len(kids):
                stack.append((name, idx + 1))
                kid = kids[idx]
                s = state.get(kid)
                if s == 1:
                    raise SlpError(f"rules are cyclic through {kid!r}")
                if s is None:
                    stack.append((kid, 0))
            else:
                state[name] = 2
                order.append(name)
        self.rules = {n: rules[n] for n in order}
        self.order = tuple(order)
        length: dict[str, int] = {}
        low: dict[str, int] = {}
        high: dict[str, int] = {}
        for n in order:
            r = self.rules[n]
            if isinstance(r, Leaf):
                length[n], low[n], high[n] = 1, r.value, r.value
            elif isinstance(r, Shift):
                c = r.child
                length[n], low[n], high[n] = length[c], low[c] + r.delta, high[c] + r.delta
            else:
                a, b = r.left, r.right
                length[n] = length[a] + length[b]
                low[n] = min(low[a], low[b])
                high[n] = max(high[a], high[b])
        self.length = length
        self.low = low
        self.high = high

    def __len__(self) -> int:
        return self.length[self.output]

    def __repr__(self) -> str:
        return f"Slp(output={self.output!r}, rules={len(self.rules)})"

    @property
    def size(self) -> int:
        return len(self.rules)


def slp_length(g: Slp) -> int:
    return g.length[g.output]


def slp_min(g: Slp) -> int:
    return g.low[g.output]


def slp_max(g: Slp) -> int:
    return g.high[g.output]


def slp_at(g: Slp, i: int) -> DataPoint:
    if not 0 <= i < g.length[g.output]:
        raise IndexError(f"position {i} outside SLP of length {g.length[g.output]}")
    rules, length = g.rules, g.length
    name, acc = g.output, 0
    while True:
        r = rules[name]
        if isinstance(r, Leaf):
            return DataPoint(r.props, r.value + acc)
        if isinstance(r, Shift):
            acc += r.delta
            name = r.child
        else:
            n = length[r.left]
            if i < n:
                name = r.left
            else:
                i -= n
                name = r.right


def iter_points(g: Slp, name: str | None = None, start: int = 0, stop: int | None = None) -> Iterator[DataPoint]:
    """Yield the points of ``val(name)`` in ``[start, stop)`` lazily."""
    name = g.output if name is None else name
    stop = g.length[name] if stop is None else stop
    rules, length = g.rules, g.length
    stack = [(name, 0, 0)]  # variable, accumulated shift, absolute start
    while stack:
        n, acc, lo = stack.pop()
        hi = lo + length[n]
        if hi <= start or lo >= stop:
            continue
        r = rules[n]
        if isinstance(r, Leaf):
            yield DataPoint(r.props, r.value + acc)
        elif isinstance(r, Shift):
            stack.append((r.child, acc + r.delta, lo))
        else:
            stack.append((r.right, acc, lo + length[r.left]))
            stack.append((r.left, acc, lo))


def slp_expand(g: Slp, budget: int = DEFAULT_BUDGET) -> DataWord:
    n = g.length[g.output]
    if n > budget:
        raise BudgetExceededError(f"expansion has {n} points, budget is {budget}")
    return DataWord(tuple(iter_points(g)))


class SlpBuilder:
    """Incrementally assemble an SLP with automatically named variables."""

    def __init__(self, prefix: str = "N") -> None:
        self.rules: dict[str, Rule] = {}
        self._prefix = prefix
        self._count = 0
        self._leaves: dict[tuple[frozenset[str], int], str] = {}
        self._lengths: dict[str, int] = {}

    def _fresh(self, rule: Rule, length: int) -> str:
        name = f"{self._prefix}{self._count}"
        self._count += 1
        self.rules[name] = rule
        self._lengths[name] = length
        return name

    def leaf(self, props: Iterable[str], value: int) -> str:
        key = (frozenset(props), value)
        name = self._leaves.get(key)
        if name is None:
            name = self._leaves[key] = self._fresh(Leaf(*key), 1)
        return name

    def concat(self, a: str, b: str) -> str:
        return self._fresh(Concat(a, b), self._lengths[a] + self._lengths[b])

    def shift(self, a: str, d: int) -> str:
        if d == 0:
            return a
        r = self.rules[a]
        if isinstance(r, Shift):
            return self.shift(r.child, r.delta + d)
        return self._fresh(Shift(a, d), self._lengths[a])

    def seq(self, names: list[str]) -> str:
        """Balanced concatenation of a nonempty list of variables."""
        if not names:
            raise SlpError("cannot build an empty word")
        while len(names) > 1:
            paired = [self.concat(names[i], names[i + 1]) for i in range(0, len(names) - 1, 2)]
            if len(names) % 2:
                paired.append(names[-1])
            names = paired
        return names[0]

    def word(self, w: DataWord | Iterable[DataPoint]) -> str:
        return self.seq([self.leaf(p.props, p.value) for p in w])

    def include(self, g: Slp) -> str:
        """Copy ``g``'s rules under fresh names; return the name of its output."""
        names: dict[str, str] = {}
        for n in g.order:
            r = g.rules[n]
            if isinstance(r, Leaf):
                names[n] = self.leaf(r.props, r.value)
            elif isinstance(r, Shift):
                names[n] = self.shift(names[r.child], r.delta)
            else:
                names[n] = self.concat(names[r.left], names[r.right])
        return names[g.output]

    def length(self, name: str) -> int:
        return self._lengths[name]

    def build(self, output: str) -> Slp:
        return Slp(self.rules, output)


def slp_from_word(w: DataWord) -> Slp:
    b = SlpBuilder()
    return b.build(b.word(w))


def slp_concat(*parts: Slp) -> Slp:
    b = SlpBuilder()
    return b.build(b.seq([b.include(g) for g in parts]))


def slp_reverse(g: Slp) -> Slp:
    """The SLP of the reversed word: swap the children of every concatenation."""
    rules = {
        n: Concat(r.right, r.left) if isinstance(r, Concat) else r for n, r in g.rules.items()
    }
    return Slp(rules, g.output)


def _product(b: SlpBuilder, base: str, m: int, k: int) -> str:
    """``prod_{i=0}^{m-1} val(base)_{+ik}`` for ``k >= 0`` and ``m >= 1``.

    Doubling gives ``U_n`` for ``2^n`` copies; the binary expansion of ``m``
    then glues the needed powers together, each shifted by the number of
    copies already emitted times ``k``.
    """
    powers = [base]
    while (1 << len(powers)) <= m:
        n = len(powers) - 1
        u = powers[n]
        powers.append(b.concat(u, b.shift(u, (1 << n) * k)))
    acc, done = None, 0
    for n in range(len(powers) - 1, -1, -1):
        if m >> n & 1:
            block = b.shift(powers[n], done * k)
            acc = block if acc is None else b.concat(acc, block)
            done += 1 << n
    return acc


def slp_iterate(u: DataWord, m: int, k: int) -> Slp:
    """SLP for ``u_{+k} u_{+2k} ... u_{+mk}`` of size ``O(|u| + log m)``."""
    if m < 1 or len(u) == 0:
        raise SlpError("iteration needs a nonempty word and m >= 1")
    lo = u.min()
    if lo + min(k, m * k) < 0:
        raise NegativeValueError("iteration would produce a negative data value")
    b = SlpBuilder()
    if k >= 0:
        base = b.word(DataPoint(p.props, p.value + k) for p in u)
        return b.build(_product(b, base, m, k))
    # Build the reversed product from the last (smallest) copy upward.
    last = [DataPoint(p.props, p.value + m * k) for p in reversed(u.points)]
    base = b.word(last)
    return slp_reverse(b.build(_product(b, base, m, -k)))
