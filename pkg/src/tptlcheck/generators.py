"""Instance generators built from hardness reductions, each with a direct oracle.

Every generator turns a problem instance (a monotone circuit, a quantified
Boolean formula, a quantified subset-sum game) into a data word and a
formula whose path-checking verdict equals the instance's answer.  The
oracles ``eval_circuit``, ``eval_qbf`` and ``eval_pqss`` compute that answer
directly, so each generated instance carries its own expected verdict.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from . import formula as fm
from .dataword import DataPoint, DataWord, PeriodicWord


class CircuitError(ValueError):
    pass


class InstanceError(ValueError):
    pass


# -- SAM2 circuits ------------------------------------------------------------

@dataclass(frozen=True)
class Sam2Circuit:
    """A synchronous alternating monotone circuit with fanin and fanout 2.

    Gates are 0-based here (1-based in the text format).  ``kinds[i]`` is
    ``"and"`` or ``"or"`` for level ``i + 1``; level ``levels`` holds the
    inputs.  ``wires[i][g]`` is the pair of level ``i + 2`` gates feeding gate
    ``g`` of level ``i + 1``.
    """

    levels: int
    gates: int
    kinds: tuple[str, ...]
    wires: tuple[tuple[tuple[int, int], ...], ...]
    inputs: tuple[bool, ...]
    output: int

    def __post_init__(self) -> None:
        l, n = self.levels, self.gates
        if l < 2 or n < 1:
            raise CircuitError("need at least two levels and one gate per level")
        if len(self.kinds) != l - 1 or any(k not in ("and", "or") for k in self.kinds):
            raise CircuitError("every non-input level needs a type 'and' or 'or'")
        if any(a == b for a, b in zip(self.kinds, self.kinds[1:])):
            raise CircuitError("level types must alternate")
        if len(self.inputs) != n:
            raise CircuitError(f"expected {n} input values")
        if not 0 <= self.output < n:
            raise CircuitError("output gate out of range")
        if len(self.wires) != l - 1:
            raise CircuitError("wires missing for some level")
        for i, level in enumerate(self.wires):
            if len(level) != n:
                raise CircuitError(f"level {i + 1}: every gate needs two inputs")
            fanout = [0] * n
            for g, pair in enumerate(level):
                if len(pair) != 2 or not all(0 <= b < n for b in pair):
                    raise CircuitError(f"gate {i + 1}:{g + 1} has bad inputs")
                if i >= 1 and pair[0] == pair[1]:
                    raise CircuitError(f"gate {i + 1}:{g + 1} reads the same gate twice")
                for b in pair:
                    fanout[b] += 1
            if any(f != 2 for f in fanout):
                raise CircuitError(f"level {i + 2}: every gate needs fanout 2")


def eval_circuit(c: Sam2Circuit) -> bool:
    values = list(c.inputs)
    for i in range(c.levels - 2, -1, -1):
        op = all if c.kinds[i] == "and" else any
        values = [op(values[b] for b in pair) for pair in c.wires[i]]
    return values[c.output]


_CIRCUIT_HEAD = re.compile(r"^circuit\s+levels=(\d+)\s+gates=(\d+)\s+output=(\d+)$")
_LEVEL = re.compile(r"^level\s+(\d+)\s+(and|or|input)(?:\s+([01](?:\s*,\s*[01])*))?$")
_WIRE = re.compile(r"^wire\s+(\d+):(\d+)\s*->\s*(\d+):(\d+)$")


def parse_circuit(text: str) -> Sam2Circuit:
    """Read ``circuit levels=L gates=N output=K`` followed by level and wire lines."""
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, t) for no, t in lines if t]
    if not lines:
        raise CircuitError("empty circuit description")
    m = _CIRCUIT_HEAD.match(lines[0][1])
    if not m:
        raise CircuitError("line 1: expected 'circuit levels=L gates=N output=K'")
    l, n, out = map(int, m.groups())
    kinds: dict[int, str] = {}
    inputs: Optional[tuple[bool, ...]] = None
    feeds: dict[int, list[list[int]]] = {i: [[] for _ in range(n)] for i in range(1, l)}
    for no, t in lines[1:]:
        if (lm := _LEVEL.match(t)):
            lev, kind = int(lm.group(1)), lm.group(2)
            if kind == "input":
                if lev != l or lm.group(3) is None:
                    raise CircuitError(f"line {no}: inputs belong to level {l} with values")
                inputs = tuple(v.strip() == "1" for v in lm.group(3).split(","))
            elif not 1 <= lev < l:
                raise CircuitError(f"line {no}: level {lev} out of range")
            else:
                kinds[lev] = kind
        elif (wm := _WIRE.match(t)):
            src_l, src_g, dst_l, dst_g = map(int, wm.groups())
            if src_l != dst_l + 1 or not 1 <= dst_l < l:
                raise CircuitError(f"line {no}: wires go from level i+1 to level i")
            if not (1 <= src_g <= n and 1 <= dst_g <= n):
                raise CircuitError(f"line {no}: gate index out of range")
            feeds[dst_l][dst_g - 1].append(src_g - 1)
        else:
            raise CircuitError(f"line {no}: cannot parse {t!r}")
    if inputs is None:
        raise CircuitError("missing input level")
    if set(kinds) != set(range(1, l)):
        raise CircuitError("every non-input level needs a 'level' line")
    wires = []
    for i in range(1, l):
        level = []
        for g, srcs in enumerate(feeds[i]):
            if len(srcs) != 2:
                raise CircuitError(f"gate {i}:{g + 1} has {len(srcs)} inputs, expected 2")
            level.append((srcs[0], srcs[1]))
        wires.append(tuple(level))
    return Sam2Circuit(l, n, tuple(kinds[i] for i in range(1, l)), tuple(wires), inputs, out - 1)


def format_circuit(c: Sam2Circuit) -> str:
    lines = [f"circuit levels={c.levels} gates={c.gates} output={c.output + 1}"]
    lines += [f"level {i + 1} {k}" for i, k in enumerate(c.kinds)]
    lines.append(f"level {c.levels} input " + ",".join("1" if x else "0" for x in c.inputs))
    for i, level in enumerate(c.wires):
        for g, pair in enumerate(level):
            lines += [f"wire {i + 2}:{b + 1} -> {i + 1}:{g + 1}" for b in pair]
    return "\n".join(lines) + "\n"


def random_circuit(rng, levels: int, gates: int, first: str = "and") -> Sam2Circuit:
    """A random well-formed circuit (each level pair is a random 2-regular bipartite graph)."""
    if gates < 2 and levels > 2:
        raise CircuitError("inner levels need two distinct inputs, so at least two gates")
    kinds = tuple(("and", "or")[(i + (first == "or")) % 2] for i in range(levels - 1))
    wires = []
    for i in range(levels - 1):
        while True:
            # Two random perfect matchings give every gate two inputs and fanout 2.
            p1, p2 = list(range(gates)), list(range(gates))
            rng.shuffle(p1)
            rng.shuffle(p2)
            level = tuple(zip(p1, p2))
            if i == 0 or all(a != b for a, b in level):
                break
        wires.append(level)
    inputs = tuple(rng.random() < 0.5 for _ in range(gates))
    return Sam2Circuit(levels, gates, kinds, tuple(wires), inputs, rng.randrange(gates))


def example_circuit() -> Sam2Circuit:
    """The three-level, five-gate example circuit with inputs c2 = c3 = 1 and output a3."""
    return Sam2Circuit(
        levels=3,
        gates=5,
        kinds=("and", "or"),
        wires=(
            ((0, 1), (1, 0), (2, 3), (3, 4), (4, 2)),
            ((0, 2), (1, 3), (4, 0), (3, 1), (2, 4)),
        ),
        inputs=(False, True, True, False, False),
        output=2,
    )


# -- MTL encoding -------------------------------------------------------------

def _cycles(pairs: tuple[tuple[int, int], ...], n: int) -> list[tuple[list[int], list[int]]]:
    """Split the bipartite multigraph between two levels into cycles.

    Each cycle starts at the first unvisited lower gate and steps to its
    smaller upper neighbour; returns ``(upper gates, lower gates)`` in walk
    order, so upper gate ``s`` is wired to lower gates ``s`` and ``s + 1``
    (cyclically).
    """
    edges = [(a, b) for a, pair in enumerate(pairs) for b in pair]
    at_lower: list[list[int]] = [[] for _ in range(n)]
    at_upper: list[list[int]] = [[] for _ in range(n)]
    for e, (a, b) in enumerate(edges):
        at_lower[b].append(e)
        at_upper[a].append(e)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        uppers, lowers = [], []
        b = start
        e = min(at_lower[b], key=lambda x: edges[x][0])
        while True:
            seen[b] = True
            lowers.append(b)
            a = edges[e][0]
            uppers.append(a)
            e = next(x for x in at_upper[a] if x != e)
            b = edges[e][1]
            if b == start:
                break
            e = next(x for x in at_lower[b] if x != e)
        out.append((uppers, lowers))
    return out


@dataclass(frozen=True)
class _Layout:
    """Slot assignment for one level pair: ``upper[g]``/``lower[g]`` give slots."""

    upper: dict[int, int]
    lower_slots: list[Optional[int]]  # lower gate per slot; None for fillers


def _layout(pairs, n: int, m: int) -> _Layout:
    upper: dict[int, int] = {}
    lower: list[Optional[int]] = []
    for ups, lows in _cycles(pairs, n):
        base = len(lower)
        for s, a in enumerate(ups):
            upper[a] = base + s
        lower.extend(lows)
        lower.append(lows[0])  # the copy of the cycle's first lower gate
    lower.extend([None] * (m - len(lower)))
    return _Layout(upper, lower)


def _circuit_word(c: Sam2Circuit) -> tuple[list[int], int, list[_Layout]]:
    n, l = c.gates, c.levels
    h = max(len(_cycles(level, n)) for level in c.wires)
    m = n + h
    layouts = [_layout(level, n, m) for level in c.wires]
    values: list[int] = []
    for i, lay in enumerate(layouts):
        d = i * 2 * m
        if i == 0:
            values += sorted(d + s for s in lay.upper.values())
        else:
            # Earlier lower line, re-valued with this pair's upper labels.
            prev = layouts[i - 1].lower_slots
            values += [d + (lay.upper[g] if g is not None else m - 1) for g in prev]
        values += [d + m + s for s in range(m)]
    return values, m, layouts


def _circuit_formula(c: Sam2Circuit, m: int, layouts: list[_Layout], leaf: fm.Formula) -> fm.Formula:
    iv = fm.interval(m, m + 1)
    last = layouts[-1].lower_slots
    chosen = [j for j, g in enumerate(last, 1) if g is not None and c.inputs[g]]
    phi = fm.disj(*(fm.X(leaf, m - j) for j in chosen))
    for i in range(c.levels - 2, -1, -1):
        if i < c.levels - 2:
            phi = fm.X(phi, m)
        phi = fm.F(phi, iv) if c.kinds[i] == "or" else fm.G(phi, iv)
    k = sorted(layouts[0].upper, key=layouts[0].upper.get).index(c.output) + 1
    return fm.X(phi, k - 1)


def circuit_input_slots(c: Sam2Circuit) -> list[int]:
    """1-based slots of the last line that carry a true input (the set J)."""
    _, _, layouts = _circuit_word(c)
    return [j for j, g in enumerate(layouts[-1].lower_slots, 1) if g is not None and c.inputs[g]]


def gen_circuit_mtl(c: Sam2Circuit) -> tuple[DataWord, fm.Formula]:
    values, m, layouts = _circuit_word(c)
    leaf = fm.Not(fm.X(fm.TRUE))  # holds exactly at the last position
    return DataWord.from_values(values), _circuit_formula(c, m, layouts, leaf)


def gen_circuit_mtl_infinite(c: Sam2Circuit) -> tuple[PeriodicWord, fm.Formula]:
    values, m, layouts = _circuit_word(c)
    p = fm.Prop("p")
    leaf = fm.And(fm.Not(p), fm.X(p))
    tail = DataWord((DataPoint(frozenset({"p"}), 5 * m * c.levels),))
    return PeriodicWord(DataWord.from_values(values), tail, 0), _circuit_formula(c, m, layouts, leaf)


# -- succinct MTL encoding ----------------------------------------------------

def smtl_word(n: int, levels: int) -> DataWord:
    block = list(range(1, n + 1)) + [i * (n + 1) for i in range(1, n + 1)]
    step = n * (n + 2)
    return DataWord.from_values([v + j * step for j in range(levels - 1) for v in block])


def smtl_offsets(c: Sam2Circuit, level: int) -> list[int]:
    """The jump set between ``level`` and ``level + 1`` (1-based level)."""
    n = c.gates
    return sorted({(b + 1) * (n + 1) - (a + 1) for a, pair in enumerate(c.wires[level - 1]) for b in pair})


def gen_circuit_smtl(c: Sam2Circuit, guarded: bool = True) -> tuple[DataWord, fm.Formula]:
    """Strictly monotonic word and succinct-MTL formula for ``c``.

    Jump offsets of small wires also match positions inside the first half of
    a block, so with ``guarded`` every jump target must additionally be a
    second-half position: its successor lies ``n + 1`` higher, or it is last.
    ``guarded=False`` gives the unguarded construction.
    """
    n, l = c.gates, c.levels
    leaf = fm.Not(fm.X(fm.TRUE))
    second_half = fm.Or(fm.X(fm.TRUE, 1, fm.interval(n + 1, n + 1)), leaf)
    chosen = [i + 1 for i in range(n) if c.inputs[i]]
    phi = fm.disj(*(fm.X(leaf, n - i) for i in chosen))
    for j in range(l - 1, 0, -1):
        if j < l - 1:
            phi = fm.X(phi, n)
        iv = fm.IntervalUnion(tuple(fm.interval(s, s).intervals[0] for s in smtl_offsets(c, j)))
        if c.kinds[j - 1] == "or":
            body = fm.And(second_half, phi) if guarded else phi
            phi = fm.F(body, iv)
        else:
            body = fm.implies(second_half, phi) if guarded else phi
            phi = fm.G(body, iv)
    return smtl_word(n, l), fm.X(phi, c.output)


# -- QBF ----------------------------------------------------------------------

@dataclass(frozen=True)
class QbfInstance:
    """``Q1 x1 ... Qn xn matrix`` with ``prefix`` a string over ``A``/``E``."""

    prefix: str
    matrix: fm.Formula

    def __post_init__(self) -> None:
        if any(q not in "AE" for q in self.prefix):
            raise InstanceError("quantifier prefix may only contain 'A' and 'E'")
        allowed = {f"x{i}" for i in range(1, len(self.prefix) + 1)}
        for g in fm.subformulas(self.matrix):
            if isinstance(g, fm.Prop):
                if g.name not in allowed:
                    raise InstanceError(f"variable {g.name} is not bound by the prefix")
            elif not isinstance(g, (fm.TrueFormula, fm.Not, fm.And, fm.Or)):
                raise InstanceError("the matrix must be a propositional formula")


def _eval_prop(f: fm.Formula, env: dict[str, bool]) -> bool:
    if isinstance(f, fm.TrueFormula):
        return True
    if isinstance(f, fm.Prop):
        return env[f.name]
    if isinstance(f, fm.Not):
        return not _eval_prop(f.arg, env)
    if isinstance(f, fm.And):
        return _eval_prop(f.left, env) and _eval_prop(f.right, env)
    return _eval_prop(f.left, env) or _eval_prop(f.right, env)


def eval_qbf(q: QbfInstance) -> bool:
    def go(i: int, env: dict[str, bool]) -> bool:
        if i == len(q.prefix):
            return _eval_prop(q.matrix, env)
        branches = (go(i + 1, {**env, f"x{i + 1}": b}) for b in (False, True))
        return all(branches) if q.prefix[i] == "A" else any(branches)

    return go(0, {})


def parse_qbf(text: str) -> QbfInstance:
    """Read ``qbf AEA`` on the first line and the matrix on the remaining lines."""
    lines = [t.split("#", 1)[0].strip() for t in text.splitlines()]
    lines = [t for t in lines if t]
    if not lines or not re.fullmatch(r"qbf\s+[AE]*", lines[0]):
        raise InstanceError("expected a 'qbf <prefix>' header")
    prefix = lines[0].split()[1] if len(lines[0].split()) > 1 else ""
    return QbfInstance(prefix, fm.parse(" ".join(lines[1:]) or "true"))


def format_qbf(q: QbfInstance) -> str:
    return f"qbf {q.prefix}\n{fm.to_text(q.matrix)}\n"


def gen_qbf(q: QbfInstance) -> tuple[DataWord, fm.Formula]:
    n = len(q.prefix)
    table = {fm.Prop(f"x{i}"): fm.Constraint(f"x{i}", "=", 2 * (n - i) + 2) for i in range(1, n + 1)}
    body = fm.F(fm.And(fm.Constraint("x", "=", 2 * n + 1), fm.replace(q.matrix, table)))
    for i in range(n, 0, -1):
        r = f"x{i}"
        pick = fm.Or(fm.Constraint(r, "=", 2 * i - 1), fm.Constraint(r, "=", 2 * i))
        inner = fm.Freeze(r, body)
        body = fm.G(fm.implies(pick, inner)) if q.prefix[i - 1] == "A" else fm.F(fm.And(pick, inner))
    # Binders x, x1, ..., xn all start at the first data value 0.
    for r in [f"x{i}" for i in range(n, 0, -1)] + ["x"]:
        body = fm.Freeze(r, body)
    return DataWord.from_values(range(2 * n + 2)), body


# -- positive quantified subset sum -------------------------------------------

@dataclass(frozen=True)
class PqssInstance:
    """``forall x1 in {1,a1} exists x2 in {1,a2} ... : x1 + ... + x2n = b``."""

    a: tuple[int, ...]
    b: int

    def __post_init__(self) -> None:
        if not self.a or len(self.a) % 2:
            raise InstanceError("PQSS needs a nonempty, even number of values")
        if any(x < 1 for x in self.a) or self.b < 1:
            raise InstanceError("PQSS values must be positive")


def eval_pqss(p: PqssInstance) -> bool:
    @lru_cache(maxsize=None)
    def go(i: int, total: int) -> bool:
        if i == len(p.a):
            return total == p.b
        branches = (go(i + 1, total + x) for x in (1, p.a[i]))
        return all(branches) if i % 2 == 0 else any(branches)

    return go(0, 0)


def parse_pqss(text: str) -> PqssInstance:
    m = re.fullmatch(r"\s*pqss\s+a=(\d+(?:,\d+)*)\s+b=(\d+)\s*", text.split("#", 1)[0])
    if not m:
        raise InstanceError("expected 'pqss a=1,2,3,4 b=6'")
    return PqssInstance(tuple(int(x) for x in m.group(1).split(",")), int(m.group(2)))


def format_pqss(p: PqssInstance) -> str:
    return f"pqss a={','.join(map(str, p.a))} b={p.b}\n"


def pqss_word() -> PeriodicWord:
    """``0 (1)^omega_{+1}``: the natural numbers in order."""
    return PeriodicWord(DataWord.from_values([0]), DataWord.from_values([1]), 1)


def gen_pqss_tptl2(p: PqssInstance) -> fm.Formula:
    x, y = "x", "y"
    phi: fm.Formula = fm.Constraint(x, "=", p.b)
    for i in range(len(p.a), 0, -1):
        pick = fm.Or(fm.Constraint(y, "=", 1), fm.Constraint(y, "=", p.a[i - 1]))
        step = fm.G(fm.implies(pick, phi)) if i % 2 else fm.F(fm.And(pick, phi))
        phi = fm.Freeze(y, step)
    return fm.Freeze(x, phi)


def gen_pqss_freezeltl(p: PqssInstance) -> tuple[PeriodicWord, fm.Formula]:
    pt = lambda prop, v: DataPoint(frozenset({prop}), v)  # noqa: E731
    period = [pt("q", 0)]
    for a in p.a:
        period += [pt("p", 1), pt("p", a), pt("r", 0)]
    word = PeriodicWord(DataWord((pt("r", p.b),)), DataWord(tuple(period)), 1)

    pp, q = fm.Prop("p"), fm.Prop("q")
    phi: fm.Formula = fm.Constraint("x", "=", 0)
    for i in range(len(p.a), 0, -1):
        jump = fm.Freeze("y", fm.F(fm.conj(q, fm.Constraint("y", "=", 0), phi)))
        if i % 2:
            # G_p psi written as !p R (p -> psi).
            guarded = fm.Release(fm.Not(pp), fm.implies(pp, jump))
        else:
            guarded = fm.Until(pp, fm.And(pp, jump))
        phi = fm.X(guarded, 3 * (i - 1))
    return word, fm.Freeze("x", fm.Freeze("y", fm.X(phi)))
