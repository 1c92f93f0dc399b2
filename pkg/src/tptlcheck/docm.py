"""One-counter machines and the data words of their computations.

A machine has control states, an initial state and edges labelled ``zero``
(fires only when the counter is 0) or ``add(a)`` (fires when the counter
stays non-negative).  A deterministic machine has a single run from
``(q0, 0)``; read as a data word, position ``i`` carries ``{state_i}`` and
the counter value ``c_i``.

Two extractors are provided.  ``comp_unary`` simulates step by step and is
meant for small update constants.  ``comp_binary`` jumps over long counter
sweeps arithmetically and returns SLPs, so update constants may be huge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from . import formula as fm
from .checker import Verdict, check_periodic, check_slp
from .checker.finite import check_finite
from .dataword import DataPoint, DataWord, PeriodicWord
from .slp import Slp, SlpBuilder, SlpPeriodicWord, slp_iterate

ZERO = "zero"
DEFAULT_STEP_BUDGET = 1_000_000


class NondeterministicError(ValueError):
    pass


class OcmFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    src: str
    op: Union[str, int]  # ZERO or the added amount
    dst: str

    def label(self) -> str:
        return ZERO if self.op == ZERO else f"add({self.op})"


@dataclass(frozen=True)
class Ocm:
    states: frozenset[str]
    initial: str
    edges: tuple[Edge, ...]
    encoding: str = "unary"
    out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.initial not in self.states:
            raise ValueError("initial state is not a state")
        if self.encoding not in ("unary", "binary"):
            raise ValueError("encoding must be 'unary' or 'binary'")
        out: dict[str, list[Edge]] = {q: [] for q in self.states}
        for e in self.edges:
            if e.src not in self.states or e.dst not in self.states:
                raise ValueError(f"edge {e} leaves the state set")
            out[e.src].append(e)
        object.__setattr__(self, "out", out)

    @classmethod
    def build(cls, initial: str, edges, encoding: str = "unary") -> Ocm:
        """Convenience constructor from ``(src, op, dst)`` triples."""
        es = tuple(dict.fromkeys(Edge(s, op, d) for s, op, d in edges))
        states = frozenset([initial, *(e.src for e in es), *(e.dst for e in es)])
        return cls(states, initial, es, encoding)


def step(m: Ocm, q: str, c: int) -> set[tuple[str, int]]:
    if c < 0:
        raise ValueError("counter values are natural numbers")
    succ = set()
    for e in m.out[q]:
        if e.op == ZERO:
            if c == 0:
                succ.add((e.dst, 0))
        elif c + e.op >= 0:
            succ.add((e.dst, c + e.op))
    return succ


def _next(m: Ocm, q: str, c: int, check: bool = True) -> Optional[tuple[str, int]]:
    succ = step(m, q, c)
    if len(succ) > 1:
        if check:
            raise NondeterministicError(f"configuration ({q}, {c}) has {len(succ)} successors")
    return next(iter(succ)) if succ else None


# -- text format --------------------------------------------------------------

_EDGE = re.compile(r"^(\S+)\s+(zero|add\(\s*([+-]?\d+)\s*\))\s+(\S+)$")


def parse_ocm(text: str) -> Ocm:
    encoding = None
    initial = None
    edges = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if encoding is None:
            if len(parts) != 2 or parts[0] != "ocm" or parts[1] not in ("unary", "binary"):
                raise OcmFormatError(f"line {no}: expected 'ocm unary' or 'ocm binary'")
            encoding = parts[1]
        elif parts[0] == "init" and len(parts) == 2:
            initial = parts[1]
        else:
            m = _EDGE.match(line)
            if not m:
                raise OcmFormatError(f"line {no}: bad edge {line!r}")
            op = ZERO if m.group(2) == ZERO else int(m.group(3))
            edges.append((m.group(1), op, m.group(4)))
    if encoding is None or initial is None:
        raise OcmFormatError("machine needs an 'ocm' header and an 'init' line")
    return Ocm.build(initial, edges, encoding)


def format_ocm(m: Ocm) -> str:
    lines = [f"ocm {m.encoding}", f"init {m.initial}"]
    lines += [f"{e.src} {e.label()} {e.dst}" for e in m.edges]
    return "\n".join(lines) + "\n"


# -- unary extraction -----------------------------------------------------------

def comp_unary(m: Ocm, budget: int = DEFAULT_STEP_BUDGET) -> DataWord | PeriodicWord:
    """Simulate until the run halts or provably repeats.

    The run repeats from time ``t`` when the state at ``t`` was already seen
    at some ``s < t`` with the same counter, or with a smaller counter and no
    zero test fired in between: the segment ``[s, t)`` then recurs forever,
    shifted by ``c_t - c_s``.
    """
    if not is_deterministic(m):
        raise NondeterministicError("machine is not deterministic")
    states: list[str] = []
    counters: list[int] = []
    zero_before: list[int] = []  # number of zero tests fired before time t
    seen: dict[str, list[int]] = {}
    q, c, zeros = m.initial, 0, 0
    for t in range(budget):
        for s in reversed(seen.get(q, ())):
            cs = counters[s]
            if cs == c or (cs < c and zero_before[s] == zeros):
                pts = [DataPoint(frozenset((st,)), v) for st, v in zip(states, counters)]
                return PeriodicWord(DataWord(tuple(pts[:s])), DataWord(tuple(pts[s:])), c - cs)
        seen.setdefault(q, []).append(t)
        states.append(q)
        counters.append(c)
        zero_before.append(zeros)
        nxt = _next(m, q, c)
        if nxt is None:
            return DataWord(tuple(DataPoint(frozenset((st,)), v) for st, v in zip(states, counters)))
        if c == 0 and nxt[1] == 0 and any(e.op == ZERO and e.dst == nxt[0] for e in m.out[q]):
            zeros += 1
        q, c = nxt
    raise RuntimeError(f"no halt or repetition within {budget} steps")


# -- binary extraction ----------------------------------------------------------

@dataclass
class _Label:
    """An edge label of the auxiliary graph: a word built in a shared builder."""

    name: Optional[str]          # finite part, or None if empty
    period: Optional[str] = None  # set for infinite labels
    offset: int = 0


class _Explorer:
    """The comp(q) procedure with an auxiliary graph over states and ``f``."""

    def __init__(self, m: Ocm, check: bool) -> None:
        self.m = m
        self.check = check
        self.b = SlpBuilder()
        self.n = len(m.states)

    def point(self, q: str, c: int) -> str:
        return self.b.leaf((q,), c)

    def word(self, configs) -> Optional[str]:
        names = [self.point(q, c) for q, c in configs]
        return self.b.seq(names) if names else None

    def cat(self, *names: Optional[str]) -> Optional[str]:
        parts = [n for n in names if n is not None]
        return self.b.seq(parts) if parts else None

    def comp(self, q: str) -> tuple[str, _Label]:
        """Simulate from ``(q, 0)``; return the target node and the label."""
        m = self.m
        confs = [(q, 0)]
        first_at: dict[str, int] = {}
        while True:
            i = len(confs) - 1
            p, c = confs[i]
            nxt = _next(m, p, c, self.check)
            if nxt is None:
                return "f", _Label(self.word(confs))
            if i >= 1 and c == 0:
                return p, _Label(self.word(confs[:-1]))
            if i >= 1:
                j = first_at.get(p)
                if j is not None:
                    return self._repeat(confs, j, i)
                first_at[p] = i
            if i > self.n + 1:  # pragma: no cover - pigeonhole makes this unreachable
                raise AssertionError("no case applied within |Q|+1 steps")
            confs.append(nxt)

    def _repeat(self, confs, j: int, l: int) -> tuple[str, _Label]:
        cj, cl = confs[j][1], confs[l][1]
        u = confs[:j]
        v = confs[j:l]
        k = cl - cj
        if k >= 0:
            if self.check and k > 0:
                self._check_growing_cycle(v)
            return "f", _Label(self.word(u), self.word(v), k)
        # The cycle loses -k per round: run it while every counter stays > 0.
        counters = [c for _, c in v]
        mm = min((c - 1) // -k for c in counters)
        rounds = self.iterate(v, mm, k)
        r = mm + 1
        w = []
        for p, c in v:
            if c + r * k <= 0:
                head = self.cat(self.word(u), rounds, self.word(w))
                if c + r * k < 0:
                    return "f", _Label(head)
                return p, _Label(head)
            w.append((p, c + r * k))
        raise AssertionError("maximal round count violated")  # pragma: no cover

    def iterate(self, v, mm: int, k: int) -> str:
        """``prod_{i=0}^{mm} v_{+ik}`` for the cycle ``v``."""
        first = self.word(v)
        if mm == 0:
            return first
        base = DataWord(tuple(DataPoint(frozenset((p,)), c) for p, c in v))
        rest = self.b.include(slp_iterate(base, mm, k))
        return self.b.concat(first, rest)

    def _check_growing_cycle(self, v) -> None:
        # Along a cycle whose counter grows forever, any second add edge of a
        # cycle state eventually becomes enabled as well.
        for p, _ in v:
            adds = [e for e in self.m.out[p] if e.op != ZERO]
            if len(adds) > 1:
                raise NondeterministicError(f"state {p} has several add edges on a growing cycle")

    def run(self) -> Union[Slp, SlpPeriodicWord]:
        order: list[str] = []
        labels: dict[str, tuple[str, _Label]] = {}
        q = self.m.initial
        while True:
            order.append(q)
            target, label = self.comp(q)
            labels[q] = (target, label)
            if target == "f":
                head = self.cat(*(labels[s][1].name for s in order))
                if label.period is None:
                    return self.b.build(head)
                pre = self.b.build(head) if head is not None else None
                return SlpPeriodicWord(pre, self.b.build(label.period), label.offset)
            if target in labels:
                start = order.index(target)
                head = self.cat(*(labels[s][1].name for s in order[:start]))
                loop = self.cat(*(labels[s][1].name for s in order[start:]))
                pre = self.b.build(head) if head is not None else None
                return SlpPeriodicWord(pre, self.b.build(loop), 0)
            q = target


def comp_binary(m: Ocm) -> Union[Slp, SlpPeriodicWord]:
    """The run as an SLP (finite run) or a periodic pair of SLPs."""
    return _Explorer(m, check=True).run()


def is_deterministic(m: Ocm) -> bool:
    """Whether every reachable configuration has at most one successor."""
    try:
        _Explorer(m, check=True).run()
    except NondeterministicError:
        return False
    return True


def model_check(m: Ocm, phi: fm.Formula) -> Verdict:
    if m.encoding == "unary":
        w = comp_unary(m)
        if isinstance(w, DataWord):
            return check_finite(w, phi)
        return check_periodic(w, phi)
    g = comp_binary(m)
    if isinstance(g, Slp):
        return check_slp(g, None, 0, phi)
    return check_slp(g.prefix, g.period, g.offset, phi)
