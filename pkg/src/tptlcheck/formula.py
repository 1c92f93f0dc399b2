"""TPTL formulas with interval-annotated Until as sugar.

The abstract syntax is a handful of frozen dataclasses.  ``parse`` reads the
ASCII grammar, ``to_text`` prints it back, ``desugar`` removes annotated
Untils (the result uses one extra register, ``$u``), and ``nnf`` pushes
negations down to atoms.

Until is strict: ``p U q`` holds at ``i`` if ``q`` holds at some ``j > i`` and
``p`` at every position strictly between.  Hence ``X p`` is ``false U p``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from functools import reduce
from typing import Iterator, Optional

RELATIONS = ("<", "<=", "=", ">=", ">")
RESERVED_PREFIX = "$"
DESUGAR_REGISTER = "$u"


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int) -> None:
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class NotLtlError(ValueError):
    pass


def _node(cls):
    """Frozen dataclass whose hash is computed once; ASTs get deep."""
    cls = dataclass(frozen=True)(cls)
    names = [f.name for f in fields(cls)]

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((cls.__name__, *(getattr(self, n) for n in names)))
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@_node
class TrueFormula(Formula):
    pass


@_node
class Prop(Formula):
    name: str


@_node
class Constraint(Formula):
    register: str
    rel: str
    const: int

    def __post_init__(self) -> None:
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    def holds(self, diff: int) -> bool:
        c = self.const
        rel = self.rel
        if rel == "<":
            return diff < c
        if rel == "<=":
            return diff <= c
        if rel == "=":
            return diff == c
        if rel == ">=":
            return diff >= c
        return diff > c


@_node
class Not(Formula):
    arg: Formula


@_node
class And(Formula):
    left: Formula
    right: Formula


@_node
class Or(Formula):
    left: Formula
    right: Formula


@_node
class Until(Formula):
    left: Formula
    right: Formula


@_node
class Release(Formula):
    left: Formula
    right: Formula


@_node
class Freeze(Formula):
    register: str
    body: Formula


@_node
class Interval:
    """An integer interval; ``None`` bounds stand for minus/plus infinity."""

    lo: Optional[int]
    hi: Optional[int]
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        # Infinite ends are open, so equal intervals compare equal.
        if self.lo is None:
            object.__setattr__(self, "lo_closed", False)
        if self.hi is None:
            object.__setattr__(self, "hi_closed", False)
        lo, hi = self.bounds()
        if lo is not None and hi is not None and lo > hi:
            raise ValueError(f"empty interval {self.text()}")

    def bounds(self) -> tuple[Optional[int], Optional[int]]:
        """Smallest and largest member, as closed integer bounds."""
        lo = self.lo if self.lo is None or self.lo_closed else self.lo + 1
        hi = self.hi if self.hi is None or self.hi_closed else self.hi - 1
        return lo, hi

    def contains(self, d: int) -> bool:
        lo, hi = self.bounds()
        return (lo is None or d >= lo) and (hi is None or d <= hi)

    def text(self) -> str:
        left = "[" if self.lo_closed and self.lo is not None else "("
        right = "]" if self.hi_closed and self.hi is not None else ")"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{left}{lo},{hi}{right}"


@_node
class IntervalUnion:
    intervals: tuple[Interval, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.intervals, tuple):
            object.__setattr__(self, "intervals", tuple(self.intervals))
        if not self.intervals:
            raise ValueError("an interval union needs at least one interval")

    def contains(self, d: int) -> bool:
        return any(iv.contains(d) for iv in self.intervals)

    def is_everything(self) -> bool:
        return any(iv.bounds() == (None, None) for iv in self.intervals)

    def text(self) -> str:
        if len(self.intervals) == 1:
            return self.intervals[0].text()
        return "(" + "|".join(iv.text() for iv in self.intervals) + ")"


def interval(lo: Optional[int], hi: Optional[int], lo_closed: bool = True, hi_closed: bool = True) -> IntervalUnion:
    return IntervalUnion((Interval(lo, hi, lo_closed, hi_closed),))


@_node
class UntilAnnotated(Formula):
    left: Formula
    intervals: IntervalUnion
    right: Formula


TRUE = TrueFormula()
FALSE = Not(TRUE)


# -- derived operators -------------------------------------------------------

def F(phi: Formula, iv: IntervalUnion | None = None) -> Formula:
    return Until(TRUE, phi) if iv is None else UntilAnnotated(TRUE, iv, phi)


def G(phi: Formula, iv: IntervalUnion | None = None) -> Formula:
    return Not(F(Not(phi), iv))


def X(phi: Formula, times: int = 1, iv: IntervalUnion | None = None) -> Formula:
    for _ in range(times):
        phi = Until(FALSE, phi) if iv is None else UntilAnnotated(FALSE, iv, phi)
    return phi


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def conj(*items: Formula) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``true``."""
    if not items:
        return TRUE
    return reduce(lambda acc, f: And(f, acc), reversed(items[:-1]), items[-1])


def disj(*items: Formula) -> Formula:
    if not items:
        return FALSE
    return reduce(lambda acc, f: Or(f, acc), reversed(items[:-1]), items[-1])


# -- parser -------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>\$?[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>->|<=|>=|[()\[\]!&|.,<>=^\-]))"
)
_KEYWORDS = {"true", "false", "U", "R", "F", "G", "X", "inf"}


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int) -> None:
        self.kind, self.text, self.pos = kind, text, pos


def _tokenize(text: str) -> list[_Tok]:
    out: list[_Tok] = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        tok = m.group(kind)
        start = m.start(kind)
        if kind == "ident" and tok in _KEYWORDS:
            kind = "kw"
        out.append(_Tok(kind, tok, start))
        i = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, allow_reserved: bool) -> None:
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, n: int = 1) -> _Tok:
        return self.toks[min(self.i + n, len(self.toks) - 1)]

    def error(self, msg: str) -> FormulaSyntaxError:
        return FormulaSyntaxError(msg, self.tok.pos)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "kw") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        t = self.tok
        if not self.accept(text):
            shown = t.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"expected identifier, found {t.text or 'end of input'!r}")
        if t.text.startswith(RESERVED_PREFIX) and not self.allow_reserved:
            raise self.error(f"identifier {t.text!r} uses the reserved prefix")
        self.i += 1
        return t.text

    def integer(self) -> int:
        neg = self.accept("-")
        t = self.tok
        if t.kind != "num":
            raise self.error("expected an integer")
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    def parse(self) -> Formula:
        f = self.implication()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.accept("|"):
            return Or(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.temporal()
        if self.accept("&"):
            return And(left, self.conjunction())
        return left

    def temporal(self) -> Formula:
        left = self.unary()
        if self.accept("U"):
            iv = self.annotation()
            right = self.temporal()
            return Until(left, right) if iv is None else UntilAnnotated(left, iv, right)
        if self.accept("R"):
            return Release(left, self.temporal())
        return left

    def annotation(self) -> IntervalUnion | None:
        """Parse an optional interval annotation, backtracking if absent."""
        start = self.i
        try:
            return self._annotation()
        except FormulaSyntaxError:
            self.i = start
            return None

    def _annotation(self) -> IntervalUnion | None:
        t = self.tok
        if t.text == "[" and self.peek().text == "=":
            self.i += 2
            c = self.integer()
            self.expect("]")
            return interval(c, c)
        if t.text == "(" and self.peek().text in ("[", "("):
            self.i += 1
            items = [self._interval()]
            while self.accept("|"):
                items.append(self._interval())
            self.expect(")")
            return IntervalUnion(tuple(items))
        if t.text in ("[", "("):
            return IntervalUnion((self._interval(),))
        return None

    def _interval(self) -> Interval:
        if self.accept("["):
            lo_closed = True
        else:
            self.expect("(")
            lo_closed = False
        if self.tok.text == "-" and self.peek().text == "inf":
            self.i += 2
            lo = None
        else:
            lo = self.integer()
        self.expect(",")
        if self.accept("inf"):
            hi = None
        else:
            hi = self.integer()
        if self.accept("]"):
            hi_closed = True
        else:
            self.expect(")")
            hi_closed = False
        if lo is None:
            lo_closed = False
        if hi is None:
            hi_closed = False
        try:
            return Interval(lo, hi, lo_closed, hi_closed)
        except ValueError as exc:
            raise self.error(str(exc)) from None

    def unary(self) -> Formula:
        t = self.tok
        if self.accept("!"):
            return Not(self.unary())
        if t.kind == "kw" and t.text in ("F", "G", "X"):
            self.i += 1
            times = 1
            if t.text == "X" and self.accept("^"):
                times = self.integer()
                if times < 0:
                    raise self.error("negative exponent")
            iv = self.annotation()
            arg = self.unary()
            if t.text == "F":
                return F(arg, iv)
            if t.text == "G":
                return G(arg, iv)
            return X(arg, times, iv)
        if t.kind == "ident" and self.peek().text == ".":
            reg = self.ident()
            self.i += 1
            return Freeze(reg, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if self.accept("("):
            f = self.implication()
            self.expect(")")
            return f
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if t.kind == "ident":
            name = self.ident()
            rel = self.tok.text
            if self.tok.kind == "op" and rel in RELATIONS:
                self.i += 1
                return Constraint(name, rel, self.integer())
            return Prop(name)
        raise self.error(f"unexpected {t.text or 'end of input'!r}")


def parse(text: str, allow_reserved: bool = False) -> Formula:
    """Parse the ASCII formula grammar.

    Precedence from tight to loose: unary operators (``!``, ``F``, ``G``,
    ``X``, ``X^n``, freeze ``x.``), then ``U``/``R``, ``&``, ``|``, ``->``.
    Binary operators associate to the right.
    """
    return _Parser(text, allow_reserved).parse()


# -- printer ------------------------------------------------------------------

_PREC = {Or: 1, And: 2, Until: 3, Release: 3, UntilAnnotated: 3}
_SYMBOL = {Or: "|", And: "&", Until: "U", Release: "R"}


def _view(f: Formula):
    """Recognise the derived operators so the printer can use them."""
    if isinstance(f, Not):
        a = f.arg
        if a == TRUE:
            return ("false",)
        if isinstance(a, Until) and a.left == TRUE and isinstance(a.right, Not):
            return ("G", None, a.right.arg)
        if isinstance(a, UntilAnnotated) and a.left == TRUE and isinstance(a.right, Not):
            return ("G", a.intervals, a.right.arg)
        return ("!", a)
    if isinstance(f, Until) and f.left == TRUE:
        return ("F", None, f.right)
    if isinstance(f, UntilAnnotated) and f.left == TRUE:
        return ("F", f.intervals, f.right)
    if isinstance(f, Until) and f.left == FALSE:
        n, body = 1, f.right
        while isinstance(body, Until) and body.left == FALSE:
            n, body = n + 1, body.right
        return ("X", None, body, n)
    if isinstance(f, UntilAnnotated) and f.left == FALSE:
        return ("X", f.intervals, f.right, 1)
    return None


def _prec(f: Formula) -> int:
    view = _view(f)
    if view is not None:
        return 5 if view[0] == "false" else 4
    if isinstance(f, (Not, Freeze)):
        return 4
    return _PREC.get(type(f), 5)


def _wrap(f: Formula, need: int, out: list[str]) -> None:
    if _prec(f) < need or (need == 4 and isinstance(f, Constraint)):
        out.append("(")
        _emit(f, out)
        out.append(")")
    else:
        _emit(f, out)


def _emit(f: Formula, out: list[str]) -> None:
    # Iterative along right spines, which is where long chains appear.
    while True:
        view = _view(f)
        if view is not None:
            kind = view[0]
            if kind == "false":
                out.append("false")
                return
            if kind == "!":
                out.append("!")
                _wrap(view[1], 4, out)
                return
            head = kind
            if kind == "X" and view[3] > 1:
                head = f"X^{view[3]}"
            if view[1] is not None:
                head += view[1].text()
            out.append(head + " ")
            f = view[2]
            if _prec(f) < 4 or isinstance(f, Constraint):
                _wrap(f, 4, out)
                return
            continue
        if isinstance(f, TrueFormula):
            out.append("true")
        elif isinstance(f, Prop):
            out.append(f.name)
        elif isinstance(f, Constraint):
            out.append(f"{f.register} {f.rel} {f.const}")
        elif isinstance(f, Freeze):
            out.append(f"{f.register}.")
            f = f.body
            if _prec(f) < 4 or isinstance(f, Constraint):
                _wrap(f, 4, out)
                return
            continue
        elif isinstance(f, UntilAnnotated):
            _wrap(f.left, 4, out)
            out.append(f" U{f.intervals.text()} ")
            _wrap(f.right, 3, out)
        else:
            p = _PREC[type(f)]
            _wrap(f.left, p + 1, out)
            out.append(f" {_SYMBOL[type(f)]} ")
            f = f.right
            if _prec(f) < p:
                _wrap(f, p, out)
                return
            continue
        return


def to_text(f: Formula) -> str:
    out: list[str] = []
    _emit(f, out)
    return "".join(out)


# -- traversal and metrics ----------------------------------------------------

def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (And, Or, Until, Release, UntilAnnotated)):
        return (f.left, f.right)
    if isinstance(f, Freeze):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """All subformula occurrences, parents before children."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def depth(f: Formula) -> int:
    best = 0
    stack = [(f, 1)]
    while stack:
        g, d = stack.pop()
        best = max(best, d)
        stack.extend((c, d + 1) for c in children(g))
    return best


def props(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Prop))


def registers(f: Formula) -> frozenset[str]:
    regs = set()
    for g in subformulas(f):
        if isinstance(g, (Constraint, Freeze)):
            regs.add(g.register)
    return frozenset(regs)


def register_count(f: Formula) -> int:
    return len(registers(f))


def constants(f: Formula) -> list[int]:
    out = []
    for g in subformulas(f):
        if isinstance(g, Constraint):
            out.append(g.const)
        elif isinstance(g, UntilAnnotated):
            for iv in g.intervals.intervals:
                out.extend(b for b in (iv.lo, iv.hi) if b is not None)
    return out


def c_phi(f: Formula) -> int:
    """Largest constraint constant, floored at zero."""
    return max([0, *constants(f)])


def max_abs_const(f: Formula) -> int:
    return max([0, *(abs(c) for c in constants(f))])


def free_registers(f: Formula) -> frozenset[str]:
    memo: dict[int, frozenset[str]] = {}
    for g in reversed(list(subformulas(f))):
        if isinstance(g, Constraint):
            r = frozenset((g.register,))
        elif isinstance(g, Freeze):
            r = memo[id(g.body)] - {g.register}
        elif isinstance(g, UntilAnnotated):
            r = memo[id(g.left)] | memo[id(g.right)]
        else:
            r = frozenset().union(*(memo[id(c)] for c in children(g)))
        memo[id(g)] = r
    return memo[id(f)]


def is_closed(f: Formula) -> bool:
    return not free_registers(f)


def is_freeze_ltl(f: Formula) -> bool:
    return all(
        g.rel == "=" and g.const == 0 for g in subformulas(f) if isinstance(g, Constraint)
    ) and not any(isinstance(g, UntilAnnotated) for g in subformulas(f))


def is_ltl(f: Formula) -> bool:
    return not any(isinstance(g, (Constraint, Freeze, UntilAnnotated)) for g in subformulas(f))


def until_rank(f: Formula) -> int:
    if not is_ltl(f):
        raise NotLtlError("until rank is defined for LTL formulas only")
    memo: dict[int, int] = {}
    for g in reversed(list(subformulas(f))):
        kids = [memo[id(c)] for c in children(g)]
        if isinstance(g, (Until, Release)):
            memo[id(g)] = max(kids) + 1
        else:
            memo[id(g)] = max(kids, default=0)
    return memo[id(f)]


# -- transformations ----------------------------------------------------------

def membership(reg: str, ivs: IntervalUnion) -> Formula:
    """Constraint formula saying the register's difference lies in ``ivs``."""
    parts = []
    for iv in ivs.intervals:
        if iv.lo is not None and iv.lo == iv.hi and iv.lo_closed and iv.hi_closed:
            parts.append(Constraint(reg, "=", iv.lo))
            continue
        cs = []
        if iv.lo is not None:
            cs.append(Constraint(reg, ">=" if iv.lo_closed else ">", iv.lo))
        if iv.hi is not None:
            cs.append(Constraint(reg, "<=" if iv.hi_closed else "<", iv.hi))
        parts.append(conj(*cs))
    return disj(*parts)


def _rebuild(f: Formula, kids: list[Formula]) -> Formula:
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, Freeze):
        return Freeze(f.register, kids[0])
    if isinstance(f, UntilAnnotated):
        return UntilAnnotated(kids[0], f.intervals, kids[1])
    if isinstance(f, (And, Or, Until, Release)):
        return type(f)(kids[0], kids[1])
    return f


def _bottom_up(f: Formula, rewrite) -> Formula:
    """Apply ``rewrite(node, new_children)`` from the leaves up, sharing results."""
    done: dict[int, Formula] = {}
    stack = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if id(g) in done:
            continue
        kids = children(g)
        if expanded or not kids:
            done[id(g)] = rewrite(g, [done[id(c)] for c in kids])
        else:
            stack.append((g, True))
            stack.extend((c, False) for c in kids if id(c) not in done)
    return done[id(f)]


def desugar(f: Formula) -> Formula:
    """Replace annotated Untils by freeze quantification.

    ``a U_I b`` becomes ``$u.(a U (($u in I) & b))``.  All rewrites share the
    register ``$u``: an inner rewrite re-freezes it, and the outer value is
    only read directly under its own Until, so no renaming is necessary.
    """

    def rewrite(g: Formula, kids: list[Formula]) -> Formula:
        if isinstance(g, UntilAnnotated):
            if g.intervals.is_everything():
                return Until(kids[0], kids[1])
            mem = membership(DESUGAR_REGISTER, g.intervals)
            return Freeze(DESUGAR_REGISTER, Until(kids[0], And(mem, kids[1])))
        return _rebuild(g, kids)

    return _bottom_up(f, rewrite)


_FLIP = {"<": ">=", "<=": ">", ">=": "<", ">": "<="}


def nnf(f: Formula) -> Formula:
    """Negation normal form; ``Not`` survives only on ``true`` and propositions."""
    memo: dict[tuple[int, bool], Formula] = {}

    def go(g: Formula, neg: bool) -> Formula:
        key = (id(g), neg)
        if key in memo:
            return memo[key]
        if isinstance(g, Not):
            r = go(g.arg, not neg)
        elif isinstance(g, (TrueFormula, Prop)):
            r = Not(g) if neg else g
        elif isinstance(g, Constraint):
            if not neg:
                r = g
            elif g.rel == "=":
                r = Or(Constraint(g.register, "<", g.const), Constraint(g.register, ">", g.const))
            else:
                r = Constraint(g.register, _FLIP[g.rel], g.const)
        elif isinstance(g, Freeze):
            r = Freeze(g.register, go(g.body, neg))
        elif isinstance(g, (And, Or)):
            cls = type(g) if not neg else (Or if isinstance(g, And) else And)
            r = cls(go(g.left, neg), go(g.right, neg))
        elif isinstance(g, (Until, Release)):
            cls = type(g) if not neg else (Release if isinstance(g, Until) else Until)
            r = cls(go(g.left, neg), go(g.right, neg))
        else:
            raise ValueError("nnf expects a desugared formula")
        memo[key] = r
        return r

    return go(f, False)


def replace(f: Formula, table: dict[Formula, Formula]) -> Formula:
    """Substitute whole subformulas (matched by equality) bottom-up."""

    def rewrite(g: Formula, kids: list[Formula]) -> Formula:
        if g in table:
            return table[g]
        return _rebuild(g, kids)

    return _bottom_up(f, rewrite)
