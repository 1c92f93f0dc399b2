"""Reading and writing the line-oriented data word formats.

Finite words::

    word finite
    {p,q} 3
    {} 5

Periodic words::

    word periodic offset=2
    prefix:
    {} 0
    period:
    {p} 1

SLPs (a finite word; ``prefix``/``period``/``offset`` header keys instead of
``output`` describe an infinite word whose two parts are SLP variables)::

    slp output=A0
    A0 = B C
    C = B + 3
    B = leaf {} 5

Lines starting with ``#`` and blank lines are ignored everywhere.
"""

from __future__ import annotations

import re
from typing import Iterable, Union

from .dataword import DataPoint, DataWord, PeriodicWord
from .slp import Concat, Leaf, Shift, Slp, SlpBuilder, SlpPeriodicWord


class WordFormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None) -> None:
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


AnyWord = Union[DataWord, PeriodicWord, Slp, SlpPeriodicWord]

_POINT = re.compile(r"^\{([^}]*)\}\s+(\d+)$")
_KEYVAL = re.compile(r"^(\w+)=(\S+)$")
_IDENT = re.compile(r"^[A-Za-z_][\w']*$")


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def parse_props(body: str, line: int | None = None) -> frozenset[str]:
    props = [p.strip() for p in body.split(",") if p.strip()]
    for p in props:
        if not _IDENT.match(p):
            raise WordFormatError(f"bad proposition {p!r}", line)
    return frozenset(props)


def _point(text: str, line: int) -> DataPoint:
    m = _POINT.match(text)
    if not m:
        raise WordFormatError(f"expected '{{props}} value', got {text!r}", line)
    return DataPoint(parse_props(m.group(1), line), int(m.group(2)))


def _header(fields: list[str], line: int) -> dict[str, str]:
    out = {}
    for f in fields:
        m = _KEYVAL.match(f)
        if not m:
            raise WordFormatError(f"bad header field {f!r}", line)
        out[m.group(1)] = m.group(2)
    return out


def _natural(s: str, what: str, line: int) -> int:
    if not s.isdigit():
        raise WordFormatError(f"{what} must be a natural number", line)
    return int(s)


def parse_word(text: str) -> AnyWord:
    lines = _lines(text)
    if not lines:
        raise WordFormatError("empty input")
    no, head = lines[0]
    fields = head.split()
    body = lines[1:]
    if fields[:2] == ["word", "finite"]:
        _header(fields[2:], no)
        return DataWord(tuple(_point(t, n) for n, t in body))
    if fields[:2] == ["word", "periodic"]:
        hdr = _header(fields[2:], no)
        offset = _natural(hdr.get("offset", "0"), "offset", no)
        prefix: list[DataPoint] = []
        period: list[DataPoint] = []
        target = None
        for n, t in body:
            if t == "prefix:":
                target = prefix
            elif t == "period:":
                target = period
            elif target is None:
                raise WordFormatError("point outside a prefix:/period: section", n)
            else:
                target.append(_point(t, n))
        if not period:
            raise WordFormatError("periodic word needs a nonempty period:", no)
        return PeriodicWord(DataWord(tuple(prefix)), DataWord(tuple(period)), offset)
    if fields[:1] == ["slp"]:
        hdr = _header(fields[1:], no)
        rules = _slp_rules(body)
        try:
            if "output" in hdr:
                return Slp(rules, hdr["output"])
            if "period" not in hdr:
                raise WordFormatError("slp header needs output= or period=", no)
            offset = _natural(hdr.get("offset", "0"), "offset", no)
            prefix_slp = Slp(rules, hdr["prefix"]) if "prefix" in hdr else None
            return SlpPeriodicWord(prefix_slp, Slp(rules, hdr["period"]), offset)
        except WordFormatError:
            raise
        except ValueError as exc:
            raise WordFormatError(str(exc), no) from exc
    raise WordFormatError(f"unknown header {head!r}", no)


def _slp_rules(body: Iterable[tuple[int, str]]) -> dict[str, object]:
    rules = {}
    for n, t in body:
        lhs, sep, rhs = t.partition("=")
        name = lhs.strip()
        if not sep or not _IDENT.match(name):
            raise WordFormatError(f"bad rule {t!r}", n)
        if name in rules:
            raise WordFormatError(f"duplicate rule for {name}", n)
        rhs = rhs.strip()
        parts = rhs.split()
        if parts and parts[0] == "leaf":
            p = _point(rhs[4:].strip(), n)
            rules[name] = Leaf(p.props, p.value)
        elif len(parts) == 3 and parts[1] == "+":
            rules[name] = Shift(parts[0], _natural(parts[2], "shift", n))
        elif len(parts) == 2 and all(_IDENT.match(x) for x in parts):
            rules[name] = Concat(parts[0], parts[1])
        else:
            raise WordFormatError(f"bad rule {t!r}", n)
    return rules


def read_word(path: str) -> AnyWord:
    with open(path, encoding="utf-8") as fh:
        return parse_word(fh.read())


def format_point(p: DataPoint) -> str:
    return "{" + ",".join(sorted(p.props)) + "} " + str(p.value)


def _format_rules(g: Slp, seen: set[str], out: list[str]) -> None:
    for n in reversed(g.order):
        if n in seen:
            continue
        seen.add(n)
        r = g.rules[n]
        if isinstance(r, Leaf):
            out.append(f"{n} = leaf " + format_point(DataPoint(r.props, r.value)))
        elif isinstance(r, Shift):
            out.append(f"{n} = {r.child} + {r.delta}")
        else:
            out.append(f"{n} = {r.left} {r.right}")


def format_word(w: AnyWord) -> str:
    if isinstance(w, DataWord):
        return "\n".join(["word finite", *map(format_point, w)]) + "\n"
    if isinstance(w, PeriodicWord):
        lines = [f"word periodic offset={w.offset}", "prefix:"]
        lines += map(format_point, w.prefix)
        lines.append("period:")
        lines += map(format_point, w.period)
        return "\n".join(lines) + "\n"
    if isinstance(w, Slp):
        out = [f"slp output={w.output}"]
        _format_rules(w, set(), out)
        return "\n".join(out) + "\n"
    if isinstance(w, SlpPeriodicWord):
        if w.prefix is not None:
            shared = set(w.prefix.rules) & set(w.period.rules)
            if any(w.prefix.rules[n] != w.period.rules[n] for n in shared):
                # Rename both programs into one namespace.
                b = SlpBuilder()
                pre, per = b.include(w.prefix), b.include(w.period)
                w = SlpPeriodicWord(b.build(pre), b.build(per), w.offset)
        head = ["slp"]
        if w.prefix is not None:
            head.append(f"prefix={w.prefix.output}")
        head += [f"period={w.period.output}", f"offset={w.offset}"]
        out = [" ".join(head)]
        seen: set[str] = set()
        if w.prefix is not None:
            _format_rules(w.prefix, seen, out)
        _format_rules(w.period, seen, out)
        return "\n".join(out) + "\n"
    raise TypeError(f"cannot format {type(w).__name__}")
