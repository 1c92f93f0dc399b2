"""Bottom-up labelling of finite words, vectorised over positions with numpy.

For a subformula and a valuation of its free registers (absolute values
taken from the word) the engine computes a boolean vector over all positions.
Vectors are produced on demand, so only valuations that freeze quantifiers
actually create are ever labelled.
"""

from __future__ import annotations

import numpy as np

from .. import formula as fm
from ..dataword import DataWord
from .common import (
    AND, CONS, FREEZE, NOT, NPROP, NTRUE, OR, PROP, RELEASE, TRUE, UNTIL,
    Interned, Verdict,
)

_OPS = {
    "<": np.less, "<=": np.less_equal, "=": np.equal, ">=": np.greater_equal, ">": np.greater,
}


def _next_true(mask: np.ndarray) -> np.ndarray:
    """``out[i]`` = least ``j >= i`` with ``mask[j]``, or ``len(mask)``."""
    n = len(mask)
    idx = np.where(mask, np.arange(n), n)
    return np.minimum.accumulate(idx[::-1])[::-1]


def until_vector(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Strict Until: some ``j > i`` has ``b`` and every ``i < l < j`` has ``a``."""
    n = len(a)
    out = np.zeros(n, dtype=bool)
    if n < 2:
        return out
    nb = _next_true(b)[1:]
    nfail = _next_true(~a)[1:]
    out[:-1] = (nb < n) & (nb <= nfail)
    return out


class _Labeller:
    def __init__(self, w: DataWord, phi: fm.Formula) -> None:
        self.t = Interned(fm.desugar(phi))
        self.values = np.array([p.value for p in w], dtype=object if _big(w) else np.int64)
        self.n = len(w)
        self.props = [p.props for p in w]
        self.distinct = sorted(set(self.values.tolist()))
        self.cache: dict = {}

    def label(self, n: int, val: tuple) -> np.ndarray:
        t = self.t
        key = (n, tuple(val[r] for r in t.free[n]))
        out = self.cache.get(key)
        if out is not None:
            return out
        kind = t.kind[n]
        if kind == TRUE:
            out = np.ones(self.n, dtype=bool)
        elif kind == NTRUE:
            out = np.zeros(self.n, dtype=bool)
        elif kind in (PROP, NPROP):
            p = t.a[n]
            out = np.fromiter((p in ps for ps in self.props), dtype=bool, count=self.n)
            if kind == NPROP:
                out = ~out
        elif kind == CONS:
            c = t.b[n]
            out = np.asarray(_OPS[c.rel](self.values - val[t.a[n]], c.const), dtype=bool)
        elif kind == NOT:
            out = ~self.label(t.a[n], val)
        elif kind == AND:
            out = self.label(t.a[n], val) & self.label(t.b[n], val)
        elif kind == OR:
            out = self.label(t.a[n], val) | self.label(t.b[n], val)
        elif kind == UNTIL:
            out = until_vector(self.label(t.a[n], val), self.label(t.b[n], val))
        elif kind == RELEASE:
            out = ~until_vector(~self.label(t.a[n], val), ~self.label(t.b[n], val))
        elif kind == FREEZE:
            r = t.a[n]
            out = np.zeros(self.n, dtype=bool)
            for v in self.distinct:
                where = self.values == v
                inner = self.label(t.b[n], val[:r] + (v,) + val[r + 1:])
                out[where] = inner[where]
        else:  # pragma: no cover - desugar removed annotated Untils
            raise ValueError("unexpected node")
        self.cache[key] = out
        return out


def _big(w: DataWord) -> bool:
    return any(p.value >= 1 << 62 for p in w)


def check_finite(w: DataWord, phi: fm.Formula) -> Verdict:
    if len(w) == 0:
        raise ValueError("the word must be nonempty")
    lab = _Labeller(w, phi)
    d0 = w[0].value
    vec = lab.label(lab.t.root, (d0,) * len(lab.t.registers))
    return Verdict(bool(vec[0]), None, {"engine": "finite", "memo-entries": len(lab.cache)})
