"""Shrinking fast path for quasi-monotonic words."""

from __future__ import annotations

from .. import formula as fm
from ..dataword import PeriodicWord, shrink
from .common import Verdict
from .relative import check_periodic


def check_quasi_monotonic_fast(w: PeriodicWord, phi: fm.Formula) -> Verdict:
    """Shrink the data values, then run the periodic engine.

    The gap bound is the largest absolute constant: register differences may
    be negative inside a period, so negative constants matter as much as
    positive ones.
    """
    bound = fm.max_abs_const(fm.desugar(phi))
    small = shrink(w, bound)
    v = check_periodic(small, phi)
    v.stats["engine"] = "quasimono"
    v.stats["shrunk-offset"] = small.offset
    return v
