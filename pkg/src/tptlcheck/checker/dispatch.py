"""Engine selection for any supported word representation."""

from __future__ import annotations

from typing import Optional, Union

from .. import formula as fm
from ..dataword import DataWord, PeriodicWord, is_quasi_monotonic
from ..slp import DEFAULT_BUDGET, Slp, SlpPeriodicWord, slp_expand, slp_from_word
from .common import Verdict
from .finite import check_finite
from .naive import check_naive
from .quasi import check_quasi_monotonic_fast
from .relative import check_periodic, check_slp
from .tptl1 import check_tptl1

# Labelling every valuation stops paying off beyond this many registers.
FINITE_MAX_REGISTERS = 2

ENGINES = ("auto", "naive", "finite", "periodic", "slp", "tptl1", "quasimono")

Word = Union[DataWord, PeriodicWord, Slp, SlpPeriodicWord]


class EngineError(ValueError):
    """The requested engine cannot handle this word or formula."""


def _explicit(w: Word, budget: int) -> Union[DataWord, PeriodicWord]:
    if isinstance(w, Slp):
        return slp_expand(w, budget)
    if isinstance(w, SlpPeriodicWord):
        pre = slp_expand(w.prefix, budget) if w.prefix is not None else DataWord(())
        return PeriodicWord(pre, slp_expand(w.period, budget), w.offset)
    return w


def _large_values(w: PeriodicWord, phi: fm.Formula) -> bool:
    """Whether shrinking is likely to pay off: values dwarf the constants."""
    bound = (fm.max_abs_const(fm.desugar(phi)) + 1) * (len(w.prefix) + len(w.period))
    top = max(w.prefix.values + w.period.values)
    return top > bound or w.offset > bound


def select_engine(w: Word, phi: fm.Formula) -> str:
    if isinstance(w, (Slp, SlpPeriodicWord)):
        return "slp"
    regs = fm.register_count(fm.desugar(phi))
    if isinstance(w, DataWord):
        return "finite" if regs <= FINITE_MAX_REGISTERS else "periodic"
    if regs <= 1:
        return "tptl1"
    if is_quasi_monotonic(w) and _large_values(w, phi):
        return "quasimono"
    return "periodic"


def check(w: Word, phi: fm.Formula, engine: str = "auto", horizon: Optional[int] = None,
          budget: int = DEFAULT_BUDGET, witness: bool = True) -> Verdict:
    """Decide ``w |= phi`` with the named engine (``auto`` picks one).

    Explicit engines expand SLP inputs first, refusing words longer than
    ``budget``; ``horizon`` overrides the naive engine's unrolling length.
    """
    if engine not in ENGINES:
        raise EngineError(f"unknown engine {engine!r}")
    if engine == "auto":
        engine = select_engine(w, phi)
    if engine == "slp":
        if isinstance(w, SlpPeriodicWord):
            return check_slp(w.prefix, w.period, w.offset, phi, witness)
        if isinstance(w, Slp):
            return check_slp(w, None, 0, phi, witness)
        if isinstance(w, DataWord):
            return check_slp(slp_from_word(w), None, 0, phi, witness)
        pre = slp_from_word(w.prefix) if len(w.prefix) else None
        return check_slp(pre, slp_from_word(w.period), w.offset, phi, witness)
    x = _explicit(w, budget)
    if engine == "naive":
        return check_naive(x, phi, horizon)
    if engine == "periodic":
        return check_periodic(x, phi, witness=witness)
    if engine == "finite":
        if not isinstance(x, DataWord):
            raise EngineError("the finite engine needs a finite word")
        return check_finite(x, phi)
    if not isinstance(x, PeriodicWord):
        raise EngineError(f"the {engine} engine needs an infinite periodic word")
    if engine == "tptl1":
        return check_tptl1(x, phi)
    if not is_quasi_monotonic(x):
        raise EngineError("the quasimono engine needs a quasi-monotonic word")
    return check_quasi_monotonic_fast(x, phi)
