from .common import RegisterCountError, Verdict, WitnessStep
from .dispatch import ENGINES, EngineError, check, select_engine
from .finite import check_finite
from .naive import check_naive, holds_at, holds_relative, unroll_horizon
from .quasi import check_quasi_monotonic_fast
from .relative import check_periodic, check_slp
from .tptl1 import check_tptl1
