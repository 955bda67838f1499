"""Deterministic approximate counting with verifiable accuracy guarantees.

The package counts m-tuples under a sum bound, 0/1 knapsack solutions, and
2-row contingency tables. Each counter returns a value c with
exact <= c <= (1 + epsilon) * exact, checkable against the exact oracles in
:mod:`approxcount.oracles` by exact rational comparison. The compression
machinery lives in :mod:`approxcount.stepfunc` and
:mod:`approxcount.incpoints`; the command line entry point is
``approxcount`` (see :mod:`approxcount.cli`).
"""

from .contingency import (
    ContingencyRunReport,
    SymmetricUnimodal,
    compress_contingency,
    fptas_contingency2,
)
from .errors import InvalidInput, MonotonicityViolation, TooLarge
from .incpoints import IncIndex, convert, dom_of, pad, restrict
from .knapsack import KnapsackRunReport, fptas_knapsack, strong_fptas_knapsack
from .mtuples import MTuplesRunReport, fptas_mtuples, strong_fptas_mtuples
from .oracles import (
    NEG_INF,
    Contingency2Instance,
    KnapsackInstance,
    MTuplesInstance,
    brute_knapsack,
    brute_mtuples,
    dp_contingency_binding,
    dp_contingency_sub,
    dp_contingency_sum,
    dp_knapsack,
    dp_mtuples,
    log_plus,
    msb,
)
from .stepfunc import (
    ApproxRatio,
    ApproxSet,
    Direction,
    FnOracle,
    IntInterval,
    StepFunction,
    apx_set_nondecreasing,
    apx_set_nonincreasing,
    induce,
    shifted_sum,
    to_fraction,
)

__all__ = [
    "ApproxRatio",
    "ApproxSet",
    "Contingency2Instance",
    "ContingencyRunReport",
    "Direction",
    "FnOracle",
    "IncIndex",
    "IntInterval",
    "InvalidInput",
    "KnapsackInstance",
    "KnapsackRunReport",
    "MTuplesInstance",
    "MTuplesRunReport",
    "MonotonicityViolation",
    "NEG_INF",
    "StepFunction",
    "SymmetricUnimodal",
    "TooLarge",
    "apx_set_nondecreasing",
    "apx_set_nonincreasing",
    "brute_knapsack",
    "brute_mtuples",
    "compress_contingency",
    "convert",
    "dom_of",
    "dp_contingency_binding",
    "dp_contingency_sub",
    "dp_contingency_sum",
    "dp_knapsack",
    "dp_mtuples",
    "fptas_contingency2",
    "fptas_knapsack",
    "fptas_mtuples",
    "induce",
    "log_plus",
    "msb",
    "pad",
    "restrict",
    "shifted_sum",
    "strong_fptas_knapsack",
    "strong_fptas_mtuples",
    "to_fraction",
]

__version__ = "0.1.0"
