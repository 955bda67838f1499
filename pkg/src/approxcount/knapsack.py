"""Approximate counting of 0/1 knapsack solutions.

subsets_i(j), the number of subsets of the first i items weighing at most j,
obeys subsets_i(j) = subsets_{i-1}(j) + subsets_{i-1}(j - w_i). Each stage
here replaces the exact row by a compressed nondecreasing step function with
per-stage ratio k, k^n <= 1+epsilon, giving
exact <= count <= (1+epsilon)*exact at the capacity.

:func:`strong_fptas_knapsack` compresses in rank space over candidate change
points, so its oracle work depends on n and epsilon but not on the magnitude
of the weights or the capacity. Candidates for stage i: the previous stage's
breakpoints shifted by +1 (where the unshifted copy can rise), by w_i + 1
(where the shifted copy can rise), plus w_i itself, where the shifted copy
first enters the domain and jumps from 0; omitting that one point breaks the
guarantee already for a single item.

:func:`fptas_knapsack` is the plain variant compressing over {0..C} directly;
its oracle work grows with log C. Useful as the contrast witness and for
cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from time import perf_counter

from .errors import InvalidInput
from .incpoints import IncIndex, convert
from .oracles import KnapsackInstance
from .stepfunc import (
    ApproxRatio,
    ApproxSet,
    Direction,
    IntInterval,
    StepFunction,
    apx_set_nondecreasing,
    induce,
    shifted_sum,
    to_fraction,
)


@dataclass
class KnapsackRunReport:
    count: int
    epsilon: Fraction
    oracle_calls: int
    per_stage_set_sizes: list[int]
    elapsed: float
    epsilon_in_proven_range: bool
    stage_sets: list[ApproxSet] = field(repr=False, default_factory=list)
    stage_functions: list[StepFunction] = field(repr=False, default_factory=list)
    stage_candidates: list[IncIndex] = field(repr=False, default_factory=list)


def _empty_subset_row(dom: IntInterval) -> StepFunction:
    """subsets_0: constantly 1 on the domain, 0 below it."""
    xs = (dom.lo,) if dom.lo == dom.hi else (dom.lo, dom.hi)
    return StepFunction(
        domain=dom,
        direction=Direction.NONDECREASING,
        xs=xs,
        values=(1,) * len(xs),
        out_of_domain_low=0,
        out_of_domain_high=1,
    )


def _checked_epsilon(epsilon) -> Fraction:
    eps = to_fraction(epsilon)
    if eps <= 0:
        raise InvalidInput("epsilon must be positive")
    return eps


def strong_fptas_knapsack(inst: KnapsackInstance, epsilon) -> KnapsackRunReport:
    started = perf_counter()
    eps = _checked_epsilon(epsilon)
    ratio = ApproxRatio.for_stages(eps, inst.n)
    c = inst.capacity
    dom = IntInterval(0, c)

    approx = _empty_subset_row(dom)
    prev_points: tuple[int, ...] = approx.xs
    counted = []
    stage_sets: list[ApproxSet] = []
    stage_functions: list[StepFunction] = []
    stage_candidates: list[IncIndex] = []

    for w in inst.weights:
        raw = shifted_sum([(approx, 0), (approx, w)], dom)
        candidates = IncIndex.build(
            [p + 1 for p in prev_points]
            + [p + w + 1 for p in prev_points]
            + [0, w, c],
            dom,
        )
        chosen, approx = convert(raw, candidates, ratio, below=0)
        prev_points = chosen.points
        counted.append(raw)
        stage_sets.append(chosen)
        stage_functions.append(approx)
        stage_candidates.append(candidates)

    return KnapsackRunReport(
        count=approx.query(c),
        epsilon=eps,
        oracle_calls=sum(o.calls for o in counted),
        per_stage_set_sizes=[len(s) for s in stage_sets],
        elapsed=perf_counter() - started,
        epsilon_in_proven_range=eps < 1,
        stage_sets=stage_sets,
        stage_functions=stage_functions,
        stage_candidates=stage_candidates,
    )


def fptas_knapsack(inst: KnapsackInstance, epsilon) -> KnapsackRunReport:
    started = perf_counter()
    eps = _checked_epsilon(epsilon)
    ratio = ApproxRatio.for_stages(eps, inst.n)
    c = inst.capacity
    dom = IntInterval(0, c)

    approx = _empty_subset_row(dom)
    counted = []
    stage_sets = []
    stage_functions = []

    for w in inst.weights:
        raw = shifted_sum([(approx, 0), (approx, w)], dom)
        chosen = apx_set_nondecreasing(raw, dom, ratio)
        approx = induce(raw, chosen, below=0)
        counted.append(raw)
        stage_sets.append(chosen)
        stage_functions.append(approx)

    return KnapsackRunReport(
        count=approx.query(c),
        epsilon=eps,
        oracle_calls=sum(o.calls for o in counted),
        per_stage_set_sizes=[len(s) for s in stage_sets],
        elapsed=perf_counter() - started,
        epsilon_in_proven_range=eps < 1,
        stage_sets=stage_sets,
        stage_functions=stage_functions,
    )
