"""Compression core: breakpoint selection, induced step functions, exact ratios.

The properties here are the contract the counters lean on: the induced
function always sandwiches the original within the chosen ratio, breakpoint
sets stay logarithmically small, and sums of approximations inherit the
worse of the two ratios. Everything is checked with exact rational
arithmetic; no tolerance anywhere.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from approxcount.errors import InvalidInput, MonotonicityViolation
from approxcount.stepfunc import (
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


def oracle_from_values(values, direction):
    dom = IntInterval(0, len(values) - 1)
    return FnOracle(dom, direction, lambda j: values[j])


def compress(values, direction, k):
    """Run the full pipeline on a dense value table; returns (set, function)."""
    phi = oracle_from_values(values, direction)
    if direction is Direction.NONDECREASING:
        w = apx_set_nondecreasing(phi, phi.domain, k)
    else:
        w = apx_set_nonincreasing(phi, phi.domain, k)
    return w, induce(phi, w)


# Monotone tables built from nonnegative deltas; lets hypothesis shrink well.
def nondecreasing_tables(max_len=400, max_step=50):
    return st.lists(
        st.integers(min_value=0, max_value=max_step), min_size=1, max_size=max_len
    ).map(lambda deltas: [sum(deltas[: i + 1]) for i in range(len(deltas))])


ratios = st.sampled_from(
    [
        ApproxRatio.for_stages(Fraction(1, 10), 3),
        ApproxRatio.for_stages(Fraction(1, 2), 2),
        ApproxRatio.for_stages(Fraction(1), 1),
        ApproxRatio.for_stages(Fraction(7), 3),
    ]
)


class TestToFraction:
    def test_decimal_string_is_exact(self):
        assert to_fraction("0.1") == Fraction(1, 10)

    def test_float_goes_through_repr(self):
        assert to_fraction(0.1) == Fraction(1, 10)

    def test_int_and_fraction_pass_through(self):
        assert to_fraction(7) == 7
        assert to_fraction(Fraction(3, 2)) == Fraction(3, 2)


class TestApproxRatio:
    def test_power_stays_below_target(self):
        for eps, stages in [(Fraction(1, 10), 7), (Fraction(1, 2), 3), (Fraction(9), 5)]:
            r = ApproxRatio.for_stages(eps, stages)
            assert r.k > 1
            assert r.k**stages <= 1 + eps

    def test_epsilon_seven_three_stages_is_exactly_two(self):
        # 1 + 7 = 8 is a perfect cube, so rounding down loses nothing.
        r = ApproxRatio.for_stages(Fraction(7), 3)
        assert r.k == 2

    def test_single_stage_keeps_epsilon(self):
        assert ApproxRatio.for_stages(Fraction(1, 2), 1).k == Fraction(3, 2)

    def test_rejects_nonpositive_epsilon(self):
        with pytest.raises(InvalidInput):
            ApproxRatio.for_stages(Fraction(0), 2)
        with pytest.raises(InvalidInput):
            ApproxRatio.for_stages(Fraction(-1, 2), 2)

    def test_tiny_epsilon_still_above_one(self):
        r = ApproxRatio.for_stages(Fraction(1, 10**9), 40)
        assert r.k > 1
        assert r.k**40 <= 1 + Fraction(1, 10**9)


class TestOracleCounter:
    def test_one_increment_per_eval(self):
        phi = oracle_from_values([1, 2, 3], Direction.NONDECREASING)
        assert phi.calls == 0
        phi(0)
        phi(2)
        phi(2)
        assert phi.calls == 3


class TestApproxSetValidation:
    def test_requires_domain_endpoints(self):
        dom = IntInterval(0, 9)
        with pytest.raises(InvalidInput):
            ApproxSet(points=(0, 4), domain=dom)
        with pytest.raises(InvalidInput):
            ApproxSet(points=(2, 9), domain=dom)

    def test_requires_strictly_increasing(self):
        with pytest.raises(InvalidInput):
            ApproxSet(points=(0, 4, 4, 9), domain=IntInterval(0, 9))

    def test_degenerate_domain_single_point(self):
        w = ApproxSet(points=(5,), domain=IntInterval(5, 5))
        assert list(w.points) == [5]


class TestStepFunctionQuery:
    def test_gap_takes_right_value_when_nondecreasing(self):
        f = StepFunction(
            domain=IntInterval(0, 10),
            direction=Direction.NONDECREASING,
            xs=(0, 5, 10),
            values=(1, 4, 9),
        )
        assert [f.query(j) for j in (0, 1, 4, 5, 6, 10)] == [1, 4, 4, 4, 9, 9]

    def test_gap_takes_left_value_when_nonincreasing(self):
        f = StepFunction(
            domain=IntInterval(0, 10),
            direction=Direction.NONINCREASING,
            xs=(0, 5, 10),
            values=(9, 4, 1),
        )
        assert [f.query(j) for j in (0, 1, 4, 5, 6, 10)] == [9, 9, 9, 4, 4, 1]

    def test_out_of_domain_values(self):
        f = StepFunction(
            domain=IntInterval(0, 3),
            direction=Direction.NONDECREASING,
            xs=(0, 3),
            values=(2, 5),
            out_of_domain_low=0,
            out_of_domain_high=7,
        )
        assert f.query(-1) == 0
        assert f.query(4) == 7

    def test_rejects_wrong_direction_values(self):
        with pytest.raises(MonotonicityViolation):
            StepFunction(
                domain=IntInterval(0, 4),
                direction=Direction.NONDECREASING,
                xs=(0, 4),
                values=(5, 2),
            )

    def test_json_uses_decimal_strings(self):
        f = StepFunction(
            domain=IntInterval(0, 1),
            direction=Direction.NONDECREASING,
            xs=(0, 1),
            values=(1, 2**100),
        )
        assert str(2**100) in f.to_json()


def test_identity_on_one_to_sixteen_with_k_two():
    # Doubling thresholds: the selected points are exactly the powers of two.
    dom = IntInterval(1, 16)
    phi = FnOracle(dom, Direction.NONDECREASING, lambda j: j)
    w = apx_set_nondecreasing(phi, dom, ApproxRatio.for_stages(Fraction(7), 3))
    assert list(w.points) == [1, 2, 4, 8, 16]


def test_constant_function_needs_only_endpoints():
    dom = IntInterval(0, 100)
    phi = FnOracle(dom, Direction.NONDECREASING, lambda j: 12)
    w = apx_set_nondecreasing(phi, dom, ApproxRatio.for_stages(Fraction(1), 1))
    assert list(w.points) == [0, 100]


def test_all_zero_function_keeps_endpoints_only():
    dom = IntInterval(0, 50)
    phi = FnOracle(dom, Direction.NONINCREASING, lambda j: 0)
    w = apx_set_nonincreasing(phi, dom, ApproxRatio.for_stages(Fraction(1), 1))
    assert list(w.points) == [0, 50]


@settings(max_examples=60, deadline=None)
@given(values=nondecreasing_tables(), k=ratios)
def test_sandwich_nondecreasing(values, k):
    w, f = compress(values, Direction.NONDECREASING, k)
    for j, exact in enumerate(values):
        got = f.query(j)
        assert exact <= got
        assert got * k.k.denominator <= exact * k.k.numerator


@settings(max_examples=60, deadline=None)
@given(values=nondecreasing_tables(), k=ratios)
def test_sandwich_nonincreasing(values, k):
    table = values[::-1]
    w, f = compress(table, Direction.NONINCREASING, k)
    for j, exact in enumerate(table):
        got = f.query(j)
        assert exact <= got
        assert got * k.k.denominator <= exact * k.k.numerator


@settings(max_examples=60, deadline=None)
@given(values=nondecreasing_tables(), k=ratios)
def test_set_size_within_four_log(values, k):
    w, _ = compress(values, Direction.NONDECREASING, k)
    top = max(values[-1], 1)
    bound = 4 * (1 + math.log(max(top, 2)) / math.log(float(k.k)))
    assert len(w.points) <= bound


def test_sandwich_on_wide_domain():
    # One deterministic large case: domain size 10^4, doubling growth pattern.
    dom = IntInterval(0, 10**4)
    phi = FnOracle(dom, Direction.NONDECREASING, lambda j: 1 + j * j)
    k = ApproxRatio.for_stages(Fraction(1, 2), 4)
    w = apx_set_nondecreasing(phi, dom, k)
    f = induce(FnOracle(dom, Direction.NONDECREASING, lambda j: 1 + j * j), w)
    for j in range(0, 10**4 + 1, 37):
        exact = 1 + j * j
        assert exact <= f.query(j) <= k.k * exact
    assert len(w.points) <= 4 * (1 + math.log(1 + 10**8) / math.log(float(k.k)))


@settings(max_examples=40, deadline=None)
@given(
    values_a=nondecreasing_tables(max_len=120),
    values_b=nondecreasing_tables(max_len=120),
    k1=ratios,
    k2=ratios,
)
def test_sum_of_approximations_keeps_worse_ratio(values_a, values_b, k1, k2):
    n = min(len(values_a), len(values_b))
    a, b = values_a[:n], values_b[:n]
    _, fa = compress(a, Direction.NONDECREASING, k1)
    _, fb = compress(b, Direction.NONDECREASING, k2)
    worse = max(k1.k, k2.k)
    for j in range(n):
        exact = a[j] + b[j]
        got = fa.query(j) + fb.query(j)
        assert exact <= got <= worse * exact


@settings(max_examples=40, deadline=None)
@given(values=nondecreasing_tables(max_len=200), k1=ratios, k2=ratios)
def test_compression_of_compression_multiplies_ratios(values, k1, k2):
    _, first = compress(values, Direction.NONDECREASING, k1)
    dom = IntInterval(0, len(values) - 1)
    second_oracle = FnOracle(dom, Direction.NONDECREASING, first.query)
    w2 = apx_set_nondecreasing(second_oracle, dom, k2)
    second = induce(FnOracle(dom, Direction.NONDECREASING, first.query), w2)
    combined = k1.k * k2.k
    for j, exact in enumerate(values):
        assert exact <= second.query(j) <= combined * exact


def test_monotonicity_violation_detected_on_scan():
    dom = IntInterval(0, 7)
    wobble = [1, 5, 2, 2, 2, 2, 2, 9]
    phi = FnOracle(dom, Direction.NONDECREASING, lambda j: wobble[j])
    with pytest.raises(MonotonicityViolation):
        apx_set_nondecreasing(phi, dom, ApproxRatio.for_stages(Fraction(1, 10), 1))


def test_induce_exact_at_breakpoints():
    values = [10, 9, 9, 4, 4, 4, 1, 0]
    phi = oracle_from_values(values, Direction.NONINCREASING)
    k = ApproxRatio.for_stages(Fraction(1), 1)
    w = apx_set_nonincreasing(phi, phi.domain, k)
    f = induce(oracle_from_values(values, Direction.NONINCREASING), w)
    for x in w.points:
        if w.merge_last and x == w.points[-1]:
            continue
        assert f.query(x) == values[x]


def test_shifted_sum_matches_manual_recurrence():
    base = StepFunction(
        domain=IntInterval(0, 6),
        direction=Direction.NONDECREASING,
        xs=(0, 3, 6),
        values=(1, 2, 4),
        out_of_domain_low=0,
    )
    combined = shifted_sum([(base, 0), (base, 4)])
    for j in range(7):
        assert combined(j) == base.query(j) + base.query(j - 4)
    assert combined.calls == 7


def test_shifted_sum_rejects_mixed_directions():
    up = StepFunction(
        domain=IntInterval(0, 2),
        direction=Direction.NONDECREASING,
        xs=(0, 2),
        values=(1, 2),
    )
    down = StepFunction(
        domain=IntInterval(0, 2),
        direction=Direction.NONINCREASING,
        xs=(0, 2),
        values=(2, 1),
    )
    with pytest.raises(InvalidInput):
        shifted_sum([(up, 0), (down, 1)])


def test_interval_validation():
    with pytest.raises(InvalidInput):
        IntInterval(3, 2)
    assert 5 in IntInterval(0, 5)
    assert 6 not in IntInterval(0, 5)
    assert len(IntInterval(2, 4)) == 3
