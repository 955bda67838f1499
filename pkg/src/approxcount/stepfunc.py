"""Monotone integer step functions and ratio-bounded compression.

One idea drives everything here. Let phi be a monotone, nonnegative,
integer-valued function on an integer interval {lo..hi}, available only
through an oracle. A short sorted breakpoint set W containing both endpoints
is *k-certified* for phi when the values of consecutive breakpoints that are
more than one apart stay within a multiplicative factor k of each other. The
step function induced by W (exact at breakpoints, larger adjacent breakpoint
value in between) then satisfies a two-sided pointwise bound

    phi(x) <= induced(x) <= k * phi(x)    for every x in {lo..hi},

while having only O(1 + log_k max(phi)) breakpoints. Construction probes phi
through :class:`FnOracle` (which tallies calls), and every comparison is done
in exact integer arithmetic: with k = p/q, "k*phi(y) >= phi(x)" is evaluated
as p*phi(y) >= q*phi(x). No floats anywhere, so the bound survives any value
magnitudes.

Sums of same-direction step functions (``shifted_sum``) stay monotone and can
be recompressed; compressing with ratio k1 a function that was itself within
ratio k2 of a reference gives ratio k1*k2 against the reference. There is no
such rule for subtraction, and nothing in this module subtracts.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .errors import InvalidInput, MonotonicityViolation


class Direction(Enum):
    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"


@dataclass(frozen=True)
class IntInterval:
    """Closed integer interval {lo..hi}."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise InvalidInput(f"empty interval [{self.lo}, {self.hi}]")

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __len__(self) -> int:
        return self.hi - self.lo + 1


def to_fraction(value) -> Fraction:
    """Exact rational from int, Fraction, or decimal string.

    Floats are routed through their shortest decimal repr, so to_fraction(0.1)
    is exactly 1/10 rather than the binary float it would otherwise denote.
    """
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def _iroot(n: int, k: int) -> int:
    """Largest x with x**k <= n, by Newton iteration on integers."""
    if n < 0 or k < 1:
        raise InvalidInput("iroot expects n >= 0, k >= 1")
    if n == 0:
        return 0
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


@dataclass(frozen=True)
class ApproxRatio:
    """A per-stage ratio k with an exact certificate k**stages <= 1 + epsilon.

    k is the (1+epsilon)-th root for the given stage count, rounded DOWN to a
    dyadic rational so the end-to-end guarantee never degrades; the invariants
    are re-checked with exact Fraction arithmetic on construction.
    """

    k: Fraction
    epsilon: Fraction
    stages: int

    def __post_init__(self):
        if self.stages < 1:
            raise InvalidInput("stages must be positive")
        if self.k <= 1:
            raise InvalidInput("ratio must exceed 1")
        if self.k**self.stages > 1 + self.epsilon:
            raise InvalidInput("ratio certificate failed: k**stages > 1 + epsilon")

    @classmethod
    def for_stages(cls, epsilon, stages: int, precision_bits: int = 96) -> "ApproxRatio":
        eps = to_fraction(epsilon)
        if eps <= 0:
            raise InvalidInput("epsilon must be positive")
        if stages < 1:
            raise InvalidInput("stages must be positive")
        target = 1 + eps
        prec = precision_bits
        while True:
            den = 1 << prec
            scaled = target * den**stages
            root = _iroot(scaled.numerator // scaled.denominator, stages)
            k = Fraction(root, den)
            if k > 1:
                return cls(k=k, epsilon=eps, stages=stages)
            # epsilon so small the root collapsed to 1 at this precision
            prec *= 2


class FnOracle:
    """Black-box access to an integer -> count function, with a call tally.

    The declared direction is a promise about ``fn``, relied on by the binary
    searches below and spot-checked there, not enforced per call. ``calls``
    increments once per evaluation, repeats included; a single oracle must not
    be shared across concurrent callers.
    """

    __slots__ = ("domain", "direction", "calls", "_fn")

    def __init__(self, domain: IntInterval, direction: Direction, fn: Callable[[int], int]):
        self.domain = domain
        self.direction = direction
        self._fn = fn
        self.calls = 0

    def __call__(self, x: int) -> int:
        self.calls += 1
        return self._fn(x)


@dataclass(frozen=True)
class ApproxSet:
    """Sorted breakpoint set over a domain, endpoints always included.

    ``merge_last`` records a certificate produced only by the nonincreasing
    construction: the scan reached the domain end without finding a ratio
    failure there, so k*phi(hi) >= phi(previous breakpoint) is known and the
    final piece's value may stand at hi. :func:`induce` consumes the flag.
    """

    points: tuple[int, ...]
    domain: IntInterval
    merge_last: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        pts = self.points
        if not pts:
            raise InvalidInput("approximation set cannot be empty")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise InvalidInput("breakpoints must be strictly increasing")
        if pts[0] != self.domain.lo or pts[-1] != self.domain.hi:
            raise InvalidInput("breakpoints must include both domain endpoints")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant monotone function, queryable anywhere.

    Stores a value at every breakpoint. Between breakpoints the value of the
    larger adjacent breakpoint applies: the right one for nondecreasing
    functions, the left one for nonincreasing. Outside the domain the fixed
    ``out_of_domain_low`` / ``out_of_domain_high`` values apply; these carry
    boundary conventions such as "0 below 0" (knapsack) or "the full product
    below 0" (tuple counting) without special cases in callers.
    """

    domain: IntInterval
    direction: Direction
    xs: tuple[int, ...]
    values: tuple[int, ...]
    out_of_domain_low: int = 0
    out_of_domain_high: int = 0

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(self.xs))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.xs) != len(self.values) or not self.xs:
            raise InvalidInput("need equally many breakpoints and values, at least one")
        if any(a >= b for a, b in zip(self.xs, self.xs[1:])):
            raise InvalidInput("breakpoint positions must be strictly increasing")
        if self.xs[0] != self.domain.lo or self.xs[-1] != self.domain.hi:
            raise InvalidInput("breakpoints must span the domain")
        if any(v < 0 for v in self.values):
            raise InvalidInput("values must be nonnegative")
        pairs = zip(self.values, self.values[1:])
        if self.direction is Direction.NONDECREASING:
            ok = all(a <= b for a, b in pairs)
        else:
            ok = all(a >= b for a, b in pairs)
        if not ok:
            raise MonotonicityViolation("breakpoint values contradict declared direction")

    @property
    def breakpoints(self) -> list[tuple[int, int]]:
        return list(zip(self.xs, self.values))

    def query(self, x: int) -> int:
        if x < self.domain.lo:
            return self.out_of_domain_low
        if x > self.domain.hi:
            return self.out_of_domain_high
        if self.direction is Direction.NONDECREASING:
            return self.values[bisect_left(self.xs, x)]
        return self.values[bisect_right(self.xs, x) - 1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "domain": [self.domain.lo, self.domain.hi],
                "direction": self.direction.value,
                "breakpoints": [[x, str(v)] for x, v in zip(self.xs, self.values)],
                "below": str(self.out_of_domain_low),
                "above": str(self.out_of_domain_high),
            }
        )


def _ordered(probes: list[tuple[int, int]], direction: Direction) -> None:
    """Best-effort monotonicity check over the probes of one binary search."""
    probes.sort()
    vals = [v for _, v in probes]
    if direction is Direction.NONDECREASING:
        ok = all(a <= b for a, b in zip(vals, vals[1:]))
    else:
        ok = all(a >= b for a, b in zip(vals, vals[1:]))
    if not ok:
        raise MonotonicityViolation(
            f"oracle values {probes} contradict declared {direction.value} direction"
        )


def apx_set_nondecreasing(phi: FnOracle, dom: IntInterval, k: ApproxRatio) -> ApproxSet:
    """Breakpoint set certified within ratio k for a nondecreasing phi.

    Scans from the high end: from the current point x, binary-search the
    smallest y with k*phi(y) >= phi(x) (monotone predicate), step to
    min(x-1, y), repeat until the low end. Each kept pair more than one apart
    is certified by construction. Oracle cost is O(|W| log |dom|).
    """
    if dom.lo == dom.hi:
        return ApproxSet((dom.lo,), dom)
    num, den = k.k.numerator, k.k.denominator
    points = {dom.lo, dom.hi}
    x = dom.hi
    while x > dom.lo:
        fx = phi(x)
        lo, hi = dom.lo, x  # phi(x) itself satisfies the predicate since k > 1
        probes: list[tuple[int, int]] = [(x, fx)]
        while lo < hi:
            mid = (lo + hi) // 2
            v = phi(mid)
            probes.append((mid, v))
            if num * v >= den * fx:
                hi = mid
            else:
                lo = mid + 1
        _ordered(probes, Direction.NONDECREASING)
        x = min(x - 1, lo)
        points.add(x)
    return ApproxSet(tuple(sorted(points)), dom)


def apx_set_nonincreasing(phi: FnOracle, dom: IntInterval, k: ApproxRatio) -> ApproxSet:
    """Breakpoint set certified within ratio k for a nonincreasing phi.

    Scans from the low end: from the current point x, binary-search the first
    y > x where k*phi(y) < phi(x) fails the ratio; every point before it is
    certified against x, so y becomes the next breakpoint. If no failure
    exists up to the domain end, the scan stops and the returned set carries
    ``merge_last``: the tail is certified against x, so the induced function
    may extend x's value through the end.
    """
    if dom.lo == dom.hi:
        return ApproxSet((dom.lo,), dom)
    num, den = k.k.numerator, k.k.denominator
    points = {dom.lo, dom.hi}
    x = dom.lo
    merge_last = False
    v_end = phi(dom.hi)
    while x < dom.hi:
        fx = phi(x)
        probes = [(x, fx), (dom.hi, v_end)]
        if num * v_end >= den * fx:
            merge_last = True
            break
        lo, hi = x + 1, dom.hi  # failure exists; find the first one
        while lo < hi:
            mid = (lo + hi) // 2
            v = phi(mid)
            probes.append((mid, v))
            if num * v < den * fx:
                hi = mid
            else:
                lo = mid + 1
        _ordered(probes, Direction.NONINCREASING)
        x = lo
        points.add(x)
    return ApproxSet(tuple(sorted(points)), dom, merge_last=merge_last)


def induce(
    phi: FnOracle,
    w: ApproxSet,
    *,
    below: int | None = None,
    above: int | None = None,
) -> StepFunction:
    """The step function phi induces on w: exact at breakpoints, larger
    adjacent breakpoint value in between.

    For a set built by :func:`apx_set_nonincreasing` that ended in a clip
    (``merge_last``), the final breakpoint takes its left neighbour's value
    instead of a fresh sample; the construction certified that ratio. Out of
    domain values default to continuations of the edge values; override them
    to carry a boundary convention.
    """
    if w.domain.lo not in phi.domain or w.domain.hi not in phi.domain:
        raise InvalidInput("approximation set leaves the oracle's domain")
    pts = w.points
    if w.merge_last and len(pts) >= 2:
        if phi.direction is not Direction.NONINCREASING:
            raise InvalidInput("merge_last is only certified for nonincreasing functions")
        values = [phi(x) for x in pts[:-1]]
        values.append(values[-1])
    else:
        values = [phi(x) for x in pts]
    return StepFunction(
        domain=w.domain,
        direction=phi.direction,
        xs=pts,
        values=tuple(values),
        out_of_domain_low=values[0] if below is None else below,
        out_of_domain_high=values[-1] if above is None else above,
    )


def shifted_sum(
    terms: Sequence[tuple[StepFunction, int]], domain: IntInterval | None = None
) -> FnOracle:
    """Oracle for j -> sum of f(j - shift) over the given (f, shift) pairs.

    All functions must share a direction; shifting and adding preserve it.
    Out-of-domain queries hit each term's own boundary values, which is how
    recurrences like "count(j - w) with count = 0 below zero" are realized.
    """
    if not terms:
        raise InvalidInput("need at least one term")
    directions = {f.direction for f, _ in terms}
    if len(directions) != 1:
        raise InvalidInput("terms must share a direction")
    fs = [(f, s) for f, s in terms]

    def evaluate(j: int) -> int:
        return sum(f.query(j - s) for f, s in fs)

    if domain is None:
        domain = terms[0][0].domain
    return FnOracle(domain, directions.pop(), evaluate)
