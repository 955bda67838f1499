"""Exact reference counters.

Brute-force enumeration and pseudo-polynomial dynamic programs for the three
counting problems handled by this package. Every approximate counter is
validated against these. They are deliberately independent of the compression
machinery: plain tables, plain loops, arbitrary-precision integers.

Counting conventions:

* m-tuples: ``tuples(j)`` counts tuples (one element per set) whose sum is at
  least j; elements are nonnegative, so tuples(j) is nonincreasing in j and
  tuples(j) for j <= 0 equals the product of the set sizes.
* knapsack: ``subsets(j)`` counts subsets of the items with total weight at
  most j; nondecreasing in j, subsets(j) = 0 for j < 0, subsets(C) for
  C >= total weight is 2^n.
* contingency: ``fills(j)`` counts ways to fill the first row of a 2-row
  table with cells 0 <= x_l <= s_l summing to j; the second row is then
  forced. fills is symmetric around half its support and unimodal.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidInput, TooLarge

BRUTE_TUPLE_CAP = 10_000_000
BRUTE_SUBSET_CAP = 24
DP_CELL_CAP = 50_000_000


class _MinusInfinity(Enum):
    VALUE = "-inf"

    def __repr__(self) -> str:
        return "NEG_INF"


#: Distinguished "no set bit" result of msb(); deliberately not an integer so
#: it can never collide with a valid bit position.
NEG_INF = _MinusInfinity.VALUE


def msb(x: int, i: int):
    """Position of the most significant set bit of ``x mod 2**i``.

    Positions are 1-based (msb(1, k) = 1 for k >= 1); returns NEG_INF when
    the residue is zero.
    """
    if x < 0 or i < 0:
        raise InvalidInput("msb expects nonnegative arguments")
    residue = x % (1 << i)
    return residue.bit_length() if residue else NEG_INF


def log_plus(x: int) -> int:
    """Floor of log2(x) for x >= 1, and 0 for x <= 0 (floored positive-part log)."""
    return x.bit_length() - 1 if x >= 1 else 0


@dataclass(frozen=True)
class MTuplesInstance:
    sets: tuple[tuple[int, ...], ...]
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(tuple(s) for s in self.sets))
        if not self.sets or any(not s for s in self.sets):
            raise InvalidInput("need at least one set, none of them empty")
        if any(x < 0 for s in self.sets for x in s):
            raise InvalidInput("set elements must be nonnegative")
        if self.bound < 0:
            raise InvalidInput("bound must be nonnegative")

    @property
    def m(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class KnapsackInstance:
    weights: tuple[int, ...]
    capacity: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.weights:
            raise InvalidInput("need at least one item")
        if any(w < 1 for w in self.weights):
            raise InvalidInput("weights must be positive")
        if self.capacity < 0:
            raise InvalidInput("capacity must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class Contingency2Instance:
    row_sums: tuple[int, int]
    col_sums: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "row_sums", tuple(self.row_sums))
        object.__setattr__(self, "col_sums", tuple(self.col_sums))
        if len(self.row_sums) != 2:
            raise InvalidInput("exactly two row sums")
        if any(r < 0 for r in self.row_sums):
            raise InvalidInput("row sums must be nonnegative")
        if not self.col_sums or any(s < 1 for s in self.col_sums):
            raise InvalidInput("column sums must be positive")
        if sum(self.row_sums) != sum(self.col_sums):
            raise InvalidInput("row sums and column sums must partition the same total")

    @property
    def total(self) -> int:
        return sum(self.col_sums)

    @property
    def pivot_sum(self) -> int:
        """R = min(r1, r2); the count only depends on the rows through this."""
        return min(self.row_sums)


def brute_mtuples(inst: MTuplesInstance, cap: int = BRUTE_TUPLE_CAP) -> int:
    size = 1
    for s in inst.sets:
        size *= len(s)
    if size > cap:
        raise TooLarge(f"{size} tuples exceeds enumeration cap {cap}")
    b = inst.bound
    return sum(1 for combo in itertools.product(*inst.sets) if sum(combo) >= b)


def dp_mtuples_table(inst: MTuplesInstance, cap: int = DP_CELL_CAP) -> list[list[int]]:
    """Rows tuples_1..tuples_m on j = 0..bound.

    tuples_i(j) counts prefixes (x_1..x_i), one element per set, with sum >= j.
    Below-domain convention: tuples_i(j) for j < 0 is the product of the first
    i set sizes, since sums are always nonnegative.
    """
    width = inst.bound + 1
    if width * sum(len(s) for s in inst.sets) > cap:
        raise TooLarge("table size exceeds cap")
    first = sorted(inst.sets[0])
    rows = [[len(first) - bisect_left(first, j) for j in range(width)]]
    prefix_product = len(first)
    for xs in inst.sets[1:]:
        prev = rows[-1]
        rows.append(
            [
                sum(prev[j - x] if j - x >= 0 else prefix_product for x in xs)
                for j in range(width)
            ]
        )
        prefix_product *= len(xs)
    return rows


def dp_mtuples(inst: MTuplesInstance, cap: int = DP_CELL_CAP) -> int:
    return dp_mtuples_table(inst, cap)[-1][inst.bound]


def brute_knapsack(inst: KnapsackInstance, cap_items: int = BRUTE_SUBSET_CAP) -> int:
    if inst.n > cap_items:
        raise TooLarge(f"{inst.n} items exceeds enumeration cap {cap_items}")
    sums = [0]
    for w in inst.weights:
        sums += [s + w for s in sums]
    return sum(1 for s in sums if s <= inst.capacity)


def dp_knapsack_table(inst: KnapsackInstance, cap: int = DP_CELL_CAP) -> list[list[int]]:
    """Rows subsets_0..subsets_n on j = 0..capacity (row 0 is all ones)."""
    c = inst.capacity
    if (inst.n + 1) * (c + 1) > cap:
        raise TooLarge("table size exceeds cap")
    rows = [[1] * (c + 1)]
    for w in inst.weights:
        prev = rows[-1]
        rows.append([prev[j] + (prev[j - w] if j >= w else 0) for j in range(c + 1)])
    return rows


def dp_knapsack(inst: KnapsackInstance, cap: int = DP_CELL_CAP) -> int:
    return dp_knapsack_table(inst, cap)[-1][inst.capacity]


def dp_contingency_sub(inst: Contingency2Instance, cap: int = DP_CELL_CAP) -> int:
    """Count via the telescoped recurrence (the one involving subtraction).

    fills_i(j) = fills_i(j-1) + fills_{i-1}(j) - fills_{i-1}(j-1-s_i), the last
    term only when j-1 >= s_i. Kept as an exact cross-check; the approximate
    pipeline never uses it because subtraction has no approximation rule.
    """
    r = inst.pivot_sum
    if len(inst.col_sums) * (r + 1) > cap:
        raise TooLarge("table size exceeds cap")
    prev = [1] + [0] * r
    for si in inst.col_sums:
        cur = [0] * (r + 1)
        cur[0] = 1
        for j in range(1, r + 1):
            v = prev[j] + cur[j - 1]
            if j - 1 >= si:
                v -= prev[j - 1 - si]
            cur[j] = v
        prev = cur
    return prev[r]


def dp_contingency_sum_table(
    inst: Contingency2Instance, width: int | None = None, cap: int = DP_CELL_CAP
) -> list[list[int]]:
    """Rows fills_0..fills_n of the additive recurrence on j = 0..width.

    fills_i(j) = sum of fills_{i-1}(j-k) over 0 <= k <= min(j, s_i).
    """
    w = inst.pivot_sum if width is None else width
    if (len(inst.col_sums) + 1) * (w + 1) * (max(inst.col_sums) + 1) > cap:
        raise TooLarge("table size exceeds cap")
    rows = [[1] + [0] * w]
    for si in inst.col_sums:
        prev = rows[-1]
        rows.append([sum(prev[j - k] for k in range(min(j, si) + 1)) for j in range(w + 1)])
    return rows


def dp_contingency_sum(inst: Contingency2Instance, cap: int = DP_CELL_CAP) -> int:
    return dp_contingency_sum_table(inst, cap=cap)[-1][inst.pivot_sum]


def dp_contingency_binding(inst: Contingency2Instance, cap: int = DP_CELL_CAP) -> int:
    """Count via the bit-decomposed recursion with binding-constraint flags.

    State (i, level, tight) describes the low ``level`` bits of the cell value
    in column i: ``tight`` records whether the cell's higher bits matched s_i
    exactly, in which case the remaining bits are capped by s_i mod 2^level.
    Entry into column i dispatches on j vs s_i: once j >= s_i the cap can bind
    (tight, level = bitlength of s_i); below that the cap is slack (free,
    level = bitlength of j). Memoized on (i, level, tight, j).
    """
    s = inst.col_sums
    n = len(s)
    r_query = inst.pivot_sum
    if n * (r_query + 1) * (max(s).bit_length() + 1) > cap:
        raise TooLarge("state space exceeds cap")
    memo: dict[tuple, int] = {}

    def entry(i: int, j: int) -> int:
        if j < 0:
            return 0
        if i == 1:
            return 1 if j <= s[0] else 0
        si = s[i - 1]
        if j >= si:
            return state(i, si.bit_length(), True, j)
        return state(i, max(j.bit_length(), 1), False, j)

    def state(i: int, level, tight: bool, j: int) -> int:
        if j < 0:
            return 0
        key = (i, level, tight, j)
        if key in memo:
            return memo[key]
        if level is NEG_INF:
            v = entry(i - 1, j)
        elif level == 1:
            v = entry(i - 1, j) + entry(i - 1, j - 1)
        else:
            top = 1 << (level - 1)
            if tight:
                v = state(i, level - 1, False, j) + state(
                    i, msb(s[i - 1], level - 1), True, j - top
                )
            else:
                v = state(i, level - 1, False, j) + state(i, level - 1, False, j - top)
        memo[key] = v
        return v

    return entry(n, r_query)
