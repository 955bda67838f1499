"""Rank-space views of monotone step functions.

The strongly polynomial counters never binary-search a numeric domain
{0..B}. They maintain a short sorted list of *candidate change points*, a
superset of everywhere the current function actually changes; between
consecutive candidates the function is constant. Compression then runs on
the function restricted to the candidate ranks {1..r}, and the chosen ranks
are mapped back to domain points. Mapping back loses the certificate for the
run of points just before (after) a kept point, so each kept point is padded
with its neighbour on that side:

* nondecreasing functions change upward at candidates, pieces are half-open
  on the right, and pad inserts each point's predecessor;
* nonincreasing functions change downward, pieces are half-open on the left,
  and pad inserts each point's successor (mirror image of the same argument).

The padded set is certified in domain space with exact values at every
breakpoint, so the induced function needs no end-of-domain merging. Oracle
cost depends only on the candidate count and the value magnitudes, never on
the width of the numeric domain; that is the whole point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidInput
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
)


@dataclass(frozen=True)
class IncIndex:
    """Sorted candidate change points of a monotone function over a domain.

    Positionally indexed: rank j (1-based) maps to ``points[j-1]`` in O(1).
    Soundness requirement on the caller: every point where the underlying
    function actually changes must be present. Extra points are harmless.
    """

    points: tuple[int, ...]
    domain: IntInterval

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        pts = self.points
        if not pts or any(a >= b for a, b in zip(pts, pts[1:])):
            raise InvalidInput("candidate points must be strictly increasing")
        if pts[0] != self.domain.lo or pts[-1] != self.domain.hi:
            raise InvalidInput("candidate points must include both domain endpoints")

    @classmethod
    def build(cls, candidates: Iterable[int], domain: IntInterval) -> "IncIndex":
        """Sorted, deduplicated, clipped to the domain, endpoints added."""
        pts = {p for p in candidates if p in domain}
        pts.add(domain.lo)
        pts.add(domain.hi)
        return cls(tuple(sorted(pts)), domain)

    def __len__(self) -> int:
        return len(self.points)


def restrict(phi: FnOracle, inc: IncIndex) -> FnOracle:
    """phi viewed through the candidate ranks: eval(j) = phi(points[j-1]).

    The returned oracle lives on {1..len(inc)} and forwards every evaluation
    to phi, so phi's call tally keeps counting.
    """
    if inc.domain.lo not in phi.domain or inc.domain.hi not in phi.domain:
        raise InvalidInput("candidate index leaves the oracle's domain")
    pts = inc.points
    return FnOracle(IntInterval(1, len(pts)), phi.direction, lambda j: phi(pts[j - 1]))


def dom_of(w_inc: ApproxSet, inc: IncIndex) -> list[int]:
    """Map a rank-space breakpoint set back to domain points."""
    pts = inc.points
    out = []
    for j in w_inc.points:
        if not 1 <= j <= len(pts):
            raise InvalidInput(f"rank {j} outside 1..{len(pts)}")
        out.append(pts[j - 1])
    return out


def pad(
    s: Sequence[int], dom: IntInterval, direction: Direction = Direction.NONDECREASING
) -> ApproxSet:
    """Augment each point with its neighbour toward the uncertified side.

    Nondecreasing: predecessors of every point except the first.
    Nonincreasing: successors of every point except the last.
    Result is clipped to the domain and deduplicated; at most doubles the
    input size (|pad(s)| <= 2|s| - 1).
    """
    pts = list(s)
    if not pts or any(a >= b for a, b in zip(pts, pts[1:])):
        raise InvalidInput("pad expects a strictly increasing sequence")
    if pts[0] != dom.lo or pts[-1] != dom.hi:
        raise InvalidInput("pad expects both domain endpoints present")
    out = set(pts)
    if direction is Direction.NONDECREASING:
        out.update(x - 1 for x in pts[1:])
    else:
        out.update(x + 1 for x in pts[:-1])
    return ApproxSet(tuple(sorted(p for p in out if p in dom)), dom)


def convert(
    phi: FnOracle,
    inc: IncIndex,
    k: ApproxRatio,
    *,
    below: int | None = None,
    above: int | None = None,
) -> tuple[ApproxSet, StepFunction]:
    """Compress phi by way of its candidate ranks.

    Runs the direction-appropriate breakpoint construction on the restricted
    oracle over {1..len(inc)}, converts the chosen ranks back through
    :func:`dom_of`, pads, and induces. Total oracle cost is
    O((1 + log_k max(phi)) * log len(inc)).
    """
    ranked = restrict(phi, inc)
    if phi.direction is Direction.NONDECREASING:
        w_rank = apx_set_nondecreasing(ranked, ranked.domain, k)
    else:
        w_rank = apx_set_nonincreasing(ranked, ranked.domain, k)
    w = pad(dom_of(w_rank, inc), inc.domain, phi.direction)
    return w, induce(phi, w, below=below, above=above)
