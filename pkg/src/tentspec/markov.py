"""Markov partitions for piecewise-linear maps and their 0/1 adjacency matrices.

A finite partition into open intervals is Markov when every branch image is
a union of partition intervals.  Partitions are found by iterating the
endpoint set (images of one-sided limits) until it stabilises, or written
down in closed form for the tent family parameters solving
(2+2*kappa)^n * kappa = 1.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .exact import ExactMatrix
from .plmap import PiecewiseLinearMap, make_folded_tent, make_paired_tent

__all__ = [
    "MarkovPartition",
    "MarkovDetectionTrace",
    "NotStabilized",
    "MarkovViolation",
    "detect_markov_partition",
    "analytic_partition",
    "adjacency_matrix",
    "interval_lengths",
]

DEFAULT_TOL = 1e-10


class MarkovViolation(ValueError):
    """A branch image endpoint falls strictly inside a partition interval."""


class NotStabilized(RuntimeError):
    """Endpoint orbit did not close up within the step budget."""

    def __init__(self, trace: "MarkovDetectionTrace"):
        super().__init__(f"endpoint set still growing after {len(trace.steps) - 1} steps")
        self.trace = trace


@dataclass(frozen=True)
class MarkovPartition:
    """Strictly increasing breakpoints; intervals are the open gaps between them."""

    breakpoints: tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if len(bps) < 2:
            raise ValueError("need at least two breakpoints")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @property
    def size(self) -> int:
        """Number of intervals."""
        return len(self.breakpoints) - 1

    def intervals(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.breakpoints, self.breakpoints[1:]))

    def to_dict(self) -> dict:
        """Breakpoints as 17-significant-digit decimal strings (lossless binary64)."""
        return {"breakpoints": [f"{b:.17g}" for b in self.breakpoints]}


@dataclass(frozen=True)
class MarkovDetectionTrace:
    """Endpoint sets E_0, E_1, ... visited during detection."""

    steps: tuple[tuple[float, ...], ...]
    stabilized_at: int | None


def _insert_with_tol(points: list[float], x: float, tol: float) -> bool:
    """Insert x into the sorted list unless a point within tol already exists."""
    i = bisect.bisect_left(points, x)
    if i < len(points) and abs(points[i] - x) <= tol:
        return False
    if i > 0 and abs(points[i - 1] - x) <= tol:
        return False
    points.insert(i, x)
    return True


def _one_sided_images(pmap: PiecewiseLinearMap, s: float) -> list[float]:
    sides = []
    if s > pmap.ambient.lo:
        sides.append("left")
    if s < pmap.ambient.hi:
        sides.append("right")
    return [pmap.eval_one_sided(s, side) for side in sides]


def detect_markov_partition(
    pmap: PiecewiseLinearMap, max_steps: int = 64, tol: float = DEFAULT_TOL
) -> tuple[MarkovPartition, MarkovDetectionTrace]:
    """Grow the branch-endpoint set by one-sided images until it stabilises.

    Points within tol of an existing endpoint are identified with it (the
    first-seen representative wins), so a stabilised set means every image
    endpoint already sits on the grid.  Raises NotStabilized, carrying the
    trace, if the set is still growing after max_steps or its size exceeds
    10 * max_steps.
    """
    if max_steps < 1 or tol <= 0:
        raise ValueError("need max_steps >= 1 and tol > 0")
    points: list[float] = []
    for b in pmap.branches:
        _insert_with_tol(points, b.domain.lo, tol)
        _insert_with_tol(points, b.domain.hi, tol)
    steps = [tuple(points)]
    stabilized = None
    for step in range(1, max_steps + 1):
        grew = False
        for s in list(points):
            for y in _one_sided_images(pmap, s):
                grew |= _insert_with_tol(points, y, tol)
        steps.append(tuple(points))
        if not grew:
            stabilized = step - 1
            break
        if len(points) > 10 * max_steps:
            break
    trace = MarkovDetectionTrace(tuple(steps), stabilized)
    if stabilized is None:
        raise NotStabilized(trace)
    gaps = [b - a for a, b in zip(points, points[1:])]
    if min(gaps) <= 10 * tol:
        raise MarkovViolation("partition gap below detection resolution")
    return MarkovPartition(tuple(points)), trace


def _check_kappa_n(n: int, kappa_n: float):
    if n < 1:
        raise ValueError("n must be positive")
    residual = (2.0 + 2.0 * kappa_n) ** n * kappa_n - 1.0
    if abs(residual) > 1e-12:
        raise ValueError(f"kappa={kappa_n} does not solve (2+2k)^{n} k = 1 (residual {residual:.2e})")


def analytic_partition(n: int, kind: str, kappa_n: float) -> MarkovPartition:
    """Closed-form Markov partition breakpoints for the n-th tent parameter.

    kind 'full' gives the 2n+4-interval partition on [-1, 1]; 'folded' the
    n+3-interval partition on [0, 1].  Orbit points are produced by repeated
    branch evaluation, so rounding grows with the slope power; fine at desk
    scale (n up to ~20).
    """
    _check_kappa_n(n, kappa_n)
    if kind == "full":
        tmap = make_paired_tent(kappa_n)
        its = []
        t = kappa_n
        for _ in range(n - 1):
            t = tmap(t)
            its.append(t)  # decreasing toward 1/2
        bps = (
            [-1.0]
            + [-x for x in its]
            + [-0.5, -kappa_n, 0.0, kappa_n, 0.5]
            + list(reversed(its))
            + [1.0]
        )
        return MarkovPartition(tuple(bps))
    if kind == "folded":
        if n == 1:
            return MarkovPartition((0.0, kappa_n, 0.5, 1.0 - kappa_n, 1.0))
        fmap = make_folded_tent(kappa_n)
        delta = kappa_n / (2.0 * (1.0 + kappa_n))
        its = []
        t = kappa_n
        for _ in range(n - 2):
            t = fmap(t)
            its.append(t)  # folded iterates, decreasing toward 1/2 + delta
        bps = [0.0, kappa_n, 0.5 - delta, 0.5, 0.5 + delta] + list(reversed(its)) + [1.0]
        return MarkovPartition(tuple(bps))
    raise ValueError(f"kind must be 'full' or 'folded', got {kind!r}")


def _match_breakpoint(y: float, bps: tuple[float, ...], thresh: float) -> int | None:
    i = bisect.bisect_left(bps, y)
    best, dist = None, thresh
    for k in (i - 1, i):
        if 0 <= k < len(bps) and abs(bps[k] - y) <= dist:
            best, dist = k, abs(bps[k] - y)
    return best


def adjacency_matrix(
    pmap: PiecewiseLinearMap, part: MarkovPartition, tol: float = DEFAULT_TOL
) -> ExactMatrix:
    """0/1 matrix with entry (i, j) = 1 when interval i is covered by the image of j.

    Rows index image intervals, columns index source intervals.  Every
    monotone sub-branch image of a source interval must have endpoints on
    the breakpoint grid (within 100*tol); otherwise the partition is not
    Markov for the map and MarkovViolation is raised.
    """
    bps = part.breakpoints
    m = part.size
    thresh = 100.0 * tol
    rows = [[0] * m for _ in range(m)]
    for j, (a, b) in enumerate(part.intervals()):
        for branch in pmap.branches:
            lo = max(a, branch.domain.lo)
            hi = min(b, branch.domain.hi)
            if hi - lo <= thresh:
                continue
            y1, y2 = sorted((branch(lo), branch(hi)))
            k = _match_breakpoint(y1, bps, thresh)
            l = _match_breakpoint(y2, bps, thresh)
            if k is None or l is None:
                raise MarkovViolation(
                    f"image endpoint of interval {j} misses the breakpoint grid"
                )
            for i in range(k, l):
                rows[i][j] = 1
    if any(not any(rows[i][j] for i in range(m)) for j in range(m)):
        raise MarkovViolation("a source interval has empty image on the grid")
    return ExactMatrix.from_rows(rows)


def interval_lengths(part: MarkovPartition) -> np.ndarray:
    """Lengths of the partition intervals, in order."""
    return np.diff(np.asarray(part.breakpoints))
