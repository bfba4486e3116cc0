"""Piecewise-linear interval self-maps: the paired tent family and its folded factor.

The paired tent map with parameter kappa in (0, 1/2] is two back-to-back
tents on [-1, 1], every branch with slope magnitude 2(1+kappa); the folded
map is its absolute value acting on [0, 1].  Branch domains are open
intervals and values at shared endpoints are only reachable through
one-sided limits, which is how the endpoint-orbit machinery in ``markov``
consumes these maps.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "Interval",
    "Branch",
    "PiecewiseLinearMap",
    "make_paired_tent",
    "make_folded_tent",
]

# slack for "image stays inside the ambient interval" checks
_IMAGE_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """Nonempty open interval (lo, hi)."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"degenerate interval ({self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol


@dataclass(frozen=True)
class Branch:
    """Affine piece x -> slope*x + intercept on an open domain interval."""

    domain: Interval
    slope: float
    intercept: float

    def __post_init__(self):
        if self.slope == 0.0:
            raise ValueError("branch slope must be nonzero")

    def __call__(self, x: float) -> float:
        return self.slope * x + self.intercept

    def image(self) -> tuple[float, float]:
        """Image of the closed domain, returned as (low, high)."""
        a = self(self.domain.lo)
        b = self(self.domain.hi)
        return (a, b) if a <= b else (b, a)

    def solve(self, y: float) -> float:
        return (y - self.intercept) / self.slope


@dataclass(frozen=True)
class PiecewiseLinearMap:
    """Interval self-map given by finitely many affine branches.

    ``fixed_values`` holds isolated pointwise definitions (for the tent
    family, the value 0 at the discontinuity point 0).  All data is
    immutable; evaluation is pure and safe to share across threads.
    """

    ambient: Interval
    branches: tuple[Branch, ...]
    fixed_values: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        bs = tuple(sorted(self.branches, key=lambda b: b.domain.lo))
        object.__setattr__(self, "branches", bs)
        if not bs:
            raise ValueError("a map needs at least one branch")
        if bs[0].domain.lo != self.ambient.lo or bs[-1].domain.hi != self.ambient.hi:
            raise ValueError("branch domains do not cover the ambient interval")
        for left, right in zip(bs, bs[1:]):
            if left.domain.hi != right.domain.lo:
                raise ValueError("branch domains must tile the ambient interval")
        for b in bs:
            lo, hi = b.image()
            if lo < self.ambient.lo - _IMAGE_TOL or hi > self.ambient.hi + _IMAGE_TOL:
                raise ValueError("branch image leaves the ambient interval")

    # -- evaluation ---------------------------------------------------------

    def _fixed_value_at(self, x: float):
        for p, v in self.fixed_values:
            if x == p:
                return v
        return None

    def eval_one_sided(self, x: float, side: str) -> float:
        """Evaluate at x, approaching from 'left', 'right', or at the 'point'.

        'left'/'right' return the limit along the branch whose closure
        touches x from that side.  'point' requires x to be either a stored
        isolated value or interior to a branch.
        """
        if not self.ambient.contains(x):
            raise ValueError(f"{x} outside ambient interval")
        if side == "point":
            v = self._fixed_value_at(x)
            if v is not None:
                return v
            for b in self.branches:
                if b.domain.lo < x < b.domain.hi:
                    return b(x)
            raise ValueError(f"no pointwise value at breakpoint {x}")
        if side == "left":
            if x == self.ambient.lo:
                raise ValueError("left limit undefined at the lower endpoint")
            for b in self.branches:
                if b.domain.lo < x <= b.domain.hi:
                    return b(x)
        elif side == "right":
            if x == self.ambient.hi:
                raise ValueError("right limit undefined at the upper endpoint")
            for b in self.branches:
                if b.domain.lo <= x < b.domain.hi:
                    return b(x)
        else:
            raise ValueError(f"side must be 'left', 'right' or 'point', got {side!r}")
        raise ValueError(f"{x} not adjacent to any branch")  # pragma: no cover

    def __call__(self, x: float) -> float:
        """Pointwise evaluation where the map is single-valued.

        Works at fixed-value points, branch interiors, ambient endpoints,
        and interior breakpoints where the two one-sided limits agree.
        """
        v = self._fixed_value_at(x)
        if v is not None:
            return v
        if x == self.ambient.lo:
            return self.eval_one_sided(x, "right")
        if x == self.ambient.hi:
            return self.eval_one_sided(x, "left")
        for b in self.branches:
            if b.domain.lo < x < b.domain.hi:
                return b(x)
        left = self.eval_one_sided(x, "left")
        right = self.eval_one_sided(x, "right")
        if abs(left - right) <= _IMAGE_TOL:
            return left
        raise ValueError(f"map is discontinuous at {x}; use eval_one_sided")

    def preimages(self, y: float) -> list[tuple[float, float]]:
        """All branch preimages of y as (x, |slope|) pairs.

        A branch contributes when y lies in its closed image, widened by
        1e-12 so endpoint preimages (one-sided limit values) are included;
        callers needing strict interiors filter afterwards.
        """
        if not self.ambient.contains(y):
            raise ValueError(f"{y} outside ambient interval")
        out = []
        for b in self.branches:
            lo, hi = b.image()
            if lo - _IMAGE_TOL <= y <= hi + _IMAGE_TOL:
                x = b.solve(y)
                x = min(max(x, b.domain.lo), b.domain.hi)
                out.append((x, abs(b.slope)))
        return out


def _check_kappa(kappa: float):
    if not 0.0 < kappa <= 0.5:
        raise ValueError(f"kappa must lie in (0, 1/2], got {kappa}")


def make_paired_tent(kappa: float) -> PiecewiseLinearMap:
    """Two back-to-back tents on [-1, 1] with slope magnitude 2(1+kappa).

    The map is odd, fixes -1 and 1, sends +-1/2 to -+kappa, and carries the
    isolated value 0 at the central discontinuity.
    """
    _check_kappa(kappa)
    s = 2.0 * (1.0 + kappa)
    branches = (
        Branch(Interval(-1.0, -0.5), s, s - 1.0),
        Branch(Interval(-0.5, 0.0), -s, -1.0),
        Branch(Interval(0.0, 0.5), -s, 1.0),
        Branch(Interval(0.5, 1.0), s, 1.0 - s),
    )
    return PiecewiseLinearMap(Interval(-1.0, 1.0), branches, fixed_values=((0.0, 0.0),))


def make_folded_tent(kappa: float) -> PiecewiseLinearMap:
    """The folded map |T(x)| on [0, 1], with four monotone branches.

    Folding splits each half of the paired tent at its zero, located at
    1/(2+2*kappa) below 1/2 and at the mirror point above.
    """
    _check_kappa(kappa)
    s = 2.0 * (1.0 + kappa)
    z_lo = 1.0 / s
    z_hi = 1.0 - 1.0 / s
    branches = (
        Branch(Interval(0.0, z_lo), -s, 1.0),
        Branch(Interval(z_lo, 0.5), s, -1.0),
        Branch(Interval(0.5, z_hi), -s, s - 1.0),
        Branch(Interval(z_hi, 1.0), s, 1.0 - s),
    )
    return PiecewiseLinearMap(Interval(0.0, 1.0), branches, fixed_values=((0.0, 0.0),))
