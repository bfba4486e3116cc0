"""The polynomial family x^n(x-2) -+ 2, its distinguished real roots, and
simultaneous complex root finding.

kappa_n solves (2+2k)^n k = 1 and 2+2*kappa_n is the top real root of
f_n(x) = x^n(x-2) - 2; for n >= 5 the companion family g_n = f_n + 4 has a
real root 2-2r_n just below 2.  All remaining roots cluster near the unit
circle and are located by Aberth-Ehrlich iteration with an
arbitrary-precision Newton polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from numpy.polynomial import polynomial as npoly

from .exact import IntPolynomial

__all__ = [
    "KappaSolution",
    "ComplexRootSet",
    "AnnulusReport",
    "NoConvergence",
    "f_poly",
    "g_poly",
    "min_poly",
    "char_poly",
    "solve_kappa",
    "solve_r",
    "aberth_roots",
    "annulus_classify",
]

# working precision for the Newton polish and residual evaluation
_POLISH_DPS = 40


class NoConvergence(RuntimeError):
    """Root iteration failed; .best carries the last iterate."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


# ---------------------------------------------------------------------------
# the family
# ---------------------------------------------------------------------------


def f_poly(n: int) -> IntPolynomial:
    """x^n(x-2) - 2, ascending coefficients."""
    if n < 1:
        raise ValueError("n must be positive")
    return IntPolynomial((-2,) + (0,) * (n - 1) + (-2, 1))


def g_poly(n: int) -> IntPolynomial:
    """x^n(x-2) + 2, ascending coefficients."""
    if n < 1:
        raise ValueError("n must be positive")
    return IntPolynomial((2,) + (0,) * (n - 1) + (-2, 1))


def min_poly(n: int) -> IntPolynomial:
    """x * f_n(x) * g_n(x), the minimal polynomial of the full adjacency matrix."""
    x = IntPolynomial((0, 1))
    return x * f_poly(n) * g_poly(n)


def char_poly(n: int) -> IntPolynomial:
    """x^2 * f_n(x) * g_n(x); one extra kernel dimension beyond the minimal polynomial."""
    return IntPolynomial((0, 1)) * min_poly(n)


# ---------------------------------------------------------------------------
# distinguished real roots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KappaSolution:
    n: int
    kappa: float
    residual: float

    def to_dict(self) -> dict:
        return {"n": self.n, "kappa": self.kappa, "residual": self.residual}


def solve_kappa(n: int) -> KappaSolution:
    """The unique kappa in (0, 1/2) with (2+2*kappa)^n * kappa = 1.

    phi(k) = (2+2k)^n k - 1 changes sign on (0, 1/2] (phi -> -1 at 0,
    phi(1/2) = 3^n/2 - 1 > 0), so bisection brackets the root; a short
    Newton polish lands on the last bit.
    """
    if n < 1:
        raise ValueError("n must be positive")

    def phi(k: float) -> float:
        return (2.0 + 2.0 * k) ** n * k - 1.0

    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if phi(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    k = hi
    for _ in range(4):
        base = (2.0 + 2.0 * k) ** n
        dphi = base * (1.0 + 2.0 * n * k / (2.0 + 2.0 * k))
        k -= phi(k) / dphi
    residual = abs(phi(k))
    if not (0.0 < k < 0.5) or residual >= 1e-13:
        raise NoConvergence(f"kappa solve failed at n={n}", best=k)
    return KappaSolution(n, k, residual)


def solve_r(n: int) -> float:
    """The r_n with g_n(2 - 2r_n) = 0 and 2^-n < r_n < 2^-n + 2n*4^-n.

    Only guaranteed for n >= 5.  Substituting x = 2 - 2r turns the root
    condition into 2^n r (1-r)^n = 1, which is solved directly in r; this
    keeps full relative precision even when the bracket width (~2n*4^-n) is
    far below one ulp of the root location near 2.
    """
    if n < 5:
        raise ValueError("the real root just below 2 is only guaranteed for n >= 5")

    def psi(r: float) -> float:
        return math.ldexp(r, n) * (1.0 - r) ** n - 1.0

    lo = math.ldexp(1.0, -n)
    hi = lo + 2.0 * n * math.ldexp(1.0, -2 * n)
    if not (psi(lo) < 0.0 < psi(hi)):
        raise NoConvergence(f"bracket failed for r at n={n}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if psi(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    r = hi
    for _ in range(4):
        dpsi = math.ldexp(1.0, n) * (1.0 - r) ** (n - 1) * (1.0 - (n + 1.0) * r)
        r -= psi(r) / dpsi
    return r


# ---------------------------------------------------------------------------
# Aberth-Ehrlich
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexRootSet:
    """Located roots with genuine residuals |p(root)|.

    Roots are mpmath complex numbers (the Newton polish runs at extended
    precision; binary64 cannot hold the dominant root of x^n(x-2)-2 tightly
    enough for a 1e-9 residual once n grows).  Use as_complex() for a
    binary64 view.
    """

    roots: tuple
    residuals: tuple[float, ...]
    degree: int

    def as_complex(self) -> list[complex]:
        return [complex(z) for z in self.roots]

    def moduli(self) -> list[float]:
        return [float(abs(z)) for z in self.roots]

    def to_csv_rows(self) -> list[tuple[str, str, str]]:
        """(re, im, residual) triples as decimal strings, one per root."""
        out = []
        for z, resid in zip(self.roots, self.residuals):
            zc = complex(z)
            out.append((repr(zc.real), repr(zc.imag), repr(resid)))
        return out


def _initial_points(coeffs: np.ndarray) -> np.ndarray:
    """Perturbed scaled roots of unity; radius from the coefficient bound.

    The rotation by 0.4/deg radians breaks the symmetry of near-circular
    root clusters, which can otherwise stall the simultaneous iteration.
    """
    deg = len(coeffs) - 1
    lead = coeffs[-1]
    radius = 0.8 * (1.0 + max(abs(coeffs[k] / lead) ** (1.0 / (deg - k)) for k in range(deg)))
    angles = 2.0 * np.pi * np.arange(deg) / deg + 0.4 / deg
    return radius * np.exp(1j * angles)


def _polish(z: complex, coeffs: tuple[int, ...]):
    """A few Newton steps at extended precision; returns (root, |p(root)|)."""
    with mp.workdps(_POLISH_DPS):
        zz = mp.mpc(z)
        for _ in range(4):
            p = mp.polyval(coeffs[::-1], zz)
            dp = mp.polyval([c * k for k, c in enumerate(coeffs)][:0:-1], zz)
            if dp == 0:
                break
            zz = zz - p / dp
        resid = abs(mp.polyval(coeffs[::-1], zz))
        return zz, float(resid)


def aberth_roots(p: IntPolynomial, tol: float = 1e-13, max_iters: int = 200) -> ComplexRootSet:
    """All complex roots of p by simultaneous Aberth-Ehrlich iteration.

    Zero roots (trailing zero coefficients) are deflated exactly before the
    iteration, so the solver never sees the multiple root at the origin.
    The binary64 sweep stops once every correction is below
    tol * (1 + |z|); each root is then polished by Newton at extended
    precision and the residual reported at the polished point.

    Raises NoConvergence (carrying the best iterate) after max_iters sweeps.

    References
    ----------
    O. Aberth, Iteration methods for finding all zeros of a polynomial
    simultaneously, Math. Comp. 27 (1973).
    """
    if p.degree < 1:
        raise ValueError("degree must be at least 1")
    coeffs = p.coeffs
    k0 = 0
    while coeffs[k0] == 0:
        k0 += 1
    work = np.array(coeffs[k0:], dtype=float)
    deg = len(work) - 1
    roots: list = [mp.mpc(0)] * k0
    residuals: list[float] = [0.0] * k0
    if deg >= 1:
        dwork = npoly.polyder(work)
        z = _initial_points(work)
        converged = False
        for _ in range(max_iters):
            pv = npoly.polyval(z, work)
            dv = npoly.polyval(z, dwork)
            dv = np.where(dv == 0, 1e-300, dv)
            w = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = (1.0 / diff).sum(axis=1)
            corr = w / (1.0 - w * s)
            z = z - corr
            if np.all(np.abs(corr) < tol * (1.0 + np.abs(z))):
                converged = True
                break
        if not converged:
            raise NoConvergence("Aberth sweep did not converge", best=list(z))
        deflated = tuple(int(c) for c in coeffs[k0:])
        for zj in z:
            root, resid = _polish(complex(zj), deflated)
            roots.append(root)
            residuals.append(resid)
    order = sorted(range(len(roots)), key=lambda i: (mp.re(roots[i]), mp.im(roots[i])))
    return ComplexRootSet(
        roots=tuple(roots[i] for i in order),
        residuals=tuple(residuals[i] for i in order),
        degree=p.degree,
    )


# ---------------------------------------------------------------------------
# annulus classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnulusReport:
    """Counts of roots relative to the circles of radius 1 -+ 1/n.

    The top-level counts cover the union of both root sets; counts_f and
    counts_g give the (inside, annulus, outside) split per polynomial.
    """

    n: int
    inside_inner: int
    in_annulus: int
    outside_outer: int
    perron_root: float
    subdominant_real_root: float | None
    counts_f: tuple[int, int, int]
    counts_g: tuple[int, int, int]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "inside_inner": self.inside_inner,
            "in_annulus": self.in_annulus,
            "outside_outer": self.outside_outer,
            "perron_root": self.perron_root,
            "subdominant_real_root": self.subdominant_real_root,
            "counts_f": list(self.counts_f),
            "counts_g": list(self.counts_g),
        }


def region_counts(moduli, n: int) -> tuple[int, int, int]:
    """(inside, annulus, outside) counts against radii 1 - 1/n and 1 + 1/n."""
    inner, outer = 1.0 - 1.0 / n, 1.0 + 1.0 / n
    inside = sum(1 for m in moduli if m < inner)
    outside = sum(1 for m in moduli if m > outer)
    return inside, len(list(moduli)) - inside - outside, outside


def annulus_classify(n: int, roots_f: ComplexRootSet, roots_g: ComplexRootSet) -> AnnulusReport:
    """Classify both root sets against the annulus and name the real outliers.

    The dominant root of the f family is real (equal to 2+2*kappa_n); for
    n >= 5 the g family has a real root 2-2r_n just below 2, reported as the
    subdominant outlier.
    """
    if n < 1:
        raise ValueError("n must be positive")
    mf = roots_f.moduli()
    mg = roots_g.moduli()
    cf = region_counts(mf, n)
    cg = region_counts(mg, n)
    perron = max(roots_f.roots, key=abs)
    subdominant = None
    if n >= 5:
        real_g = [z for z in roots_g.roots if abs(mp.im(z)) < 1e-8 and mp.re(z) > 1.5]
        if real_g:
            subdominant = float(mp.re(max(real_g, key=lambda z: mp.re(z))))
    return AnnulusReport(
        n=n,
        inside_inner=cf[0] + cg[0],
        in_annulus=cf[1] + cg[1],
        outside_outer=cf[2] + cg[2],
        perron_root=float(mp.re(perron)),
        subdominant_real_root=subdominant,
        counts_f=cf,
        counts_g=cg,
    )
