"""Exact integer and rational dense linear algebra for the adjacency identities.

Everything here is determinant-free and exact: matrices carry Python big
integers, eliminations run over ``fractions.Fraction`` or content-normalised
integers, and every identity check is literal equality.  Floating point never
enters this module.  Minimal polynomials come from linear dependence of
Krylov iterates, kernels from row reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

__all__ = [
    "ExactMatrix",
    "IntPolynomial",
    "NonIntegralRestriction",
    "flip_matrix",
    "mat_poly_apply",
    "verify_pair_identity",
    "krylov_min_poly",
    "kernel_basis",
    "rational_rank",
    "same_span",
    "symmetric_restriction",
    "inclusion_iota",
    "verify_intertwine",
]


class NonIntegralRestriction(ValueError):
    """The matrix handed to symmetric_restriction does not commute with the flip."""


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable dense matrix of arbitrary-precision integers."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("matrix must be nonempty")
        width = len(self.entries[0])
        if any(len(row) != width for row in self.entries):
            raise ValueError("ragged rows")
        norm = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", norm)

    @classmethod
    def from_rows(cls, rows) -> "ExactMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.entries)))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._shape_check(other)
        return ExactMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._shape_check(other)
        return ExactMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __mul__(self, c: int) -> "ExactMatrix":
        return ExactMatrix(tuple(tuple(c * a for a in row) for row in self.entries))

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = tuple(zip(*other.entries))
        return ExactMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.entries
            )
        )

    def __pow__(self, k: int) -> "ExactMatrix":
        if not self.is_square or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        result = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    def apply(self, vec):
        """Matrix-vector product; preserves int/Fraction entry types."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.entries)

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in row) for row in self.entries)

    def commutes_with(self, other: "ExactMatrix") -> bool:
        return self @ other == other @ self

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def to_dict(self) -> dict:
        """JSON-friendly form; entries as decimal strings so big integers survive."""
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in row] for row in self.entries],
        }

    def _shape_check(self, other: "ExactMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")


def flip_matrix(size: int) -> ExactMatrix:
    """Anti-diagonal permutation J with J e_i = e_{size+1-i}; J is an involution."""
    if size < 1:
        raise ValueError("size must be positive")
    return ExactMatrix(
        tuple(tuple(1 if i + j == size - 1 else 0 for j in range(size)) for i in range(size))
    )


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------


def _trim(coeffs) -> tuple[int, ...]:
    cs = list(coeffs)
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class IntPolynomial:
    """Integer-coefficient polynomial, coefficients ascending (c0 + c1*x + ...)."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("use (0,) for the zero polynomial")
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def __call__(self, x):
        acc = 0 * x + self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k >= 1))

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g or 1

    def primitive(self) -> "IntPolynomial":
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        """Quotient self/other, raising if the division is not exact over Q."""
        q, r = _frac_divmod([Fraction(c) for c in self.coeffs], [Fraction(c) for c in other.coeffs])
        if any(c != 0 for c in r):
            raise ValueError("polynomial division is not exact")
        if any(c.denominator != 1 for c in q):
            raise ValueError("quotient is not integral")
        return IntPolynomial(tuple(int(c) for c in q))

    def to_dict(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}


def mat_poly_apply(p: IntPolynomial, M: ExactMatrix) -> ExactMatrix:
    """Evaluate p(M) by Horner's scheme in exact integer arithmetic."""
    if not M.is_square:
        raise ValueError("matrix must be square")
    eye = ExactMatrix.identity(M.rows)
    acc = p.coeffs[-1] * eye
    for c in reversed(p.coeffs[:-1]):
        acc = acc @ M + c * eye
    return acc


def verify_pair_identity(A: ExactMatrix, J: ExactMatrix, n: int) -> bool:
    """Exact check of A(A^{n+1} - 2A^n - 2J) = 0 together with AJ = JA."""
    if not (A.is_square and J.is_square and A.rows == J.rows):
        raise ValueError("A and J must be square of equal size")
    if n < 1:
        raise ValueError("n must be positive")
    if not A.commutes_with(J):
        return False
    An = A ** n
    return (A @ (An @ A - 2 * An - 2 * J)).is_zero()


# ---------------------------------------------------------------------------
# rational elimination
# ---------------------------------------------------------------------------


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot column list)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _as_fraction_rows(vectors) -> list[list[Fraction]]:
    return [[Fraction(x) for x in v] for v in vectors]


def rational_rank(vectors) -> int:
    """Rank of a list of vectors (or of an ExactMatrix's columns) by exact elimination."""
    if isinstance(vectors, ExactMatrix):
        vectors = [vectors.column(j) for j in range(vectors.cols)]
    _, pivots = _rref(_as_fraction_rows(vectors))
    return len(pivots)


def same_span(us, vs) -> bool:
    """Exact equality of the spans of two lists of vectors."""
    us = list(us)
    vs = list(vs)
    ru = rational_rank(us)
    rv = rational_rank(vs)
    return ru == rv == rational_rank(us + vs)


def kernel_basis(M: ExactMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the null space by exact rational row reduction."""
    if not M.is_square:
        raise ValueError("matrix must be square")
    rows, pivots = _rref(_as_fraction_rows(M.entries))
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * M.cols
        v[fc] = Fraction(1)
        for pr, pc in enumerate(pivots):
            v[pc] = -rows[pr][fc]
        basis.append(tuple(v))
    return basis


# ---------------------------------------------------------------------------
# Krylov minimal polynomials
# ---------------------------------------------------------------------------


def _local_annihilator(M: ExactMatrix, start: int) -> list[int]:
    """Least-degree integer relation sum_k c_k M^k e_start = 0, c ascending.

    Grows the Krylov chain e, Me, M^2 e, ... and row-reduces with integer
    cross-multiplication (content-normalised after each step, so entries stay
    small for 0/1 matrices).  The bookkeeping row expresses each echelon row
    as a combination of the iterates; when an iterate reduces to zero that
    combination is the relation.
    """
    size = M.rows
    rows: list[tuple[int, list[int], list[int]]] = []  # (pivot, vector, combination)
    w = [0] * size
    w[start] = 1
    k = 0
    while True:
        vec = list(w)
        combo = [0] * k + [1]
        for pivot, r, c in rows:
            if vec[pivot]:
                a, b = r[pivot], vec[pivot]
                c_pad = c + [0] * (len(combo) - len(c))
                vec = [a * x - b * y for x, y in zip(vec, r)]
                combo = [a * x - b * y for x, y in zip(combo, c_pad)]
                g = 0
                for x in vec:
                    g = gcd(g, x)
                for x in combo:
                    g = gcd(g, x)
                if g > 1:
                    vec = [x // g for x in vec]
                    combo = [x // g for x in combo]
        if not any(vec):
            return combo
        pivot = next(i for i, x in enumerate(vec) if x)
        rows.append((pivot, vec, combo))
        w = list(M.apply(w))
        k += 1
        if k > size:  # cannot happen: dependence by dimension count
            raise AssertionError("Krylov chain exceeded the dimension bound")


def _frac_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Polynomial division over Q, ascending coefficients."""
    while len(b) > 1 and b[-1] == 0:
        b = b[:-1]
    if b == [Fraction(0)]:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    db = len(b) - 1
    while len(r) - 1 >= db and any(c != 0 for c in r):
        while len(r) > 1 and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        shift = len(r) - 1 - db
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r.pop()
    return q, r


def _frac_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Monic gcd over Q by the Euclidean algorithm."""
    a, b = list(a), list(b)
    while any(c != 0 for c in b):
        _, r = _frac_divmod(a, b)
        while len(r) > 1 and r[-1] == 0:
            r.pop()
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def _to_primitive_int(coeffs: list[Fraction]) -> IntPolynomial:
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    return IntPolynomial(tuple(ints)).primitive()


def krylov_min_poly(M: ExactMatrix) -> IntPolynomial:
    """Minimal polynomial of an integer matrix, computed without determinants.

    For each standard basis vector the least linear dependence among its
    Krylov iterates gives a local annihilator; the minimal polynomial is the
    least common multiple of these over Q, returned as a primitive integer
    polynomial with positive leading coefficient.
    """
    if not M.is_square:
        raise ValueError("matrix must be square")
    lcm = [Fraction(1)]
    for start in range(M.rows):
        local = _local_annihilator(M, start)
        p = [Fraction(c, local[-1]) for c in local]
        g = _frac_gcd(lcm, p)
        q, _ = _frac_divmod(p, g)
        out = [Fraction(0)] * (len(lcm) + len(q) - 1)
        for i, a in enumerate(lcm):
            if a:
                for j, b in enumerate(q):
                    out[i + j] += a * b
        lcm = out
        if len(lcm) - 1 == M.rows:  # degree cannot exceed the dimension
            break
    return _to_primitive_int(lcm)


# ---------------------------------------------------------------------------
# symmetric restriction and the factor inclusion
# ---------------------------------------------------------------------------


def symmetric_restriction(A: ExactMatrix, n: int) -> ExactMatrix:
    """Matrix of A acting on the flip-symmetric subspace in the paired basis.

    The basis vectors are s_i = (e_{n+3-i} + e_{n+2+i})/2 for i = 1..n+2,
    pairing each coordinate with its mirror.  Requires A of size 2n+4
    commuting with the flip; the re-expressed entries are then integers.
    """
    size = 2 * n + 4
    if not (A.is_square and A.rows == size):
        raise ValueError(f"expected a {size}x{size} matrix")
    if not A.commutes_with(flip_matrix(size)):
        raise NonIntegralRestriction("matrix does not commute with the flip")
    m = n + 2
    entries = []
    for jj in range(m):
        row = []
        for ii in range(m):
            row.append(A.entries[n + 2 + jj][n + 1 - ii] + A.entries[n + 2 + jj][n + 2 + ii])
        entries.append(tuple(row))
    return ExactMatrix(tuple(entries))


def inclusion_iota(n: int) -> ExactMatrix:
    """The (n+3) x (n+2) inclusion of the symmetric subspace into factor coordinates.

    For n >= 2 the second symmetric basis vector covers the factor interval
    that the folding splits in two, so column 2 is d_2 + d_3 and column k
    maps to d_{k+1} for k >= 3.  For n = 1 the split lands in the outermost
    piece instead: column 2 is d_2 and column 3 is d_3 + d_4.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rows, cols = n + 3, n + 2
    entries = [[0] * cols for _ in range(rows)]
    if n == 1:
        entries[0][0] = 1
        entries[1][1] = 1
        entries[2][2] = 1
        entries[3][2] = 1
    else:
        entries[0][0] = 1
        entries[1][1] = 1
        entries[2][1] = 1
        for k in range(2, cols):
            entries[k + 1][k] = 1
    return ExactMatrix(tuple(tuple(r) for r in entries))


def verify_intertwine(B: ExactMatrix, C: ExactMatrix, iota: ExactMatrix) -> bool:
    """Exact equality of iota @ C and B @ iota."""
    if iota.cols != C.rows or B.cols != iota.rows:
        raise ValueError("incompatible shapes")
    return iota @ C == B @ iota
