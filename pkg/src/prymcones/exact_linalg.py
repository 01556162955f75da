"""Exact integer/rational matrix kernel.

Everything here is arbitrary precision: integer matrices use Python ints,
rational matrices use ``fractions.Fraction`` (always in lowest terms).  No
floating point appears anywhere; the normal forms and factorizations below
are used as proof steps, so they must be bit-exact.

Conventions: matrices are immutable, stored row-major.  Lattices are always
given by explicit row-basis matrices.  Hermite form is the *row* Hermite
normal form (echelon, positive pivots, entries above a pivot reduced into
``[0, pivot)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class ExactLinalgError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ExactLinalgError("row count mismatch")
        for r in self.data:
            if len(r) != self.cols:
                raise ExactLinalgError("entry count must equal rows x cols")
            for x in r:
                if not isinstance(x, int):
                    raise ExactLinalgError("entries must be ints")

    @staticmethod
    def from_rows(rows, cols=None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise ExactLinalgError("empty matrix needs explicit cols")
            cols = len(rows[0])
        return IntMatrix(len(rows), cols, tuple(rows))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, tuple(tuple(0 for _ in range(cols)) for _ in range(rows)))

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ExactLinalgError("dimension mismatch in product")
        if self.rows == 0:
            return IntMatrix.zero(0, other.cols)
        ot = [[other.data[i][j] for i in range(other.rows)] for j in range(other.cols)]
        out = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in ot) for r in self.data
        )
        return IntMatrix(self.rows, other.cols, out)

    def transpose(self) -> "IntMatrix":
        data = tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols))
        return IntMatrix(self.cols, self.rows, data)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ExactLinalgError("determinant of non-square matrix")
        return _int_det(self.data)

    def to_rational(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(Fraction(x) for x in r) for r in self.data))


def _transpose_rows(rows, cols):
    if not rows:
        return [[] for _ in range(cols)]
    return [list(c) for c in zip(*rows)]


def _int_det(data) -> int:
    # Bareiss fraction-free elimination; exact for any size.
    n = len(data)
    if n == 0:
        return 1
    m = [list(r) for r in data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    data: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ExactLinalgError("row count mismatch")
        for r in self.data:
            if len(r) != self.cols:
                raise ExactLinalgError("entry count must equal rows x cols")

    @staticmethod
    def from_rows(rows, cols=None) -> "RatMatrix":
        rows = [tuple(Fraction(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise ExactLinalgError("empty matrix needs explicit cols")
            cols = len(rows[0])
        return RatMatrix(len(rows), cols, tuple(rows))

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        one, zero = Fraction(1), Fraction(0)
        return RatMatrix(n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    def is_symmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.data[i][j] == self.data[j][i]
                   for i in range(self.rows) for j in range(i + 1, self.cols))

    def scale(self, c) -> "RatMatrix":
        c = Fraction(c)
        return RatMatrix(self.rows, self.cols,
                         tuple(tuple(c * x for x in r) for r in self.data))


def content(vec) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for x in vec:
        g = gcd(g, abs(int(x)))
    return g


def primitive_part(vec) -> tuple[int, ...]:
    """Divide an integer vector by its content; zero vector is kept as zero."""
    g = content(vec)
    if g == 0:
        return tuple(0 for _ in vec)
    return tuple(int(x) // g for x in vec)


def sign_normalize(vec) -> tuple[int, ...]:
    """Flip sign so the first nonzero coordinate is positive."""
    for x in vec:
        if x != 0:
            if x < 0:
                return tuple(-y for y in vec)
            return tuple(vec)
    return tuple(vec)


def hnf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``h = u * m`` in echelon
    form with positive pivots and reduced entries above each pivot.  Zero
    rows are pushed to the bottom.
    """
    a = [list(r) for r in m.data]
    u = [[1 if i == j else 0 for j in range(m.rows)] for i in range(m.rows)]
    r = 0
    for c in range(m.cols):
        # Clear the column below row r with gcd row operations.
        piv = None
        for i in range(r, m.rows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, m.rows):
            while a[i][c] != 0:
                q = a[r][c] // a[i][c]
                a[r] = [x - q * y for x, y in zip(a[r], a[i])]
                u[r] = [x - q * y for x, y in zip(u[r], u[i])]
                a[r], a[i] = a[i], a[r]
                u[r], u[i] = u[i], u[r]
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
        if r == m.rows:
            break
    h = IntMatrix.from_rows(a, m.cols) if a else IntMatrix.zero(0, m.cols)
    return h, IntMatrix.from_rows(u, m.rows) if u else IntMatrix.zero(0, 0)


def snf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``d = u * m * v`` with unimodular ``u, v``.

    Diagonal entries are nonnegative and satisfy d1 | d2 | ... .
    """
    a = [list(r) for r in m.data]
    n, c = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        v[i], v[j] = v[j], v[i]

    def addmul_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        v[dst] = [x + q * y for x, y in zip(v[dst], v[src])]

    t = 0
    while t < n and t < c:
        # Find a nonzero pivot for position (t, t).
        piv = None
        for i in range(t, n):
            for j in range(t, c):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # Kill column t below and row t to the right.
            done = True
            for i in range(t + 1, n):
                if a[i][t] != 0:
                    if a[t][t] == 0 or a[i][t] % a[t][t] != 0:
                        done = False
                    q = a[i][t] // a[t][t] if a[t][t] else 0
                    addmul_row(i, t, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t] if a[t][t] else 0
                    addmul_col(j, t, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        done = False
            if done and all(a[i][t] == 0 for i in range(t + 1, n)) \
                    and all(a[t][j] == 0 for j in range(t + 1, c)):
                break
        # Enforce divisibility of the remaining block by a[t][t].
        bad = None
        for i in range(t + 1, n):
            for j in range(t + 1, c):
                if a[i][j] % a[t][t] != 0:
                    bad = i
                    break
            if bad:
                break
        if bad is not None:
            addmul_row(t, bad, 1)
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    d = IntMatrix.from_rows(a, c) if a else IntMatrix.zero(0, c)
    um = IntMatrix.from_rows(u, n) if u else IntMatrix.zero(0, 0)
    vm = IntMatrix.from_rows(v, c) if v else IntMatrix.zero(0, 0)
    return d, um, vm


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    d, _, _ = snf(m)
    out = []
    for t in range(min(m.rows, m.cols)):
        if d.data[t][t] == 0:
            break
        out.append(d.data[t][t])
    return tuple(out)


def rank(m: IntMatrix) -> int:
    h, _ = hnf(m)
    return sum(1 for r in h.data if any(x != 0 for x in r))


def kernel_lattice(m: IntMatrix) -> IntMatrix:
    """Saturated Z-basis of the integer kernel ``{x : m x = 0}``.

    Rows of the result are the basis vectors (length ``m.cols``).  The basis
    comes out of the HNF transform of the transpose, so it is automatically
    saturated (all Smith invariant factors 1).
    """
    if m.rows == 0:
        return IntMatrix.identity(m.cols)
    mt = m.transpose()
    h, u = hnf(mt)
    ker = [u.data[i] for i in range(mt.rows) if all(x == 0 for x in h.data[i])]
    if not ker:
        return IntMatrix.zero(0, m.cols)
    return IntMatrix.from_rows(ker, m.cols)


def saturate(basis: IntMatrix) -> IntMatrix:
    """Z-basis of (R-span of the rows) intersected with Z^cols.

    Rejects rationally dependent input rows.  Computed as the kernel of the
    kernel: the saturation is exactly the set of integer vectors annihilated
    by every integer vector orthogonal to the row span.
    """
    if rank(basis) != basis.rows:
        raise ExactLinalgError("saturate requires independent rows")
    perp = kernel_lattice(basis)  # {y : basis . y = 0}
    if perp.rows == 0:
        return IntMatrix.identity(basis.cols)
    return kernel_lattice(perp)


def solve_int_rows(basis: IntMatrix, target) -> tuple[int, ...] | None:
    """Express ``target`` as an integer combination of ``basis`` rows, or None."""
    sol = solve_rat_rows(basis, target)
    if sol is None:
        return None
    if any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


def solve_rat_rows(basis: IntMatrix | RatMatrix, target) -> tuple[Fraction, ...] | None:
    """Express ``target`` as a rational combination of ``basis`` rows, or None.

    Requires the rows to be linearly independent.
    """
    rows = [[Fraction(x) for x in r] for r in basis.data]
    t = [Fraction(x) for x in target]
    k, n = len(rows), basis.cols
    # Solve c . rows = t by Gaussian elimination on the transpose system.
    aug = [[rows[i][j] for i in range(k)] + [t[j]] for j in range(n)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = None
        for i in range(r, n):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if len(piv_cols) != k:
        raise ExactLinalgError("solve requires independent rows")
    for i in range(r, n):
        if aug[i][k] != 0:
            return None
    sol = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][k]
    return tuple(sol)


def det_rational(m: RatMatrix) -> Fraction:
    """Exact determinant of a square rational matrix."""
    if m.rows != m.cols:
        raise ExactLinalgError("determinant of non-square matrix")
    n = m.rows
    a = [list(r) for r in m.data]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


PD = "PD"
PSD_SINGULAR = "PSD_SINGULAR"
INDEFINITE = "INDEFINITE"


@dataclass(frozen=True)
class LdltResult:
    status: str
    pivots: tuple[Fraction, ...]
    witness: tuple[Fraction, ...] | None  # d with d^T q d <= 0 when not PD


def ldlt(q: RatMatrix) -> LdltResult:
    """Symmetric-pivoted LDL^T classification of a symmetric rational matrix.

    PD iff all pivots are positive.  When the matrix is not PD an exact
    witness direction ``d`` with ``d^T q d <= 0`` is produced (strictly
    negative in the INDEFINITE case, zero for PSD_SINGULAR).
    """
    if not q.is_symmetric():
        raise ExactLinalgError("ldlt requires a symmetric matrix")
    n = q.rows
    a = [[Fraction(x) for x in r] for r in q.data]
    # basis[i] expresses current coordinate i in original coordinates.
    basis = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    pivots: list[Fraction] = []
    for t in range(n):
        # Choose a positive diagonal pivot if one exists.
        piv = None
        for i in range(t, n):
            if a[i][i] > 0:
                piv = i
                break
        if piv is None:
            # No positive diagonal left: negative diagonal => indefinite,
            # zero diagonal with nonzero off-diagonal => indefinite too.
            for i in range(t, n):
                if a[i][i] < 0:
                    return LdltResult(INDEFINITE, tuple(pivots), tuple(basis[i]))
            for i in range(t, n):
                for j in range(i + 1, n):
                    if a[i][j] != 0:
                        s = a[i][j]
                        d = [x + y for x, y in zip(basis[i], basis[j])] if s < 0 \
                            else [x - y for x, y in zip(basis[i], basis[j])]
                        return LdltResult(INDEFINITE, tuple(pivots), tuple(d))
            # Remaining block is identically zero.
            witness = tuple(basis[t]) if t < n else None
            return LdltResult(PSD_SINGULAR, tuple(pivots), witness)
        if piv != t:
            a[t], a[piv] = a[piv], a[t]
            for row in a:
                row[t], row[piv] = row[piv], row[t]
            basis[t], basis[piv] = basis[piv], basis[t]
        p = a[t][t]
        pivots.append(p)
        # Pass to the Schur complement of the pivot.
        factors = [a[i][t] / p for i in range(t + 1, n)]
        for i in range(t + 1, n):
            f = factors[i - t - 1]
            if f != 0:
                for j in range(t + 1, n):
                    a[i][j] -= f * a[t][j]
                basis[i] = [x - f * y for x, y in zip(basis[i], basis[t])]
        for i in range(t + 1, n):
            a[i][t] = Fraction(0)
            a[t][i] = Fraction(0)
    return LdltResult(PD, tuple(pivots), None)
