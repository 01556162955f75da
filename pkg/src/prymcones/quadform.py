"""Exact quadratic-form analysis.

A QuadForm is a symmetric rational Gram matrix on a fixed lattice Z^dim.
The decision path is fully exact: positive definiteness goes through the
pivoted LDL^T of :mod:`exact_linalg`, and short-vector enumeration is a
Fincke-Pohst recursion whose interval bounds are computed with exact
integer square roots.  These routines certify the perfect-cone and
central-cone membership conditions, so no floating point is allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .exact_linalg import (
    INDEFINITE,
    PD,
    PSD_SINGULAR,
    RatMatrix,
    content,
    ldlt,
    sign_normalize,
)


class QuadFormError(ValueError):
    pass


class NotPositiveDefinite(QuadFormError):
    pass


@dataclass(frozen=True)
class QuadForm:
    dim: int
    gram: RatMatrix

    def __post_init__(self):
        if self.gram.rows != self.dim or self.gram.cols != self.dim:
            raise QuadFormError("gram dimensions inconsistent with dim")
        if not self.gram.is_symmetric():
            raise QuadFormError("gram matrix must be symmetric")

    @staticmethod
    def from_rows(rows) -> "QuadForm":
        g = RatMatrix.from_rows(rows)
        return QuadForm(g.rows, g)

    def entry(self, i: int, j: int) -> Fraction:
        return self.gram.data[i][j]

    def scale(self, c) -> "QuadForm":
        return QuadForm(self.dim, self.gram.scale(c))


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple[int, ...]
    primitive: bool = False

    def __post_init__(self):
        if self.primitive and content(self.coeffs) != 1:
            raise QuadFormError("form marked primitive has content != 1")


def evaluate(q: QuadForm, v) -> Fraction:
    """v^T gram v, exactly."""
    v = tuple(v)
    if len(v) != q.dim:
        raise QuadFormError("vector length does not match form dimension")
    total = Fraction(0)
    g = q.gram.data
    for i, vi in enumerate(v):
        if vi == 0:
            continue
        row = g[i]
        total += vi * sum(row[j] * vj for j, vj in enumerate(v) if vj != 0)
    return total


def is_positive_definite(q: QuadForm) -> bool:
    return ldlt(q.gram).status == PD


def is_integral_valued(q: QuadForm) -> bool:
    """True iff q takes integer values on every integer vector.

    Equivalent to: integral diagonal and integral doubled off-diagonal
    entries (evaluate on e_i and e_i + e_j to see both directions).
    """
    g = q.gram.data
    for i in range(q.dim):
        if g[i][i].denominator != 1:
            return False
        for j in range(i + 1, q.dim):
            if (2 * g[i][j]).denominator != 1:
                return False
    return True


def _floor_sqrt(x: Fraction) -> int:
    """floor(sqrt(x)) for x >= 0, exactly."""
    if x < 0:
        raise QuadFormError("negative radicand")
    return isqrt(x.numerator * x.denominator) // x.denominator


def _ldlt_plain(q: QuadForm):
    """Unpivoted LDL^T for a PD form: q = L D L^T, L unit lower triangular.

    Returns (d, c) with d the pivot list and c[i][j] (j > i) the coefficients
    such that Q(x) = sum_i d_i (x_i + sum_{j>i} c_ij x_j)^2.
    """
    n = q.dim
    a = [[Fraction(x) for x in r] for r in q.gram.data]
    d = []
    c = [[Fraction(0)] * n for _ in range(n)]
    for t in range(n):
        p = a[t][t]
        if p <= 0:
            raise NotPositiveDefinite("form is not positive definite")
        d.append(p)
        for j in range(t + 1, n):
            c[t][j] = a[t][j] / p
        for i in range(t + 1, n):
            f = a[t][i] / p
            for j in range(t + 1, n):
                a[i][j] -= f * a[t][j]
    return d, c


def enumerate_below(q: QuadForm, bound, limit: int | None = None) -> list[tuple[int, ...]]:
    """All nonzero integer vectors with q(v) <= bound, one of each +/- pair.

    Exact Fincke-Pohst: recurse on coordinates from the last to the first
    using the completed-square decomposition, with integer-sqrt interval
    bounds tightened by the exact quadratic predicate.  Vectors are reported
    sign-normalized (first nonzero coordinate positive) in lexicographic
    order of discovery.  ``limit``, when given, truncates the search after
    that many vectors (used as a cut generator, never for certification).
    """
    bound = Fraction(bound)
    if ldlt(q.gram).status != PD:
        raise NotPositiveDefinite("enumerate_below requires a positive definite form")
    n = q.dim
    if bound < 0:
        return []
    d, c = _ldlt_plain(q)
    results: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    x = [0] * n

    def recurse(i: int, remaining: Fraction) -> bool:
        # Q(x) = sum_k d_k (x_k + s_k)^2 with s_k dependent on x_{k+1..}.
        if i < 0:
            if any(x):
                v = sign_normalize(tuple(x))
                if v not in seen:
                    seen.add(v)
                    results.append(v)
                    if limit is not None and len(results) >= limit:
                        return False
            return True
        s = sum(c[i][j] * x[j] for j in range(i + 1, n))
        r = remaining / d[i]
        f = _floor_sqrt(r)
        lo = -s - f - 1
        hi = -s + f + 1
        lo_i = lo.__ceil__() if isinstance(lo, Fraction) else lo
        hi_i = hi.__floor__() if isinstance(hi, Fraction) else hi
        # Trim with the exact inequality d_i (x_i + s)^2 <= remaining.
        while lo_i <= hi_i and d[i] * (lo_i + s) ** 2 > remaining:
            lo_i += 1
        while hi_i >= lo_i and d[i] * (hi_i + s) ** 2 > remaining:
            hi_i -= 1
        for xi in range(lo_i, hi_i + 1):
            x[i] = xi
            if not recurse(i - 1, remaining - d[i] * (xi + s) ** 2):
                x[i] = 0
                return False
        x[i] = 0
        return True

    recurse(n - 1, bound)
    return results


def lattice_minimum(q: QuadForm) -> tuple[Fraction, list[tuple[int, ...]]]:
    """Minimum of q over nonzero integer vectors, with all attaining classes.

    Starts from the smallest diagonal value and shrinks the enumeration
    bound exactly.
    """
    if q.dim == 0:
        raise QuadFormError("lattice minimum of a rank-0 form is undefined")
    start = min(q.gram.data[i][i] for i in range(q.dim))
    vecs = enumerate_below(q, start)
    best = min(evaluate(q, v) for v in vecs)
    minimal = sorted(v for v in vecs if evaluate(q, v) == best)
    return best, minimal
