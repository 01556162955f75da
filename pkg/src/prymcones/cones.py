"""Cones of rank-1 quadratic forms and their decomposition membership.

A RankOneCone stores primitive integer linear forms l_1..l_k on a lattice
of rank r; the object of interest is the cone R>=0 <l_i^2> inside the
space of symmetric forms.  Membership decisions:

* second Voronoi  = matroidality (every maximal independent subset of the
  forms is a Z-basis of the saturation of its span) - a complete decision;
* perfect cone    = existence of a positive definite Q with Q(l_i) = 1 and
  Q >= 1 on all nonzero lattice vectors - decided by an exact cutting-plane
  loop, sound in both directions but capped (UNKNOWN on cap);
* central cone    = perfect plus integrality of Q - decided by certificate
  verification or a bounded half-integer search.

Every CONTAINED answer carries a certificate that re-verifies from scratch
and every NOT_CONTAINED answer carries data for an exactly infeasible LP.
Floating point appears nowhere; the only heuristic (integer rounding of
indefinite directions) is a cut generator whose output is verified exactly.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import lp
from .exact_linalg import (
    PD,
    IntMatrix,
    RatMatrix,
    content,
    hnf,
    invariant_factors,
    ldlt,
    primitive_part,
    rank,
    saturate,
    sign_normalize,
    snf,
    solve_int_rows,
    solve_rat_rows,
)
from .quadform import QuadForm, enumerate_below, evaluate, is_integral_valued

SECOND_VORONOI = "second_voronoi"
PERFECT = "perfect"
CENTRAL = "central"

CONTAINED = "CONTAINED"
NOT_CONTAINED = "NOT_CONTAINED"
UNKNOWN = "UNKNOWN"


class ConeError(ValueError):
    pass


@dataclass(frozen=True)
class RankOneCone:
    ambient_rank: int
    generators: tuple[tuple[int, ...], ...]
    dropped_zero_forms: int = 0

    @staticmethod
    def from_rows(rows, ambient_rank: int | None = None) -> "RankOneCone":
        rows = [tuple(int(x) for x in r) for r in rows]
        if ambient_rank is None:
            if not rows:
                raise ConeError("empty cone needs explicit ambient_rank")
            ambient_rank = len(rows[0])
        kept = []
        dropped = 0
        for r in rows:
            if len(r) != ambient_rank:
                raise ConeError("generator length mismatch")
            if all(x == 0 for x in r):
                dropped += 1
            else:
                kept.append(primitive_part(r))
        return RankOneCone(ambient_rank, tuple(kept), dropped)

    @property
    def count(self) -> int:
        return len(self.generators)

    def matrix(self) -> IntMatrix:
        if not self.generators:
            return IntMatrix.zero(0, self.ambient_rank)
        return IntMatrix.from_rows(self.generators, self.ambient_rank)


@dataclass(frozen=True)
class MembershipVerdict:
    decomposition: str
    status: str
    certificate: QuadForm | None = None
    witness: tuple[tuple[int, ...], ...] | None = None  # LP-infeasible vector set
    failing_subset: tuple[tuple[int, ...], ...] | None = None  # non-basis subset
    iterations: int = 0
    notes: tuple[str, ...] = ()


def sym_vec_len(r: int) -> int:
    return r * (r + 1) // 2


def sym_pairs(r: int) -> list[tuple[int, int]]:
    """Coordinate order for vectorized symmetric matrices: diagonal, then
    off-diagonal pairs in lexicographic order."""
    return [(i, i) for i in range(r)] + [(i, j) for i in range(r) for j in range(i + 1, r)]


def square_vec(v) -> tuple[int, ...]:
    """Vectorize the rank-1 symmetric matrix v^T v."""
    r = len(v)
    out = [v[i] * v[i] for i in range(r)]
    out += [v[i] * v[j] for i in range(r) for j in range(i + 1, r)]
    return tuple(out)


def sym_vec_of_gram(g: RatMatrix) -> tuple[Fraction, ...]:
    r = g.rows
    out = [g.data[i][i] for i in range(r)]
    out += [g.data[i][j] for i in range(r) for j in range(i + 1, r)]
    return tuple(out)


def gram_of_sym_vec(vec, r: int) -> list[list[Fraction]]:
    g = [[Fraction(0)] * r for _ in range(r)]
    pairs = sym_pairs(r)
    for (i, j), x in zip(pairs, vec):
        g[i][j] = Fraction(x)
        g[j][i] = Fraction(x)
    return g


def is_simplicial(c: RankOneCone) -> bool:
    """True iff the generator rows are linearly independent over Q."""
    if not c.generators:
        return True
    return rank(c.matrix()) == c.count


def is_basic(c: RankOneCone) -> bool:
    """True iff the squares l_i^2 extend to a Z-basis of the lattice of
    integer symmetric forms (independent with trivial Smith factors)."""
    if not c.generators:
        return True
    m = IntMatrix.from_rows([square_vec(v) for v in c.generators],
                            sym_vec_len(c.ambient_rank))
    if rank(m) != c.count:
        return False
    return all(f == 1 for f in invariant_factors(m))


def _subset_is_saturated_basis(rows, cols) -> bool:
    """gcd of maximal minors is 1 <=> rows form a Z-basis of the saturation
    of their span (rows assumed independent)."""
    m = IntMatrix.from_rows(rows, cols)
    return all(f == 1 for f in invariant_factors(m))


def is_matroidal(c: RankOneCone):
    """Second Voronoi test via Lemma-style maximal subsets.

    Returns (True, None) or (False, failing_subset) where the subset is a
    maximal-rank independent family of generators that is not a Z-basis of
    the saturation of its span.
    """
    if not c.generators:
        return True, None
    mat = c.matrix()
    rho = rank(mat)
    for idx in itertools.combinations(range(c.count), rho):
        rows = [c.generators[i] for i in idx]
        if rank(IntMatrix.from_rows(rows, c.ambient_rank)) != rho:
            continue
        if not _subset_is_saturated_basis(rows, c.ambient_rank):
            return False, tuple(rows)
    return True, None


def is_matroidal_oracle(c: RankOneCone) -> bool:
    """Exhaustive check over ALL independent subsets (not just maximal)."""
    if c.count > 12:
        raise ConeError("oracle capped at 12 generators")
    for size in range(1, c.count + 1):
        for idx in itertools.combinations(range(c.count), size):
            rows = [c.generators[i] for i in idx]
            if rank(IntMatrix.from_rows(rows, c.ambient_rank)) != size:
                continue
            if not _subset_is_saturated_basis(rows, c.ambient_rank):
                return False
    return True


def low_rank_restriction_negative(c: RankOneCone):
    """Self-contained negative certificate from a rank <= 3 restriction.

    In rank <= 3 all three classical decompositions coincide, so an
    independent generator subset that fails to be a Z-basis of the
    saturation of its span rules out containment in all of them.  Returns
    the failing subset (as generator rows) or None.
    """
    for size in (2, 3):
        if size > c.count:
            break
        for idx in itertools.combinations(range(c.count), size):
            rows = [c.generators[i] for i in idx]
            if rank(IntMatrix.from_rows(rows, c.ambient_rank)) != size:
                continue
            if not _subset_is_saturated_basis(rows, c.ambient_rank):
                return tuple(rows)
    return None


def dicing_check(forms: IntMatrix) -> bool:
    """True iff the rows are a Z-basis of the full dual lattice: the integer
    translates of their level sets then dice the lattice."""
    if rank(forms) != forms.rows:
        raise ConeError("dicing_check requires independent rows")
    if forms.rows != forms.cols:
        return False
    return abs(forms.det()) == 1


# ----------------------------------------------------------------------
# span restriction


def complete_to_unimodular(basis: IntMatrix) -> IntMatrix:
    """Extend the rows of a saturated basis to a unimodular square matrix."""
    d, u, v = snf(basis)
    if any(d.data[t][t] != 1 for t in range(basis.rows)):
        raise ConeError("basis is not saturated")
    # basis = u^-1 [I 0] v^-1, so rows w.. of v^-1 complete u*basis; then
    # [basis; tail] differs from v^-1 by the unimodular block diag(u^-1, I).
    vinv = _int_inverse(v)
    tail = [vinv.data[i] for i in range(basis.rows, basis.cols)]
    full = IntMatrix.from_rows(list(basis.data) + tail, basis.cols)
    if abs(full.det()) != 1:
        raise ConeError("unimodular completion failed")
    return full


def _int_inverse(m: IntMatrix) -> IntMatrix:
    det = m.det()
    if abs(det) != 1:
        raise ConeError("matrix is not unimodular")
    n = m.rows
    sol = []
    for i in range(n):
        e = [1 if j == i else 0 for j in range(n)]
        coeffs = solve_int_rows(m, e)
        if coeffs is None:
            raise ConeError("inverse failed")
        sol.append(coeffs)
    # rows of sol express e_i over rows of m: sol * m = I, so inverse acts
    # on the left; we want m^-1 with m * m^-1 = I, i.e. columns.
    inv = IntMatrix.from_rows(sol, n)
    return inv


@dataclass(frozen=True)
class SpanReduction:
    """Coordinates of the saturated span W of the generators.

    basis rows give W inside Z^r; reduced holds the generators in the
    basis coordinates; a form Q_W on Z^w lifts to Z^r by extending with an
    orthogonal identity block on the completion."""
    basis: IntMatrix
    reduced: RankOneCone


def span_reduce(c: RankOneCone) -> SpanReduction:
    mat = c.matrix()
    rho = rank(mat)
    if rho == 0:
        return SpanReduction(IntMatrix.zero(0, c.ambient_rank),
                             RankOneCone(0, (), c.dropped_zero_forms))
    rows = []
    for g in c.generators:
        cand = rows + [g]
        if rank(IntMatrix.from_rows(cand, c.ambient_rank)) == len(cand):
            rows.append(g)
        if len(rows) == rho:
            break
    w = saturate(IntMatrix.from_rows(rows, c.ambient_rank))
    reduced_rows = []
    for g in c.generators:
        coeffs = solve_int_rows(w, g)
        if coeffs is None:
            raise ConeError("generator escapes its own span saturation")
        reduced_rows.append(coeffs)
    red = RankOneCone(rho, tuple(tuple(r) for r in reduced_rows), c.dropped_zero_forms)
    return SpanReduction(w, red)


def lift_certificate(q: QuadForm, red: SpanReduction, ambient_rank: int) -> QuadForm:
    """Extend a certificate on the span lattice to the full lattice.

    Uses the unimodular completion F of the span basis and the block form
    Q + identity; values on vectors outside the span gain at least 1, so
    lattice minimum >= 1 and integrality are both preserved.
    """
    w = red.basis.rows
    if w == 0:
        return QuadForm.from_rows([[Fraction(1) if i == j else Fraction(0)
                                    for j in range(ambient_rank)] for i in range(ambient_rank)])
    full = complete_to_unimodular(red.basis)
    finv = _int_inverse(full)
    n = ambient_rank
    block = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            block[i][j] = q.gram.data[i][j] if i < w and j < w else \
                (Fraction(1) if i == j else Fraction(0))
    # x (row) = a * full  =>  Q_full(x) = a Q a^T with a = x * finv
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = Fraction(0)
            for s in range(n):
                for t in range(n):
                    acc += finv.data[i][s] * block[s][t] * finv.data[j][t]
            g[i][j] = acc
    return QuadForm.from_rows(g)


# ----------------------------------------------------------------------
# perfect-cone cutting-plane loop


def _round_frac(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def _rounding_cuts(q: QuadForm, direction, max_k: int = 64, rng=None):
    """Integer roundings of k * d / |d|_1 with q-value < 1, verified exactly."""
    norm = sum(abs(x) for x in direction)
    if norm == 0:
        return []
    unit = [Fraction(x) / norm for x in direction]
    cuts = []
    seen = set()
    for k in range(1, max_k + 1):
        w = tuple(_round_frac(k * u) for u in unit)
        if all(x == 0 for x in w):
            continue
        w = sign_normalize(primitive_part(w))
        if w in seen:
            continue
        seen.add(w)
        if evaluate(q, w) < 1:
            cuts.append(w)
    if not cuts and rng is not None:
        for _ in range(8):
            jitter = [Fraction(rng.randrange(-3, 4), 64) for _ in direction]
            d2 = [x + j for x, j in zip(direction, jitter)]
            cuts = _rounding_cuts(q, d2, max_k, None)
            if cuts:
                break
    return cuts


def _perfect_lp(red: RankOneCone, witnesses, slack_cap=Fraction(4)):
    """One LP round for the perfect-cone criterion.

    Phase 1 decides feasibility of the hard system Q(l_i) = 1, Q(w) >= 1
    (variables: upper triangle of Q); None means exactly infeasible.  Among
    feasible solutions a second solve maximizes the minimum slack t >= 0
    over the witness inequalities (capped to stay bounded), pushing the
    candidate toward the relative interior before the PD test."""
    r = red.ambient_rank
    pairs = sym_pairs(r)
    nq = len(pairs)

    def row_for(v, extra=0):
        coeffs = [Fraction(v[i] * v[j] if i == j else 2 * v[i] * v[j])
                  for (i, j) in pairs]
        return coeffs + [Fraction(0)] * extra

    # With t >= 0 the slack system is feasible iff the hard system is
    # (t = 0 recovers it), so one solve decides feasibility and pushes
    # toward the relative interior at the same time.
    eqs = [(row_for(g, 1), Fraction(1)) for g in red.generators]
    ineqs = []
    for w in witnesses:
        coeffs = row_for(w) + [Fraction(-1)]  # Q(w) - t >= 1
        ineqs.append((coeffs, Fraction(1)))
    ineqs.append(([Fraction(0)] * nq + [Fraction(1)], Fraction(0)))    # t >= 0
    ineqs.append(([Fraction(0)] * nq + [Fraction(-1)], -slack_cap))    # t <= cap
    objective = [Fraction(0)] * nq + [Fraction(1)]
    status, x = lp.solve(nq + 1, eqs, ineqs, objective)
    if status == lp.INFEASIBLE:
        return None
    if status != lp.OPTIMAL:
        raise ConeError("slack LP failed unexpectedly")
    gram = gram_of_sym_vec(x[:nq], r)
    return QuadForm.from_rows(gram)


def witness_lp_infeasible(red: RankOneCone, witnesses) -> bool:
    """Independent phase-1 re-solve of the certificate LP with the given
    witness vectors; True when it is exactly infeasible."""
    r = red.ambient_rank
    pairs = sym_pairs(r)
    nq = len(pairs)

    def row_for(v):
        return [Fraction(v[i] * v[j] if i == j else 2 * v[i] * v[j]) for (i, j) in pairs]

    eqs = [(row_for(g), Fraction(1)) for g in red.generators]
    ineqs = [(row_for(w), Fraction(1)) for w in witnesses]
    status, _ = lp.solve(nq, eqs, ineqs)
    return status == lp.INFEASIBLE


def _minimize_witnesses(red: RankOneCone, witnesses):
    ws = list(witnesses)
    i = 0
    while i < len(ws):
        trial = ws[:i] + ws[i + 1:]
        if trial and witness_lp_infeasible(red, trial):
            ws = trial
        else:
            i += 1
    return tuple(ws)


def _half_sum_seeds(red: RankOneCone):
    """Index-2 seeds: lattice vectors (l_a +/- l_b)/2 when integral."""
    seeds = []
    gens = red.generators
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            for sign in (1, -1):
                v = tuple((x + sign * y) for x, y in zip(gens[a], gens[b]))
                if any(x % 2 for x in v):
                    continue
                half = tuple(x // 2 for x in v)
                if any(half):
                    seeds.append(sign_normalize(half))
    return seeds


def _dedup(vectors):
    out = []
    seen = set()
    for v in vectors:
        v = sign_normalize(tuple(v))
        if v not in seen and any(v):
            seen.add(v)
            out.append(v)
    return out


def membership(c: RankOneCone, decomposition: str, certificate: QuadForm | None = None,
               max_iterations: int = 200, central_box: int = 6,
               box_is_proof: bool = False) -> MembershipVerdict:
    """Tri-state membership of the cone in one of the three decompositions.

    ``certificate`` is an optional caller-supplied form, verified exactly
    before anything else is attempted (used for the central cone, where no
    terminating search is available in general).  UNKNOWN is returned when
    iteration or size caps are hit; a wrong verdict is never returned.
    """
    if decomposition == SECOND_VORONOI:
        ok, failing = is_matroidal(c)
        if ok:
            return MembershipVerdict(decomposition, CONTAINED)
        return MembershipVerdict(decomposition, NOT_CONTAINED, failing_subset=failing)
    if decomposition not in (PERFECT, CENTRAL):
        raise ConeError(f"unknown decomposition {decomposition!r}")

    if not c.generators:
        return MembershipVerdict(decomposition, CONTAINED, notes=("empty cone",))

    red = span_reduce(c)
    if certificate is not None:
        want_integral = decomposition == CENTRAL
        ok, note = _verify_certificate(red.reduced, _restrict_certificate(certificate, red, c),
                                       want_integral)
        if ok:
            return MembershipVerdict(decomposition, CONTAINED, certificate=certificate,
                                     notes=("caller-supplied certificate verified",))
        # fall through; an invalid certificate proves nothing

    if decomposition == PERFECT:
        return _membership_perfect(c, red, max_iterations)
    return _membership_central(c, red, max_iterations, central_box, box_is_proof)


def _restrict_certificate(q: QuadForm, red: SpanReduction, c: RankOneCone) -> QuadForm:
    """Restrict a form on the ambient lattice to span coordinates."""
    if q.dim == red.reduced.ambient_rank and red.basis.rows == q.dim and \
            all(red.basis.data[i][j] == (1 if i == j else 0)
                for i in range(red.basis.rows) for j in range(red.basis.cols)):
        return q
    if q.dim != c.ambient_rank:
        raise ConeError("certificate dimension mismatch")
    b = red.basis
    w = b.rows
    g = [[Fraction(0)] * w for _ in range(w)]
    for i in range(w):
        for j in range(w):
            acc = Fraction(0)
            for s in range(q.dim):
                for t in range(q.dim):
                    acc += b.data[i][s] * q.gram.data[s][t] * b.data[j][t]
            g[i][j] = acc
    return QuadForm.from_rows(g)


def _verify_certificate(red: RankOneCone, q: QuadForm, want_integral: bool):
    """Exact re-verification of a perfect/central certificate on the span."""
    if q.dim != red.ambient_rank:
        return False, "dimension mismatch"
    if ldlt(q.gram).status != PD:
        return False, "not positive definite"
    for g in red.generators:
        if evaluate(q, g) != 1:
            return False, f"value on generator {g} is not 1"
    for v in enumerate_below(q, 1):
        if evaluate(q, v) < 1:
            return False, f"lattice vector {v} has value < 1"
    if want_integral and not is_integral_valued(q):
        return False, "not integral valued"
    return True, "ok"


def _membership_perfect(c: RankOneCone, red: SpanReduction, max_iterations: int) -> MembershipVerdict:
    rc = red.reduced
    ok, _ = is_matroidal(c)
    if ok:
        # Matroidal cones lie in the perfect cone decomposition.
        return MembershipVerdict(PERFECT, CONTAINED, notes=("matroidal",))

    r = rc.ambient_rank
    witnesses = _dedup([tuple(1 if i == j else 0 for j in range(r)) for i in range(r)]
                       + _half_sum_seeds(rc))
    rng = random.Random(20240601)
    iterations = 0
    while iterations < max_iterations:
        iterations += 1
        q = _perfect_lp(rc, witnesses)
        if q is None:
            minimized = _minimize_witnesses(rc, witnesses)
            return MembershipVerdict(PERFECT, NOT_CONTAINED, witness=minimized,
                                     iterations=iterations)
        res = ldlt(q.gram)
        if res.status != PD:
            cuts = _rounding_cuts(q, res.witness, rng=rng)
            if cuts:
                witnesses = _dedup(witnesses + cuts[:8])
                continue
            return MembershipVerdict(PERFECT, UNKNOWN, iterations=iterations,
                                     notes=("no integer cut found for indefinite direction",))
        # Cheap scan first: a bad candidate usually has many violators.
        short = enumerate_below(q, 1, limit=64)
        violators = [primitive_part(v) for v in short if evaluate(q, v) < 1]
        if not violators and len(short) >= 64:
            short = enumerate_below(q, 1, limit=4000)
            violators = [primitive_part(v) for v in short if evaluate(q, v) < 1]
            if not violators and len(short) >= 4000:
                return MembershipVerdict(PERFECT, UNKNOWN, iterations=iterations,
                                         notes=("enumeration truncated",))
        if not violators:
            cert = lift_certificate(q, red, c.ambient_rank)
            return MembershipVerdict(PERFECT, CONTAINED, certificate=cert,
                                     iterations=iterations)
        witnesses = _dedup(witnesses + violators[:8])
    return MembershipVerdict(PERFECT, UNKNOWN, iterations=iterations,
                             notes=("iteration cap reached",))


def _membership_central(c: RankOneCone, red: SpanReduction, max_iterations: int,
                        central_box: int, box_is_proof: bool) -> MembershipVerdict:
    perfect = _membership_perfect(c, red, max_iterations)
    if perfect.status == NOT_CONTAINED:
        # Rank-1 cones in a central cone also lie in a perfect cone.
        return MembershipVerdict(CENTRAL, NOT_CONTAINED, witness=perfect.witness,
                                 iterations=perfect.iterations,
                                 notes=("excluded via perfect cone",))

    rc = red.reduced
    found = _central_search(rc, central_box)
    if found == "capped":
        return MembershipVerdict(CENTRAL, UNKNOWN, notes=("central search capped",))
    if found is not None:
        cert = lift_certificate(found, red, c.ambient_rank)
        return MembershipVerdict(CENTRAL, CONTAINED, certificate=cert,
                                 notes=("found by bounded half-integer search",))
    if box_is_proof:
        return MembershipVerdict(CENTRAL, NOT_CONTAINED,
                                 notes=(f"exhausted half-integer box {central_box}",))
    return MembershipVerdict(CENTRAL, UNKNOWN,
                             notes=(f"no certificate in half-integer box {central_box}",))


def _central_search(rc: RankOneCone, box: int, free_cap: int = 6):
    """Bounded exhaustive search for an integral-valued certificate.

    Solves the value-1 equalities over the upper-triangle variables, then
    enumerates the free entries over half-integers with |2 q_ij| <= box.
    Returns a QuadForm, None (exhausted), or "capped".
    """
    r = rc.ambient_rank
    pairs = sym_pairs(r)
    nq = len(pairs)
    rows = []
    rhs = []
    for g in rc.generators:
        rows.append([Fraction(g[i] * g[j] if i == j else 2 * g[i] * g[j]) for (i, j) in pairs])
        rhs.append(Fraction(1))
    # Echelonize to express pivot variables by free ones.
    aug = [row + [b] for row, b in zip(rows, rhs)]
    piv_of_col = {}
    rr = 0
    for col in range(nq):
        piv = None
        for i in range(rr, len(aug)):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[rr], aug[piv] = aug[piv], aug[rr]
        pv = aug[rr][col]
        aug[rr] = [x / pv for x in aug[rr]]
        for i in range(len(aug)):
            if i != rr and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[rr])]
        piv_of_col[col] = rr
        rr += 1
    for i in range(rr, len(aug)):
        if aug[i][nq] != 0:
            return None  # equalities already inconsistent
    free_cols = [cidx for cidx in range(nq) if cidx not in piv_of_col]
    if len(free_cols) > free_cap:
        return "capped"

    halves = [Fraction(0)]
    for k in range(1, box + 1):
        halves.append(Fraction(k, 2))
        halves.append(Fraction(-k, 2))

    for assignment in itertools.product(halves, repeat=len(free_cols)):
        vals = [Fraction(0)] * nq
        for cidx, val in zip(free_cols, assignment):
            vals[cidx] = val
        ok = True
        for cidx, rowi in piv_of_col.items():
            v = aug[rowi][nq] - sum(aug[rowi][f] * vals[f] for f in free_cols if aug[rowi][f] != 0)
            if (2 * v).denominator != 1 or abs(2 * v) > box:
                ok = False
                break
            vals[cidx] = v
        if not ok:
            continue
        gram = gram_of_sym_vec(vals, r)
        q = QuadForm.from_rows(gram)
        if not is_integral_valued(q):
            continue
        if any(q.gram.data[i][i] < 1 for i in range(r)):
            continue
        if any(q.gram.data[i][j] ** 2 > q.gram.data[i][i] * q.gram.data[j][j]
               for i in range(r) for j in range(i + 1, r)):
            continue
        if ldlt(q.gram).status != PD:
            continue
        good = True
        for v in enumerate_below(q, 1):
            if evaluate(q, v) < 1:
                good = False
                break
        if good:
            return q
    return None


# ----------------------------------------------------------------------
# unimodular cone equivalence


def cone_equivalent(a: RankOneCone, b: RankOneCone) -> bool:
    return cone_equivalence_map(a, b) is not None


def cone_equivalence_map(a: RankOneCone, b: RankOneCone):
    """Search for (U, perm, signs) with a_i U = signs_i * b[perm_i], U in
    GL(Z).  Returns the data or None.  Permutation pruning goes through the
    pairwise invariant W = A (A^T A)^-1 A^T, which transforms only by signs
    and permutation under any unimodular change of basis.
    """
    if a.ambient_rank != b.ambient_rank or a.count != b.count:
        return None
    if a.count > 8:
        raise ConeError("cone_equivalent capped at 8 generators")
    if a.count == 0:
        return IntMatrix.identity(a.ambient_rank), (), ()
    ra, rb = span_reduce(a), span_reduce(b)
    if ra.reduced.ambient_rank != rb.reduced.ambient_rank:
        return None
    wa = _pair_invariant(ra.reduced)
    wb = _pair_invariant(rb.reduced)
    k = a.count
    used = [False] * k
    perm = [-1] * k

    def backtrack(i):
        if i == k:
            yield tuple(perm)
            return
        for j in range(k):
            if used[j]:
                continue
            if abs(wa[i][i]) != abs(wb[j][j]):
                continue
            if any(abs(wa[i][i2]) != abs(wb[j][perm[i2]]) for i2 in range(i)):
                continue
            used[j] = True
            perm[i] = j
            yield from backtrack(i + 1)
            used[j] = False
            perm[i] = -1

    for p in backtrack(0):
        u = _solve_equivalence(ra.reduced, rb.reduced, wa, wb, p)
        if u is not None:
            return u
    return None


def _pair_invariant(c: RankOneCone):
    mat = c.matrix().to_rational()
    r = c.ambient_rank
    s = [[Fraction(0)] * r for _ in range(r)]
    for g in c.generators:
        for i in range(r):
            for j in range(r):
                s[i][j] += g[i] * g[j]
    sinv = _rat_inverse(s)
    k = c.count
    w = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            acc = Fraction(0)
            for p in range(r):
                for qq in range(r):
                    acc += c.generators[i][p] * sinv[p][qq] * c.generators[j][qq]
            w[i][j] = acc
    return w


def _rat_inverse(s):
    n = len(s)
    a = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(s)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise ConeError("singular matrix in invariant computation")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def _solve_equivalence(a: RankOneCone, b: RankOneCone, wa, wb, perm):
    k = a.count
    # Sign propagation along nonzero W entries; free components get both signs.
    signs = [0] * k
    comps = []
    for start in range(k):
        if signs[start] != 0:
            continue
        comp = [start]
        signs[start] = 1
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(k):
                if wa[i][j] != 0 and signs[j] == 0:
                    ratio_sign = 1 if (wa[i][j] > 0) == (wb[perm[i]][perm[j]] > 0) else -1
                    signs[j] = signs[i] * ratio_sign
                    comp.append(j)
                    queue.append(j)
        # Consistency within the component.
        for i in comp:
            for j in comp:
                if wa[i][j] != 0:
                    lhs = 1 if wa[i][j] > 0 else -1
                    rhs = 1 if wb[perm[i]][perm[j]] > 0 else -1
                    if lhs * signs[i] * signs[j] != rhs:
                        return None
        comps.append(comp)

    for flips in itertools.product((1, -1), repeat=len(comps)):
        eps = list(signs)
        for comp, f in zip(comps, flips):
            for i in comp:
                eps[i] *= f
        u = _solve_u(a, b, perm, eps)
        if u is not None:
            return u, tuple(perm), tuple(eps)
    return None


def _solve_u(a: RankOneCone, b: RankOneCone, perm, eps):
    r = a.ambient_rank
    # Pick r independent rows of a.
    idx = []
    for i in range(a.count):
        cand = idx + [i]
        if rank(IntMatrix.from_rows([a.generators[j] for j in cand], r)) == len(cand):
            idx.append(i)
        if len(idx) == r:
            break
    if len(idx) < r:
        return None
    amat = [[Fraction(x) for x in a.generators[i]] for i in idx]
    bmat = [[Fraction(eps[i] * x) for x in b.generators[perm[i]]] for i in idx]
    # Solve amat * U = bmat.
    n = r
    aug = [row + brow for row, brow in zip(amat, bmat)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if aug[i][col] != 0:
                piv = i
                break
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    u = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in u for x in row):
        return None
    umat = IntMatrix.from_rows([[int(x) for x in row] for row in u], r)
    if abs(umat.det()) != 1:
        return None
    for i in range(a.count):
        img = tuple(sum(a.generators[i][s] * umat.data[s][t] for s in range(r)) for t in range(r))
        want = tuple(eps[i] * x for x in b.generators[perm[i]])
        if img != want:
            return None
    return umat


# ----------------------------------------------------------------------
# Delaunay cells of the dicing arrangement


@dataclass(frozen=True)
class DelaunayClass:
    vertex_count: int
    count: int
    representative: tuple[tuple[int, ...], ...]


def delaunay_cells(c: RankOneCone) -> list[DelaunayClass]:
    """Translation classes of arrangement cells meeting the unit cell.

    The periodic hyperplane arrangement {l_i(x) = m} of a matroidal,
    spanning cone dices the lattice; full-dimensional cells with interior
    meeting [0,1)^r are computed by exact vertex enumeration of the slab
    regions and grouped by integral translation.
    """
    ok, _ = is_matroidal(c)
    if not ok:
        raise ConeError("NOT_MATROIDAL")
    r = c.ambient_rank
    if r > 3:
        raise ConeError("RANK_CAP")
    mat = c.matrix()
    if rank(mat) != r:
        raise ConeError("generators must span")
    gens = list(dict.fromkeys(c.generators))
    lo_hi = []
    for g in gens:
        lo = sum(min(0, x) for x in g)
        hi = sum(max(0, x) for x in g)
        lo_hi.append((lo - 1, hi))
    cells = []
    for code in itertools.product(*[range(lo, hi + 1) for lo, hi in lo_hi]):
        verts = _cell_vertices(gens, code, r)
        if verts is None:
            continue
        if not _meets_unit_cell(gens, code, verts, r):
            continue
        cells.append(tuple(sorted(verts)))
    classes: dict[tuple, list] = {}
    for verts in cells:
        base = verts[0]
        key = tuple(tuple(x - b for x, b in zip(v, base)) for v in verts)
        classes.setdefault(key, []).append(verts)
    out = [DelaunayClass(len(key), len(group), group[0])
           for key, group in classes.items()]
    out.sort(key=lambda cls: (cls.vertex_count, cls.representative))
    return out


def _cell_vertices(gens, code, r):
    """Exact vertices of {m_i <= l_i(x) <= m_i + 1}; None if not full-dim."""
    halfspaces = []
    for g, m in zip(gens, code):
        halfspaces.append((tuple(g), Fraction(m)))          # l(x) >= m
        halfspaces.append((tuple(-x for x in g), Fraction(-(m + 1))))  # l(x) <= m+1
    verts = set()
    n = len(halfspaces)
    for idx in itertools.combinations(range(n), r):
        rows = [halfspaces[i][0] for i in idx]
        rhs = [halfspaces[i][1] for i in idx]
        pt = _solve_square(rows, rhs, r)
        if pt is None:
            continue
        if all(sum(Fraction(h[0][k]) * pt[k] for k in range(r)) >= h[1] for h in halfspaces):
            verts.add(tuple(pt))
    if len(verts) < r + 1:
        return None
    vl = sorted(verts)
    base = vl[0]
    dirs = [[v[i] - base[i] for i in range(r)] for v in vl[1:]]
    got = _rat_rank(dirs)
    if got < r:
        return None
    for v in vl:
        if any(x.denominator != 1 for x in v):
            raise ConeError("non-integral Delaunay vertex; arrangement is not a dicing")
    return [tuple(int(x) for x in v) for v in vl]


def _solve_square(rows, rhs, r):
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(r):
        piv = None
        for i in range(col, r):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(r):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][r] for i in range(r)]


def _rat_rank(rows):
    a = [[Fraction(x) for x in row] for row in rows]
    rk = 0
    cols = len(a[0]) if a else 0
    for col in range(cols):
        piv = None
        for i in range(rk, len(a)):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        pv = a[rk][col]
        a[rk] = [x / pv for x in a[rk]]
        for i in range(len(a)):
            if i != rk and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rk])]
        rk += 1
    return rk


def _meets_unit_cell(gens, code, verts, r):
    """True iff the cell's interior meets [0,1)^r: the intersection with the
    closed unit cube must be full-dimensional."""
    halfspaces = []
    for g, m in zip(gens, code):
        halfspaces.append((tuple(g), Fraction(m)))
        halfspaces.append((tuple(-x for x in g), Fraction(-(m + 1))))
    for i in range(r):
        e = tuple(1 if j == i else 0 for j in range(r))
        halfspaces.append((e, Fraction(0)))
        halfspaces.append((tuple(-x for x in e), Fraction(-1)))
    pts = set()
    n = len(halfspaces)
    for idx in itertools.combinations(range(n), r):
        rows = [halfspaces[i][0] for i in idx]
        rhs = [halfspaces[i][1] for i in idx]
        pt = _solve_square(rows, rhs, r)
        if pt is None:
            continue
        if all(sum(Fraction(h[0][k]) * pt[k] for k in range(r)) >= h[1] for h in halfspaces):
            pts.add(tuple(pt))
    if len(pts) < r + 1:
        return False
    vl = sorted(pts)
    base = vl[0]
    dirs = [[v[i] - base[i] for i in range(r)] for v in vl[1:]]
    return _rat_rank(dirs) == r
