"""Exact rational linear programming (two-phase simplex, Bland's rule).

Small dense solver over ``fractions.Fraction``; Bland's rule guarantees
termination, which matters because infeasibility results are used as
negative certificates.  Problem sizes here are tiny (tens of variables),
so no effort is spent on sparsity.
"""

from __future__ import annotations

from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _pivot(tab, basis, r, c):
    pv = tab[r][c]
    tab[r] = [x / pv for x in tab[r]]
    for i in range(len(tab)):
        if i != r and tab[i][c] != 0:
            f = tab[i][c]
            tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
    basis[r] = c


def _simplex(tab, basis, m, n):
    """Maximize; the last row holds reduced costs.

    Dantzig's rule (largest reduced cost) for speed, switching permanently
    to Bland's anti-cycling rule after a pivot budget so termination is
    still guaranteed.
    """
    pivots = 0
    bland_after = 40 * (m + 1)
    while True:
        enter = -1
        if pivots < bland_after:
            best_cost = 0
            for j in range(n):
                if tab[m][j] > best_cost:
                    best_cost = tab[m][j]
                    enter = j
        else:
            for j in range(n):
                if tab[m][j] > 0:
                    enter = j
                    break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][n] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(tab, basis, leave, enter)
        pivots += 1


def _install_objective(tab, basis, cvec, m, total):
    objrow = list(cvec) + [Fraction(0)]
    for i in range(m):
        cb = cvec[basis[i]]
        if cb != 0:
            objrow = [x - cb * y for x, y in zip(objrow, tab[i])]
    tab.append(objrow)


def solve(n_vars, eqs, ineqs, objective=None):
    """Solve an LP in free variables x (length n_vars), exactly.

    eqs:    list of (coeffs, rhs) meaning coeffs . x == rhs
    ineqs:  list of (coeffs, rhs) meaning coeffs . x >= rhs
    objective: coefficient vector to maximize (None = feasibility only)

    Returns (status, x); x is a tuple of Fractions when status is
    ``optimal``.  The caller must keep the objective bounded.
    """
    rows = [(coeffs, rhs, None) for coeffs, rhs in eqs]
    rows += [(coeffs, rhs, k) for k, (coeffs, rhs) in enumerate(ineqs)]
    n_pos = 2 * n_vars
    n_surplus = len(ineqs)
    n = n_pos + n_surplus
    m = len(rows)
    n_art = m
    total = n + n_art

    tab = []
    for idx, (coeffs, rhs, surplus) in enumerate(rows):
        full = []
        for cval in coeffs:
            c = Fraction(cval)
            full.extend((c, -c))
        full += [Fraction(0)] * n_surplus
        if surplus is not None:
            full[n_pos + surplus] = Fraction(-1)
        rhs = Fraction(rhs)
        if rhs < 0:
            full = [-x for x in full]
            rhs = -rhs
        art = [Fraction(1 if k == idx else 0) for k in range(n_art)]
        tab.append(full + art + [rhs])
    basis = [n + i for i in range(m)]

    # Phase 1: maximize minus the sum of artificials.
    cvec = [Fraction(0)] * n + [Fraction(-1)] * n_art
    _install_objective(tab, basis, cvec, m, total)
    _simplex(tab, basis, m, total)
    if tab[m][total] != 0:
        return INFEASIBLE, None
    tab.pop()

    # Drive leftover artificials out of the basis; drop redundant rows.
    i = 0
    while i < m:
        if basis[i] >= n:
            piv = -1
            for j in range(n):
                if tab[i][j] != 0:
                    piv = j
                    break
            if piv >= 0:
                _pivot(tab, basis, i, piv)
                i += 1
            else:
                tab.pop(i)
                basis.pop(i)
                m -= 1
        else:
            i += 1
    for row in tab:
        for k in range(n, total):
            row[k] = Fraction(0)

    if objective is not None:
        cvec = []
        for x in objective:
            x = Fraction(x)
            cvec.extend((x, -x))
        cvec += [Fraction(0)] * (n_surplus + n_art)
        _install_objective(tab, basis, cvec, m, total)
        status = _simplex(tab, basis, m, total)
        if status == UNBOUNDED:
            return UNBOUNDED, None
        tab.pop()

    x = [Fraction(0)] * n_pos
    for i in range(m):
        if basis[i] < n_pos:
            x[basis[i]] = tab[i][total]
    sol = tuple(x[2 * i] - x[2 * i + 1] for i in range(n_vars))
    return OPTIMAL, sol
