"""Linear programming: an exact rational simplex and a float (HiGHS) fallback.

The exact solver is a dense two-phase tableau method over ``Fraction``. It uses
Dantzig's rule and switches to Bland's rule after a run of degenerate pivots,
which rules out cycling. It is meant for the small LPs that show up at desk
scale (tens to a few hundred rows).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .errors import InfeasibleBody, UnboundedBody

_DEGENERATE_SWITCH = 20


@dataclass(frozen=True)
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: object = None
    x: np.ndarray | None = None
    y: np.ndarray | None = None  # equality duals, A^T y <= c at optimum


def _pivot(T, basis, r, j):
    prow = T[r]
    inv = 1 / prow[j]
    T[r] = prow = [v * inv for v in prow]
    for i, row in enumerate(T):
        if i != r:
            f = row[j]
            if f != 0:
                T[i] = [a - f * b for a, b in zip(row, prow)]
    basis[r] = j


def _run(T, basis, cost, allowed):
    """Minimize ``cost`` over the current tableau. Returns "optimal"/"unbounded"."""
    rhs = len(T[0]) - 1
    degenerate = 0
    allowed = list(allowed)
    while True:
        cb = [cost[b] for b in basis]
        best_j, best_rc = None, Fraction(0)
        bland = degenerate >= _DEGENERATE_SWITCH
        for j in allowed:
            rc = cost[j] - sum(c * row[j] for c, row in zip(cb, T) if c != 0 and row[j] != 0)
            if rc < 0:
                if bland:
                    best_j = j
                    break
                if best_j is None or rc < best_rc:
                    best_j, best_rc = j, rc
        if best_j is None:
            return "optimal"
        j = best_j
        r_best, ratio_best = None, None
        for i, row in enumerate(T):
            a = row[j]
            if a > 0:
                ratio = row[rhs] / a
                if (
                    r_best is None
                    or ratio < ratio_best
                    or (ratio == ratio_best and basis[i] < basis[r_best])
                ):
                    r_best, ratio_best = i, ratio
        if r_best is None:
            return "unbounded"
        degenerate = degenerate + 1 if ratio_best == 0 else 0
        _pivot(T, basis, r_best, j)


def solve_exact(c, A, b) -> LPSolution:
    """Minimize ``c @ x`` subject to ``A @ x == b``, ``x >= 0`` over the rationals."""
    from ._exact import exact_solve

    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    m, n = len(A), len(c)
    sign = [1 if bi >= 0 else -1 for bi in b]
    T = []
    for i in range(m):
        s = sign[i]
        row = [s * a for a in A[i]] + [Fraction(int(k == i)) for k in range(m)] + [s * b[i]]
        T.append(row)
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    _run(T, basis, phase1, range(n + m))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return LPSolution("infeasible")

    keep = list(range(m))
    for r in range(m):
        if basis[r] >= n:
            j = next((j for j in range(n) if T[r][j] != 0), None)
            if j is None:
                keep.remove(r)
            else:
                _pivot(T, basis, r, j)
    T = [T[r] for r in keep]
    basis = [basis[r] for r in keep]

    cost = c + [Fraction(0)] * m
    status = _run(T, basis, cost, range(n))
    if status == "unbounded":
        return LPSolution("unbounded")

    x = np.array([Fraction(0)] * n, dtype=object)
    for r, bcol in enumerate(basis):
        x[bcol] = T[r][-1]
    value = sum(ci * xi for ci, xi in zip(c, x))

    y = np.array([Fraction(0)] * m, dtype=object)
    if keep:
        B = [[sign[r] * A[r][bcol] for bcol in basis] for r in keep]
        Bt = [[B[i][j] for i in range(len(keep))] for j in range(len(basis))]
        yk = exact_solve(Bt, [c[bcol] for bcol in basis])
        for idx, r in enumerate(keep):
            y[r] = sign[r] * yk[idx]
    return LPSolution("optimal", value, x, y)


def solve_float(c, A, b, tol: float = 1e-10) -> LPSolution:
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    res = linprog(
        c,
        A_eq=A,
        b_eq=b,
        bounds=(0, None),
        method="highs",
        options={"primal_feasibility_tolerance": tol, "dual_feasibility_tolerance": tol},
    )
    if res.status == 2:
        return LPSolution("infeasible")
    if res.status == 3:
        return LPSolution("unbounded")
    if res.status != 0:
        raise RuntimeError(f"LP solver failed: {res.message}")
    return LPSolution("optimal", float(res.fun), res.x, np.asarray(res.eqlin.marginals))


def solve(c, A, b, exact: bool) -> LPSolution:
    return solve_exact(c, A, b) if exact else solve_float(c, A, b)


def min_l1_combination(atoms, target, exact: bool) -> LPSolution:
    """Minimize ``sum |w_j|`` subject to ``sum_j w_j atoms[j] == target``.

    ``atoms`` has one atom per row. The returned ``x`` is the signed weight
    vector ``w`` and ``y`` is a dual certificate with ``|<y, atom_j>| <= 1``.
    """
    atoms = np.asarray(atoms, dtype=object if exact else float)
    target = np.asarray(target, dtype=object if exact else float)
    N = atoms.shape[0]
    A = np.concatenate([atoms.T, -atoms.T], axis=1)
    one = Fraction(1) if exact else 1.0
    c = [one] * (2 * N)
    sol = solve(c, A.tolist() if exact else A, target.tolist() if exact else target, exact)
    if sol.status != "optimal":
        if sol.status == "infeasible":
            raise InfeasibleBody("target is not in the span of the atoms")
        raise UnboundedBody("l1 combination LP unbounded")
    w = sol.x[:N] - sol.x[N:]
    return LPSolution("optimal", sol.value, w, sol.y)


def max_over_symmetric_hrep(c, facets, exact: bool) -> LPSolution:
    """Maximize ``<c, x>`` over ``{x : |<a_i, x>| <= 1}``.

    ``x`` of the result is the maximizer; ``y`` holds multipliers ``u`` with
    ``c = sum_i u_i a_i`` and ``sum |u_i| = value``.
    """
    F = np.asarray(facets, dtype=object if exact else float)
    m, n = F.shape
    c = np.asarray(c, dtype=object if exact else float)
    if exact:
        one, zero = Fraction(1), Fraction(0)
        # columns: x+ (n), x- (n), s (m), t (m)
        A = []
        for i in range(m):
            row = list(F[i]) + [-v for v in F[i]] + [one if k == i else zero for k in range(m)] + [zero] * m
            A.append(row)
        for i in range(m):
            row = [-v for v in F[i]] + list(F[i]) + [zero] * m + [one if k == i else zero for k in range(m)]
            A.append(row)
        cost = [-v for v in c] + list(c) + [zero] * (2 * m)
        sol = solve_exact(cost, A, [one] * (2 * m))
        if sol.status == "unbounded":
            raise UnboundedBody("polytope is unbounded in the requested direction")
        if sol.status == "infeasible":
            raise InfeasibleBody("empty polytope")
        x = sol.x[:n] - sol.x[n : 2 * n]
        u = -(sol.y[:m] - sol.y[m:])
        return LPSolution("optimal", -sol.value, x, u)
    res = linprog(
        -np.asarray(c, dtype=float),
        A_ub=np.vstack([F, -F]),
        b_ub=np.ones(2 * m),
        bounds=(None, None),
        method="highs",
    )
    if res.status == 3:
        raise UnboundedBody("polytope is unbounded in the requested direction")
    if res.status != 0:
        raise InfeasibleBody(res.message)
    marg = -np.asarray(res.ineqlin.marginals)
    u = marg[:m] - marg[m:]
    return LPSolution("optimal", float(-res.fun), res.x, u)
