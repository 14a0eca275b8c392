"""Independent reference computations for the test suite.

Everything here goes through scipy (HiGHS, qhull) or brute force in floats,
never through the package's own solvers.
"""

from __future__ import annotations

import itertools
import math
from functools import reduce

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection


def sym_hrep_vertices(F: np.ndarray) -> np.ndarray:
    """Vertices of ``{x : |F x| <= 1}`` via qhull's halfspace intersection."""
    F = np.asarray(F, dtype=float)
    n = F.shape[1]
    A = np.concatenate([F, -F])
    halfspaces = np.concatenate([A, -np.ones((len(A), 1))], axis=1)
    hs = HalfspaceIntersection(halfspaces, np.zeros(n))
    pts = hs.intersections
    # qhull repeats degenerate vertices; deduplicate
    out = []
    for p in pts:
        if not any(np.allclose(p, q, atol=1e-9) for q in out):
            out.append(p)
    return np.array(out)


def hull_facets(V: np.ndarray) -> np.ndarray:
    """Facet normals ``a`` with ``<a, x> <= 1`` for ``conv(+-V)`` via qhull."""
    V = np.asarray(V, dtype=float)
    P = np.concatenate([V, -V])
    hull = ConvexHull(P)
    eq = hull.equations  # a.x + b <= 0 with b < 0
    normals = eq[:, :-1] / -eq[:, -1:]
    out = []
    for a in normals:
        if not any(np.allclose(a, b, atol=1e-9) or np.allclose(a, -b, atol=1e-9) for b in out):
            out.append(a)
    return np.array(out)


def lp_max_hrep(c, F) -> float:
    """``max <c, x>`` over ``|F x| <= 1`` by HiGHS."""
    F = np.asarray(F, dtype=float)
    res = linprog(-np.asarray(c, dtype=float), A_ub=np.concatenate([F, -F]), b_ub=np.ones(2 * len(F)), bounds=(None, None), method="highs")
    assert res.status == 0
    return -res.fun


def gauge_vrep(x, V) -> float:
    """Minkowski gauge of ``conv(+-V)`` at ``x``: ``min sum |w|`` with ``V^T w = x``."""
    V = np.asarray(V, dtype=float)
    m = len(V)
    A = np.concatenate([V.T, -V.T], axis=1)
    res = linprog(np.ones(2 * m), A_eq=A, b_eq=np.asarray(x, dtype=float), bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def gauge_bisection(x, contains, hi: float = 1e6, iters: int = 200) -> float:
    """Gauge of a convex body from a membership test, by bisection on the scale."""
    lo, up = 0.0, hi
    for _ in range(iters):
        mid = (lo + up) / 2
        if contains(np.asarray(x) / mid):
            up = mid
        else:
            lo = mid
    return up


def lp_norm(x, p) -> float:
    x = np.abs(np.asarray(x, dtype=float))
    if p == math.inf:
        return float(x.max())
    return float((x**p).sum() ** (1.0 / p))


def sign_vectors(n: int) -> np.ndarray:
    return np.array(list(itertools.product([-1.0, 1.0], repeat=n)))


def kron_power(A, k: int) -> np.ndarray:
    return reduce(np.kron, [np.asarray(A, dtype=float)] * k)


def tau_inf_to_one_brute(A, k: int) -> float:
    """``tau_k(A: l_inf^n -> l_1^m)^k`` as ``max <alpha, A^{(x)k} beta>`` over sign vectors."""
    Ak = kron_power(A, k)
    m, n = Ak.shape
    best = 0.0
    for beta in sign_vectors(n):
        best = max(best, float(np.abs(Ak @ beta).sum()))
    return best


def injective_l1_ball_vertices(k: int, n: int = 2) -> np.ndarray:
    """Vertices of the unit ball of ``eps_k(l_1^n)``; facets are products of sign vectors."""
    S = sign_vectors(n)
    F = np.array([reduce(np.kron, combo) for combo in itertools.product(S, repeat=k)])
    return sym_hrep_vertices(F)


def tau2_l1_brute(A) -> float:
    """``tau_2(A: l_1^2 -> l_1^2)^2`` by vertex pairs of ``eps_2(l_1^2)`` and the cube ``eps_2(l_inf^2)``."""
    Vz = injective_l1_ball_vertices(2)
    Vpsi = sign_vectors(4)
    return float(np.abs(Vpsi @ kron_power(A, 2) @ Vz.T).max())


def injective_l2_grid(C: np.ndarray, N: int = 4000) -> float:
    """``max |C(u, v, ...)|`` over a grid of unit vectors in the plane (order <= 3)."""
    t = np.linspace(0, np.pi, N, endpoint=False)
    U = np.stack([np.cos(t), np.sin(t)], axis=1)
    if C.ndim == 2:
        return float(np.abs(U @ C @ U.T).max())
    W = np.einsum("ia,abc->ibc", U, C)
    best = 0.0
    for i in range(0, N, 200):
        block = np.einsum("ibc,jb->ijc", W[i : i + 200], U)
        best = max(best, float(np.linalg.norm(block, axis=2).max()))
    return best


def projective_lp(C: np.ndarray, vertex_sets) -> float:
    """Projective norm over polyhedral factors: l1 minimization over all vertex products."""
    atoms = [reduce(np.multiply.outer, combo).ravel() for combo in itertools.product(*vertex_sets)]
    M = np.array(atoms, dtype=float).T
    m = M.shape[1]
    res = linprog(np.ones(2 * m), A_eq=np.concatenate([M, -M], axis=1), b_eq=np.asarray(C, dtype=float).ravel(), bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def nuclear_planar_discretized(A, norm_y, dual_norm_x, N: int = 360) -> float:
    """Upper bound on ``||A||_N`` for 2x2 ``A`` using grid atoms on both unit spheres.

    Converges to the nuclear norm from above as ``N`` grows.
    """
    t = np.linspace(0, np.pi, N, endpoint=False)
    D = np.stack([np.cos(t), np.sin(t)], axis=1)
    Ys = D / np.array([norm_y(d) for d in D])[:, None]
    Fs = D / np.array([dual_norm_x(d) for d in D])[:, None]
    atoms = np.einsum("ia,jb->ijab", Ys, Fs).reshape(-1, 4).T
    m = atoms.shape[1]
    res = linprog(np.ones(2 * m), A_eq=np.concatenate([atoms, -atoms], axis=1), b_eq=np.asarray(A, dtype=float).ravel(), bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def mvee_khachiyan(P: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Minimum-volume centred ellipsoid ``{x : x^T M x <= 1}`` through Khachiyan's iteration."""
    P = np.asarray(P, dtype=float)
    m, n = P.shape
    u = np.full(m, 1.0 / m)
    for _ in range(100000):
        X = P.T @ (u[:, None] * P)
        g = np.einsum("ij,jk,ik->i", P, np.linalg.inv(X), P)
        j = int(np.argmax(g))
        step = (g[j] - n) / (n * (g[j] - 1))
        if step < tol:
            break
        u *= 1 - step
        u[j] += step
    M = np.linalg.inv(P.T @ (u[:, None] * P)) / n
    # scale down so that every point is inside
    return M / np.einsum("ij,jk,ik->i", P, M, P).max()
