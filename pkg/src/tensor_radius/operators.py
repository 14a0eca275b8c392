"""Operator and nuclear norms between finite-dimensional normed spaces.

The nuclear norm is computed through trace duality,

    ||T||_N = sup { Tr[Q T] : ||Q||_{Y -> X} <= 1 },

which is the projective norm of ``T`` viewed as an element of ``X* (x) Y``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._exact import as_array, is_exact, to_float
from .errors import DimensionMismatch, NoConvergence
from .simplex import min_l1_combination
from .spaces import NormedSpace, euclidean_root, space_from_json
from .tensors import Tensor, alternating_ascent, dual_argmax, outer, projective_norm, _initial_atoms


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Matrix of shape ``(dim codomain, dim domain)``."""

    matrix: np.ndarray
    domain: NormedSpace
    codomain: NormedSpace

    def __post_init__(self):
        A = self.matrix
        if not isinstance(A, np.ndarray) or A.dtype == object:
            A = as_array(A)
        if A.ndim != 2 or A.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatch(
                f"matrix of shape {A.shape} for a map from dim {self.domain.dim} to dim {self.codomain.dim}"
            )
        object.__setattr__(self, "matrix", A)

    @property
    def exact(self) -> bool:
        return is_exact(self.matrix)

    @property
    def T(self) -> np.ndarray:
        return self.matrix

    def __call__(self, x):
        return self.matrix @ x

    def compose(self, inner: "LinearOperator") -> "LinearOperator":
        """``self o inner``."""
        A, B = self.matrix, inner.matrix
        if is_exact(A) != is_exact(B):
            A, B = to_float(A), to_float(B)
        return LinearOperator(A @ B, inner.domain, self.codomain)

    def scaled(self, c) -> "LinearOperator":
        return LinearOperator(self.matrix * c, self.domain, self.codomain)

    def to_json(self) -> dict:
        A = self.matrix
        data = [[str(v) for v in row] for row in A] if self.exact else A.tolist()
        return {"matrix": data, "domain": self.domain.to_json(), "codomain": self.codomain.to_json()}

    @classmethod
    def from_json(cls, obj) -> "LinearOperator":
        return cls(as_array(obj["matrix"]), space_from_json(obj["domain"]), space_from_json(obj["codomain"]))


def adjoint(T: LinearOperator) -> LinearOperator:
    return LinearOperator(T.matrix.T.copy(), T.codomain.dual(), T.domain.dual())


@dataclass(frozen=True)
class OperatorNormResult:
    """``value`` is attained at ``witness``; ``upper`` is a certified upper bound when known."""

    value: object
    witness: np.ndarray
    certified: bool
    method: str
    upper: float | None = None

    def __float__(self):
        return float(self.value)


def _scan_domain_vertices(T: LinearOperator) -> OperatorNormResult:
    X, Y = T.domain, T.codomain
    V = X.ball.vertices
    A = T.matrix
    exact = T.exact and is_exact(V) and Y.polyhedral and Y.exact
    if not exact:
        V, A = to_float(V), to_float(A)
    images = V @ A.T
    vals = Y.norm_rows(to_float(images))
    t = int(np.argmax(vals))
    value = float(vals[t])
    if exact:
        near = np.flatnonzero(vals >= vals[t] - 1e-9 * (1 + abs(vals[t])))
        exact_vals = {int(s): Y.norm(images[s]) for s in near}
        t = max(exact_vals, key=lambda s: (exact_vals[s], -s))
        value = exact_vals[t]
    return OperatorNormResult(value, V[t], True, "vertex-scan", float(value))


def _planar_bound(T: LinearOperator, rtol: float = 1e-9, max_levels: int = 60, max_live: int = 1 << 16) -> OperatorNormResult:
    """Certified operator norm for a two-dimensional domain by interval refinement.

    A unit vector ``w = a u + b v`` (``a, b >= 0``) between unit vectors ``u, v``
    satisfies ``1 >= <f, w> >= (a + b) min(<f, u>, <f, v>)`` for any ``f`` in
    ``B_{X*}``; with ``f`` norming the arc midpoint this gives the bound
    ``max(||T u||, ||T v||) / min(<f, u>, <f, v>)`` on the arc, whose excess
    is second order in the arc length for smooth norms.
    """
    X, Y = T.domain, T.codomain
    A = to_float(T.matrix)

    def units(theta):
        D = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        return D / X.norm_rows(D)[:, None]

    edges = np.linspace(0.0, np.pi, 257)
    U = units(edges)
    F = Y.norm_rows(U @ A.T)
    best_i = int(np.argmax(F))
    best, best_x = float(F[best_i]), U[best_i]
    lo, hi = edges[:-1], edges[1:]
    ulo, uhi, flo, fhi = U[:-1], U[1:], F[:-1], F[1:]
    upper = math.inf
    for _ in range(max_levels):
        _, f = dual_argmax(X, ulo + uhi)
        m = np.minimum(np.einsum("ij,ij->i", f, ulo), np.einsum("ij,ij->i", f, uhi))
        with np.errstate(divide="ignore"):
            bound = np.where(m > 0, np.maximum(flo, fhi) / m, np.inf)
        upper = float(bound.max())
        live = bound > best * (1 + rtol)
        if not np.any(live):
            break
        if np.count_nonzero(live) > max_live:
            return OperatorNormResult(best, best_x, False, "planar-refinement", max(upper, best))
        lo, hi, ulo, uhi, flo, fhi = lo[live], hi[live], ulo[live], uhi[live], flo[live], fhi[live]
        mid = (lo + hi) / 2
        um = units(mid)
        fm = Y.norm_rows(um @ A.T)
        j = int(np.argmax(fm))
        if fm[j] > best:
            best, best_x = float(fm[j]), um[j]
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        ulo, uhi = np.concatenate([ulo, um]), np.concatenate([um, uhi])
        flo, fhi = np.concatenate([flo, fm]), np.concatenate([fm, fhi])
    else:
        return OperatorNormResult(best, best_x, False, "planar-refinement", upper)
    return OperatorNormResult(best, best_x, True, "planar-refinement", max(upper, best))


def operator_norm(T: LinearOperator, starts: int = 64, seed: int = 0) -> OperatorNormResult:
    """``sup_{x in B_X} ||T x||_Y`` with a maximizing ``x``."""
    X, Y = T.domain, T.codomain
    if not np.any(to_float(T.matrix)):
        zero = 0 if T.exact else 0.0
        return OperatorNormResult(zero, np.zeros(X.dim), True, "zero", 0.0)
    if X.polyhedral:
        return _scan_domain_vertices(T)
    if Y.polyhedral:
        # ||T|| = ||T*|| with a polyhedral domain; recover x from the best functional
        res = _scan_domain_vertices(adjoint(T))
        _, x = X.support(res.witness @ T.matrix)
        return OperatorNormResult(res.value, x, True, "adjoint-vertex-scan", res.upper)
    if X.euclidean and Y.euclidean:
        RX, RY = euclidean_root(X), euclidean_root(Y)
        At = to_float(T.matrix)
        if RY is not None:
            At = RY @ At
        if RX is not None:
            At = At @ np.linalg.inv(RX)
        U, s, Vt = np.linalg.svd(At)
        x = Vt[0] if RX is None else np.linalg.solve(RX, Vt[0])
        return OperatorNormResult(float(s[0]), x, True, "svd", float(s[0]))
    if X.dim == 2:
        return _planar_bound(T)
    if Y.dim == 2:
        res = _planar_bound(adjoint(T))
        _, x = X.support(res.witness @ to_float(T.matrix))
        return OperatorNormResult(res.value, x, res.certified, "adjoint-planar-refinement", res.upper)
    value, (f, x) = alternating_ascent(to_float(T.matrix), (Y, X.dual()), starts=starts, seed=seed)
    return OperatorNormResult(value, x, False, "alternating-ascent", None)


# ---------------------------------------------------------------------------
# Nuclear norm


@dataclass(frozen=True)
class NuclearResult:
    """Nuclear norm enclosure with a trace-duality witness ``Q`` (``||Q||_{Y->X} <= 1``).

    ``decomposition`` lists ``(w, y, f)`` with ``T = sum w y f^T``, ``||y||_Y <= 1``
    and ``||f||_{X*} <= 1``.
    """

    value: object
    lower: object
    Q: np.ndarray
    certified: bool
    method: str
    decomposition: tuple = ()

    @property
    def upper(self):
        return self.value

    def __float__(self):
        return float(self.value)


def _decomposition_from_projective(pr) -> tuple:
    if pr.decomposition is None:
        return ()
    return tuple((w, a[1], a[0]) for w, a in zip(pr.decomposition.weights, pr.decomposition.atoms))


def _residual_nuclear_bound(R: np.ndarray, X: NormedSpace, Y: NormedSpace) -> float:
    """Crude upper bound on ``||R||_N`` by expanding in coordinates."""
    ex = X.dual().norm_rows(np.eye(X.dim))
    ey = Y.norm_rows(np.eye(Y.dim))
    return float((np.abs(R) * np.outer(ey, ex)).sum())


def _nuclear_colgen(T: LinearOperator, tol: float, max_iter: int, starts: int, seed: int) -> NuclearResult:
    X, Y = T.domain, T.codomain
    A = to_float(T.matrix)
    target = A.T.ravel()
    Fs, Vs = _initial_atoms(X.dual()), _initial_atoms(Y)
    atoms = [(f, v) for f in Fs for v in Vs]
    last = None
    for it in range(max_iter):
        M = np.array([np.outer(f, v).ravel() for f, v in atoms])
        sol = min_l1_combination(M, target, exact=False)
        Q = np.asarray(sol.y).reshape(X.dim, Y.dim)
        oracle = operator_norm(LinearOperator(Q, Y, X), starts=starts, seed=seed + it)
        q_upper = oracle.upper if oracle.upper is not None else float(oracle.value)
        trace = float(np.sum(Q * A.T))
        lower = trace / max(q_upper, 1.0) if q_upper > 0 else 0.0
        keep = [i for i in range(len(atoms)) if abs(sol.x[i]) > 1e-14]
        dec = tuple((float(sol.x[i]), atoms[i][1], atoms[i][0]) for i in keep)
        recon = sum((w * np.outer(y, f) for w, y, f in dec), np.zeros_like(A))
        cost = sum(abs(w) * Y.norm(y) * X.dual().norm(f) for w, y, f in dec)
        upper = cost + _residual_nuclear_bound(A - recon, X, Y)
        certified = oracle.upper is not None and oracle.certified
        last = NuclearResult(upper, lower, Q / max(q_upper, 1.0), certified, "column-generation", dec)
        if upper - lower <= tol * max(1.0, upper):
            return last
        x = np.asarray(oracle.witness, dtype=float)
        _, f = X.dual().support(Q @ x)
        atoms.append((np.asarray(f, dtype=float), x / max(Y.norm(x), 1e-300)))
    raise NoConvergence("nuclear norm column generation hit the iteration cap", partial=last)


def nuclear_norm(
    T: LinearOperator, tol: float = 1e-7, max_iter: int = 500, starts: int = 64, seed: int = 0
) -> NuclearResult:
    """Nuclear norm of ``T: X -> Y`` with a trace-duality witness."""
    X, Y = T.domain, T.codomain
    if not np.any(to_float(T.matrix)):
        zero = 0 if T.exact else 0.0
        return NuclearResult(zero, zero, np.zeros((X.dim, Y.dim)), True, "zero")
    both_poly = X.polyhedral and Y.polyhedral
    both_euc = X.euclidean and Y.euclidean
    if both_poly or both_euc:
        z = Tensor((X.dual(), Y), T.matrix.T.copy())
        pr = projective_norm(z)
        return NuclearResult(pr.value, pr.lower, pr.dual, pr.certified, pr.method, _decomposition_from_projective(pr))
    return _nuclear_colgen(T, tol, max_iter, starts, seed)
