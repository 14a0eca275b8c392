"""Finite-dimensional real normed spaces.

Every space lives on ``R^n`` with the standard pairing ``<x, y>``; the dual
space carries the dual norm with respect to that pairing. Schatten spaces
live on flattened ``n x n`` matrices (row-major), paired by ``tr(A^T B)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._exact import as_array, is_exact, parse_scalar, to_float
from .convex import HPolytope, VPolytope, _sign_matrix, enumerate_vertices, polar
from .errors import DimensionMismatch, NotPolyhedral, NotSupported


def _conjugate(p):
    if p == 1:
        return math.inf
    if p == math.inf:
        return Fraction(1)
    if isinstance(p, Fraction):
        return p / (p - 1)
    return p / (p - 1.0)


def _check_p(p):
    p = parse_scalar(p) if not isinstance(p, (Fraction, float)) else p
    if not (p == math.inf or p >= 1):
        raise ValueError(f"p must lie in [1, inf], got {p}")
    if isinstance(p, float) and p != math.inf and float(p).is_integer():
        p = Fraction(int(p))
    return p


def _p_label(p) -> str:
    return "inf" if p == math.inf else str(p)


class NormedSpace:
    """Base class. Subclasses are immutable."""

    label: str = ""
    polyhedral: bool = False
    euclidean: bool = False

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def norm(self, x):
        raise NotImplementedError

    def norm_rows(self, X: np.ndarray) -> np.ndarray:
        """Float norms of the rows of ``X``."""
        return np.array([float(self.norm(x)) for x in X])

    def dual(self) -> "NormedSpace":
        raise NotImplementedError

    def support(self, c):
        """Return ``(h(c), x)`` with ``x`` in the unit ball maximizing ``<c, x>``."""
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False

    def to_json(self) -> dict:
        raise NotImplementedError

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x) if isinstance(x, np.ndarray) else as_array(x)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"vector of shape {x.shape} in a space of dim {self.dim}")
        return x

    # polyhedral spaces override these
    @property
    def ball(self) -> VPolytope:
        raise NotPolyhedral(f"{self} has no polytope unit ball")

    @property
    def dual_ball(self) -> VPolytope:
        raise NotPolyhedral(f"{self} has no polytope dual ball")


def norming_functional(X: NormedSpace, v):
    """``(||v||_X, f)`` with ``f`` in the dual unit ball and ``<f, v> = ||v||_X``."""
    return X.dual().support(v)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Lp(NormedSpace):
    n: int
    p: object = 2
    label: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(self, "p", _check_p(self.p))
        if not self.label:
            object.__setattr__(self, "label", f"l_{_p_label(self.p)}^{self.n}")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def polyhedral(self) -> bool:
        return self.p in (1, math.inf)

    @property
    def euclidean(self) -> bool:
        return self.p == 2 or self.n == 1

    @property
    def exact(self) -> bool:
        return self.polyhedral

    def norm(self, x):
        x = self._check(x)
        if self.p == 1:
            return sum(abs(v) for v in x) if is_exact(x) else float(np.abs(x).sum())
        if self.p == math.inf:
            return max(abs(v) for v in x) if is_exact(x) else float(np.abs(x).max())
        return float(np.linalg.norm(to_float(x), ord=float(self.p)))

    def norm_rows(self, X):
        X = to_float(np.asarray(X))
        if self.p == math.inf:
            return np.abs(X).max(axis=-1)
        return np.linalg.norm(X, ord=float(self.p), axis=-1)

    def dual(self) -> "Lp":
        return Lp(self.n, _conjugate(self.p))

    def support(self, c):
        c = self._check(c)
        q = _conjugate(self.p)
        if self.p == math.inf:
            x = np.array([Fraction(1) if v >= 0 else Fraction(-1) for v in c], dtype=object) if is_exact(c) else np.where(to_float(c) >= 0, 1.0, -1.0)
            return Lp(self.n, 1).norm(c), x
        if self.p == 1:
            cf = to_float(c)
            i = int(np.argmax(np.abs(cf)))
            one = Fraction(1) if is_exact(c) else 1.0
            x = np.array([one * 0] * self.n, dtype=object if is_exact(c) else float)
            x[i] = one if c[i] >= 0 else -one
            return abs(c[i]), x
        cf = to_float(c)
        val = float(np.linalg.norm(cf, ord=float(q)))
        if val == 0:
            return 0.0, np.zeros(self.n)
        x = np.sign(cf) * (np.abs(cf) / val) ** (float(q) - 1.0)
        return val, x

    @cached_property
    def ball(self) -> VPolytope:
        if self.p == 1:
            return VPolytope(_identity(self.n), prune=False)
        if self.p == math.inf:
            return VPolytope(_sign_matrix(self.n, True), prune=False)
        raise NotPolyhedral(f"{self.label} is not polyhedral")

    @cached_property
    def dual_ball(self) -> VPolytope:
        return self.dual().ball

    def to_json(self) -> dict:
        return {"type": "lp", "n": self.n, "p": _p_label(self.p) if self.p == math.inf else _num_json(self.p)}

    def __repr__(self):
        return f"Lp(n={self.n}, p={_p_label(self.p)})"


def _identity(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = Fraction(int(i == j))
    return out


def _num_json(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def _matrix_json(A):
    A = np.asarray(A)
    return [[_num_json(v) if is_exact(A) else float(v) for v in row] for row in A]


class _Polyhedral(NormedSpace):
    polyhedral = True

    @property
    def exact(self) -> bool:
        return self.ball.exact

    def norm(self, x):
        x = self._check(x)
        F = self.dual_ball.vertices
        if not is_exact(x):
            F = to_float(F)
        return np.max(np.abs(F @ x)) if len(F) else 0

    def norm_rows(self, X):
        F = to_float(self.dual_ball.vertices)
        return np.abs(to_float(np.asarray(X)) @ F.T).max(axis=-1)

    def support(self, c):
        c = self._check(c)
        V = self.ball.vertices
        if not is_exact(c):
            V = to_float(V)
        vals = V @ c
        fv = to_float(vals)
        i = int(np.argmax(np.abs(fv)))
        if is_exact(vals):
            cands = np.flatnonzero(np.abs(fv) >= abs(fv[i]) - 1e-9 * (1 + abs(fv[i])))
            i = max(cands, key=lambda t: abs(vals[t]))
        x = V[i] if vals[i] >= 0 else -V[i]
        return abs(vals[i]), x


@dataclass(frozen=True, eq=False)
class PolyV(_Polyhedral):
    """Unit ball ``conv{+-v_j}``."""

    polytope: VPolytope
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.polytope, VPolytope):
            object.__setattr__(self, "polytope", VPolytope(self.polytope))
        if not self.label:
            object.__setattr__(self, "label", f"polyV^{self.polytope.dim}")

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def ball(self) -> VPolytope:
        return self.polytope

    @cached_property
    def dual_ball(self) -> VPolytope:
        return enumerate_vertices(polar(self.polytope))

    def dual(self) -> "PolyH":
        return PolyH(polar(self.polytope), label=f"({self.label})*")

    def to_json(self) -> dict:
        return {"type": "poly_v", "vertices": _matrix_json(self.polytope.vertices)}

    def __repr__(self):
        return f"PolyV({self.label}, vertices={len(self.polytope.vertices)})"


@dataclass(frozen=True, eq=False)
class PolyH(_Polyhedral):
    """Unit ball ``{x : |<a_i, x>| <= 1}``."""

    polytope: HPolytope
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.polytope, HPolytope):
            object.__setattr__(self, "polytope", HPolytope(self.polytope))
        if not self.label:
            object.__setattr__(self, "label", f"polyH^{self.polytope.dim}")

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @cached_property
    def ball(self) -> VPolytope:
        return enumerate_vertices(self.polytope)

    @cached_property
    def dual_ball(self) -> VPolytope:
        return polar(self.polytope)

    def dual(self) -> PolyV:
        return PolyV(polar(self.polytope), label=f"({self.label})*")

    def to_json(self) -> dict:
        return {"type": "poly_h", "facets": _matrix_json(self.polytope.facets)}

    def __repr__(self):
        return f"PolyH({self.label}, facets={len(self.polytope.facets)})"


@dataclass(frozen=True, eq=False)
class EllipsoidBall(NormedSpace):
    """Unit ball ``{x : x^T M x <= 1}``."""

    M: np.ndarray
    label: str = ""
    euclidean = True

    def __post_init__(self):
        M = np.asarray(to_float(as_array(self.M)) if not isinstance(self.M, np.ndarray) else to_float(self.M), dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("M must be square")
        if not np.allclose(M, M.T, atol=1e-12 * max(1.0, np.abs(M).max())):
            raise ValueError("M must be symmetric")
        M = (M + M.T) / 2
        if np.linalg.eigvalsh(M).min() <= 0:
            raise ValueError("M must be positive definite")
        object.__setattr__(self, "M", M)
        if not self.label:
            object.__setattr__(self, "label", f"ellipsoid^{M.shape[0]}")

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    @cached_property
    def _root(self) -> np.ndarray:
        # R with R^T R = M, so ||x|| = ||R x||_2
        return np.linalg.cholesky(self.M).T

    def norm(self, x):
        x = to_float(self._check(x))
        return float(np.sqrt(max(x @ self.M @ x, 0.0)))

    def norm_rows(self, X):
        X = to_float(np.asarray(X))
        return np.sqrt(np.maximum(np.einsum("...i,ij,...j->...", X, self.M, X), 0.0))

    def dual(self) -> "EllipsoidBall":
        return EllipsoidBall(np.linalg.inv(self.M), label=f"({self.label})*")

    def support(self, c):
        c = to_float(self._check(c))
        w = np.linalg.solve(self.M, c)
        val = float(np.sqrt(max(c @ w, 0.0)))
        return val, (w / val if val > 0 else np.zeros_like(c))

    def to_json(self) -> dict:
        return {"type": "ellipsoid", "M": self.M.tolist()}

    def __repr__(self):
        return f"EllipsoidBall({self.label})"


@dataclass(frozen=True, eq=False)
class Schatten(NormedSpace):
    """``n x n`` real matrices with the Schatten ``p``-norm, flattened row-major."""

    n: int
    p: object = 2
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))
        if not self.label:
            object.__setattr__(self, "label", f"S_{_p_label(self.p)}^{self.n}")

    @property
    def dim(self) -> int:
        return self.n * self.n

    @property
    def euclidean(self) -> bool:
        return self.p == 2

    def _sv(self, x):
        return np.linalg.svd(to_float(x).reshape(self.n, self.n), compute_uv=False)

    def norm(self, x):
        s = self._sv(self._check(x))
        return float(np.linalg.norm(s, ord=float(self.p)))

    def dual(self) -> "Schatten":
        return Schatten(self.n, _conjugate(self.p))

    def support(self, c):
        C = to_float(self._check(c)).reshape(self.n, self.n)
        U, s, Vt = np.linalg.svd(C)
        val, w = Lp(self.n, self.p).support(s)
        X = U @ np.diag(to_float(np.asarray(w))) @ Vt
        return float(val), X.ravel()

    def to_json(self) -> dict:
        return {"type": "schatten", "n": self.n, "p": _p_label(self.p) if self.p == math.inf else _num_json(self.p)}

    def __repr__(self):
        return f"Schatten(n={self.n}, p={_p_label(self.p)})"


# ---------------------------------------------------------------------------
# Module-level operations


def norm_eval(X: NormedSpace, x):
    return X.norm(x)


def dual(X: NormedSpace) -> NormedSpace:
    return X.dual()


def extreme_points(X: NormedSpace) -> VPolytope:
    """Extreme points of ``B_X`` for polyhedral ``X`` (raises ``NotPolyhedral`` otherwise)."""
    if not X.polyhedral:
        raise NotPolyhedral(f"{X} is not polyhedral")
    return X.ball


def facet_normals(X: NormedSpace) -> np.ndarray:
    """Vertices of the dual ball, i.e. the facet normals of ``B_X``."""
    return X.dual_ball.vertices


def parallelotope_basis(X: NormedSpace):
    """``P`` with ``B_X = P [-1, 1]^n`` if the unit ball is a parallelotope, else ``None``."""
    if not X.polyhedral:
        return None
    F = X.dual_ball.vertices
    if len(F) != X.dim:
        return None
    from ._exact import exact_inv

    return exact_inv(F) if is_exact(F) else np.linalg.inv(to_float(F))


def crosspolytope_basis(X: NormedSpace):
    """``Q`` with ``B_X = Q B_{l_1^n}`` (columns = vertices) if such exists, else ``None``."""
    if not X.polyhedral:
        return None
    V = X.ball.vertices
    if len(V) != X.dim:
        return None
    return V.T.copy()


def euclidean_root(X: NormedSpace):
    """``R`` with ``||x||_X = |R x|_2`` for Euclidean ``X`` (``None`` for the standard norm)."""
    if isinstance(X, (Lp, Schatten)) and (X.p == 2 or X.dim == 1):
        return None
    if isinstance(X, EllipsoidBall):
        return X._root
    raise NotSupported(f"{X!r} is not Euclidean")


def space_from_json(obj) -> NormedSpace:
    kind = obj.get("type")
    label = obj.get("label", "")
    if kind == "lp":
        return Lp(int(obj["n"]), parse_scalar(obj.get("p", 2)), label=label)
    if kind == "poly_v":
        return PolyV(VPolytope(as_array(obj["vertices"])), label=label)
    if kind == "poly_h":
        return PolyH(HPolytope(as_array(obj["facets"])), label=label)
    if kind == "ellipsoid":
        return EllipsoidBall(to_float(as_array(obj["M"])), label=label)
    if kind == "schatten":
        return Schatten(int(obj["n"]), parse_scalar(obj.get("p", 2)), label=label)
    raise ValueError(f"unknown space type {kind!r}")


def require_tensorable(X: NormedSpace) -> None:
    if isinstance(X, Schatten):
        raise NotSupported("tensor norms over Schatten spaces are not supported")
