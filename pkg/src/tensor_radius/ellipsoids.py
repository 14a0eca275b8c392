"""John and Loewner ellipsoids of symmetric unit balls.

For a polyhedral ball the Loewner ellipsoid is the minimum-volume
origin-centred ellipsoid through the vertices ``+-v_j``; it is computed from
the dual problem

    max log det(sum_j u_j v_j v_j^T)   s.t.  u >= 0, sum u = 1

by Frank-Wolfe with away steps. The John ellipsoid of ``X`` is the polar of
the Loewner ellipsoid of ``X*``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import nnls

from ._exact import Surd, surd_power, to_float
from .caps import get_caps
from .errors import InfeasibleDecomposition, NoConvergence, NotSupported, ToleranceAmbiguous
from .spaces import EllipsoidBall, Lp, NormedSpace, Schatten

MVEE_TOL = 1e-10
CONTACT_TOL = 1e-7
PROPORTIONAL_TOL = 1e-7
DECOMPOSITION_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Origin-centred ellipsoid ``{x : x^T M x <= 1}``.

    ``radius`` is set when the ellipsoid is a known multiple of the Euclidean
    ball (closed forms); ``gap`` bounds ``log det`` suboptimality of a
    numerically computed extremal ellipsoid.
    """

    M: np.ndarray
    radius: Surd | None = None
    gap: float = 0.0

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        object.__setattr__(self, "M", (M + M.T) / 2)

    @property
    def dim(self) -> int:
        return self.M.shape[0]

    def norm(self, x) -> float:
        x = to_float(np.asarray(x))
        return float(np.sqrt(max(x @ self.M @ x, 0.0)))

    def polar(self) -> "Ellipsoid":
        r = None if self.radius is None else Surd(Fraction(1)) / self.radius
        return Ellipsoid(np.linalg.inv(self.M), radius=r, gap=self.gap)

    def logdet(self) -> float:
        return float(np.linalg.slogdet(self.M)[1])

    def as_space(self, label: str = "") -> EllipsoidBall:
        return EllipsoidBall(self.M, label=label)

    def to_json(self) -> dict:
        return {"M": self.M.tolist()}


@dataclass(frozen=True)
class IdentityDecomposition:
    """``sum_i c_i v_i v_i^T = I`` with ``v_i`` unit vectors."""

    weights: np.ndarray
    vectors: np.ndarray
    residual: float

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))


@dataclass(frozen=True)
class Bound:
    value: float
    source: str
    certified: bool = True
    exact: object = None  # Surd or Fraction when known in closed form

    def __float__(self):
        return float(self.value)

    def to_json(self) -> dict:
        out = {"value": float(self.value), "source": self.source, "certified": self.certified}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out


@dataclass(frozen=True)
class BoundInterval:
    lower: Bound
    upper: Bound

    @property
    def certified(self) -> bool:
        return self.lower.certified and self.upper.certified

    @property
    def collapsed(self) -> bool:
        if self.lower.exact is not None and self.upper.exact is not None:
            return _exact_equal(self.lower.exact, self.upper.exact)
        return abs(self.upper.value - self.lower.value) <= 1e-9 * max(1.0, abs(self.upper.value))

    @property
    def value(self) -> float | None:
        return self.upper.value if self.collapsed else None

    def to_json(self) -> dict:
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json(), "certified": self.certified}


def _exact_equal(a, b) -> bool:
    a = a if isinstance(a, Surd) else Surd(Fraction(a))
    b = b if isinstance(b, Surd) else Surd(Fraction(b))
    return a == b


# ---------------------------------------------------------------------------
# Minimum-volume enclosing ellipsoid


def mvee(points: np.ndarray, tol: float = MVEE_TOL, max_iter: int = 100000) -> tuple[np.ndarray, np.ndarray, float]:
    """Minimum-volume ellipsoid centred at 0 containing ``+-points``.

    Returns ``(M, u, gap)``: the matrix of the ellipsoid, the dual weights on
    the points, and an upper bound on the ``log det`` suboptimality of ``M``.
    Every point satisfies ``p^T M p <= 1``.
    """
    P = np.asarray(points, dtype=float)
    m, n = P.shape
    u = np.full(m, 1.0 / m)
    for _ in range(max_iter):
        X = (P.T * u) @ P
        g = np.einsum("ij,jk,ik->i", P, np.linalg.inv(X), P)
        j = int(np.argmax(g))
        support = np.flatnonzero(u > 0)
        i = support[int(np.argmin(g[support]))]
        up, down = g[j] / n - 1.0, 1.0 - g[i] / n
        if up <= tol and down <= tol:
            break
        if up >= down:
            step = (g[j] - n) / (n * (g[j] - 1.0))
            u *= 1.0 - step
            u[j] += step
        else:
            # away step, clipped so u[i] stays nonnegative
            step = (n - g[i]) / (n * (g[i] - 1.0)) if g[i] > 1.0 else math.inf
            step = min(step, u[i] / (1.0 - u[i])) if u[i] < 1.0 else step
            u *= 1.0 + step
            u[i] -= step
            u[u < 1e-15] = 0.0
            u /= u.sum()
    else:
        raise NoConvergence("MVEE iteration did not converge")
    X = (P.T * u) @ P
    M = np.linalg.inv(n * X)
    worst = float(np.max(np.einsum("ij,jk,ik->i", P, M, P)))
    M = M / worst
    return (M + M.T) / 2, u, n * math.log(max(worst, 1.0)) + n * math.log(1.0 + tol)


def _scaled_identity(n: int, radius: Surd) -> Ellipsoid:
    return Ellipsoid(np.eye(n) / float(radius) ** 2, radius=radius)


def _lp_radii(n: int, p) -> tuple[Surd, Surd]:
    """Loewner and John radii of ``B_{l_p^n}`` relative to ``B_2``."""
    if p == math.inf:
        e = Fraction(1, 2)
    else:
        e = Fraction(1, 2) - 1 / Fraction(p)
    if isinstance(p, float) and p != math.inf:
        raise NotSupported("closed forms need a rational p")
    big = surd_power(n, max(e, Fraction(0)))
    small = surd_power(n, min(e, Fraction(0)))
    return big, small


def loewner(X: NormedSpace) -> Ellipsoid:
    """Minimal-volume ellipsoid containing ``B_X``."""
    if isinstance(X, EllipsoidBall):
        return Ellipsoid(X.M, radius=Surd(Fraction(1)) if np.allclose(X.M, np.eye(X.dim)) else None)
    if isinstance(X, (Lp, Schatten)):
        if isinstance(X, Schatten) and X.dim > get_caps().vertex_dim:
            raise NotSupported(f"Schatten dimension {X.dim} exceeds the cap")
        n = X.n
        big, _ = _lp_radii(n, X.p)
        return _scaled_identity(X.dim, big)
    if X.polyhedral:
        M, _, gap = mvee(to_float(X.ball.vertices))
        return Ellipsoid(M, gap=gap)
    raise NotSupported(f"no Loewner ellipsoid for {X!r}")


def john(X: NormedSpace) -> Ellipsoid:
    """Maximal-volume ellipsoid contained in ``B_X``."""
    return loewner(X.dual()).polar()


# ---------------------------------------------------------------------------
# Contact points


def _classify(values: np.ndarray, tol: float) -> np.ndarray:
    dev = np.abs(values - 1.0)
    ambiguous = (dev > tol) & (dev <= 10 * tol)
    if np.any(ambiguous):
        raise ToleranceAmbiguous(f"near-contact value {values[ambiguous][0]!r} within 10*tol of 1")
    return dev <= tol


def _with_negatives(V: np.ndarray) -> np.ndarray:
    return np.concatenate([V, -V]) if len(V) else V


def _sign_vectors(n: int) -> np.ndarray:
    return np.array(list(itertools.product([1.0, -1.0], repeat=n)))


def _signed_permutations(n: int) -> np.ndarray:
    out = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product([1.0, -1.0], repeat=n):
            A = np.zeros((n, n))
            A[np.arange(n), perm] = signs
            out.append(A.ravel())
    return np.array(out)


def contact_points(X: NormedSpace, E: Ellipsoid, side: str, tol: float = CONTACT_TOL) -> np.ndarray:
    """Points with ``||x||_X = ||x||_E = 1`` (both signs of each pair).

    For ``Lp`` and ``Schatten`` a finite set of contact points sufficient for
    the identity decomposition is returned (the full set may be infinite).
    """
    if side not in ("john", "loewner"):
        raise ValueError("side must be 'john' or 'loewner'")
    n = X.dim
    if isinstance(X, EllipsoidBall):
        w, U = np.linalg.eigh(E.M)
        return _with_negatives((U / np.sqrt(w)).T)
    if isinstance(X, (Lp, Schatten)) and not X.polyhedral or isinstance(X, Schatten):
        p = X.p
        small_p = p != math.inf and p <= 2
        spread = (side == "loewner") != small_p  # contacts are "flat" sign/orthogonal points
        if p == 2:
            spread = False
        if isinstance(X, Lp):
            if spread:
                S = _sign_vectors(n)
                S = S[S[:, 0] > 0]
                pts = S / X.norm_rows(S)[:, None]
            else:
                pts = np.eye(n)
        else:
            if spread:
                S = _signed_permutations(X.n)
                S = S[[row[np.flatnonzero(row)[0]] > 0 for row in S]]
                pts = S / np.array([X.norm(s) for s in S])[:, None]
            else:
                pts = np.eye(n)
        return _with_negatives(pts)
    if side == "loewner":
        V = to_float(X.ball.vertices)
        vals = np.einsum("ij,jk,ik->i", V, E.M, V)
        mask = _classify(vals, tol)
        return _with_negatives(V[mask] / np.sqrt(vals[mask])[:, None])
    A = to_float(X.dual_ball.vertices)
    Minv = np.linalg.inv(E.M)
    vals = np.einsum("ij,jk,ik->i", A, Minv, A)
    mask = _classify(vals, tol)
    pts = (A[mask] @ Minv) / np.sqrt(vals[mask])[:, None]
    return _with_negatives(pts)


def identity_decomposition(contacts, E: Ellipsoid | None = None, tol: float = DECOMPOSITION_TOL) -> IdentityDecomposition:
    """Nonnegative weights ``c_i`` with ``sum c_i v_i v_i^T = I``.

    With ``E`` given, vectors are mapped to the Euclidean structure of ``E``
    (``v -> R v`` where ``R^T R = M``) and normalized there first.
    """
    V = np.asarray(contacts, dtype=float)
    if V.ndim != 2 or len(V) == 0:
        raise InfeasibleDecomposition("no contact points")
    if E is not None:
        V = V @ np.linalg.cholesky(E.M)
    V = V / np.linalg.norm(V, axis=1)[:, None]
    # one representative per +- pair
    keep = []
    for v in V:
        if not any(abs(abs(v @ w) - 1.0) < 1e-9 for w in keep):
            keep.append(v)
    V = np.array(keep)
    n = V.shape[1]
    iu = np.triu_indices(n)
    scale = np.where(iu[0] == iu[1], 1.0, math.sqrt(2.0))
    A = np.array([np.outer(v, v)[iu] * scale for v in V]).T
    b = np.eye(n)[iu] * scale
    c, _ = nnls(A, b)
    residual = float(np.linalg.norm((V.T * c) @ V - np.eye(n)))
    if residual > tol:
        raise InfeasibleDecomposition(f"identity decomposition residual {residual:.3e}")
    mask = c > 1e-14
    return IdentityDecomposition(c[mask], V[mask], residual)


# ---------------------------------------------------------------------------
# Banach-Mazur distance to Euclidean space


def _polyhedral_stretch(X: NormedSpace, E: Ellipsoid, side: str) -> float:
    """Smallest ``beta`` with ``E`` and ``B_X`` nested within factor ``beta``."""
    if side == "john":
        V = to_float(X.ball.vertices)
        return float(np.sqrt(np.max(np.einsum("ij,jk,ik->i", V, E.M, V))))
    A = to_float(X.dual_ball.vertices)
    return float(np.sqrt(np.max(np.einsum("ij,jk,ik->i", A, np.linalg.inv(E.M), A))))


def proportionality(J: Ellipsoid, L: Ellipsoid) -> tuple[float, bool]:
    """``(alpha, proportional)`` with ``L ~ alpha * J``."""
    alpha2 = float(np.trace(J.M) / np.trace(L.M))
    err = np.linalg.norm(alpha2 * L.M - J.M) / np.linalg.norm(J.M)
    return math.sqrt(alpha2), bool(err <= PROPORTIONAL_TOL)


def bm_distance_euclidean(X: NormedSpace) -> BoundInterval:
    """Interval for the Banach-Mazur distance from ``X`` to ``l_2^n``."""
    n = X.dim
    J, L = john(X), loewner(X)
    sqrt_n = Bound(math.sqrt(n), "john-theorem", True, Surd(Fraction(n), 2))
    alpha, prop = proportionality(J, L)
    if prop:
        exact = None
        if J.radius is not None and L.radius is not None:
            exact = L.radius / J.radius
            alpha = float(exact)
        b = Bound(alpha, "proportional-ellipsoids", True, exact)
        return BoundInterval(b, b)
    # volume ratio: any E inside B_X inside dE forces d^n >= vol(L)/vol(J)
    log_ratio = (J.logdet() - L.logdet() - J.gap - L.gap) / (2 * n)
    lower = Bound(max(1.0, math.exp(log_ratio)), "volume-ratio", True)
    uppers = [sqrt_n]
    if X.polyhedral:
        uppers.append(Bound(_polyhedral_stretch(X, J, "john"), "john-stretch", True))
        uppers.append(Bound(_polyhedral_stretch(X, L, "loewner"), "loewner-stretch", True))
    upper = min(uppers, key=lambda b: b.value)
    return BoundInterval(lower, upper)
