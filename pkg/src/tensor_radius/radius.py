"""Tensor radii: ``tau_k(T) = ||T^{(x)k}||^{1/k}`` from ``eps_k(X)`` to ``pi_k(Y)``,
bounds on the limit ``tau_infty``, and the equivalence ratios ``rho``.

``tau_k(T)^k`` is the maximum of ``<psi, T^{(x)k} z>`` over ``z`` in the unit
ball of ``eps_k(X)`` and ``psi`` in the unit ball of ``eps_k(Y*)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from ._exact import Surd, as_array, exact_inv, is_exact, surd_power, to_exact, to_float
from .caps import get_caps
from .convex import HPolytope, enumerate_vertices
from .ellipsoids import Bound, BoundInterval, bm_distance_euclidean, john, loewner
from .errors import (
    DimensionCapExceeded,
    NoConvergence,
    NotCertifiable,
    NotPolyhedral,
    NotSupported,
    SizeCapExceeded,
    TensorRadiusError,
)
from .operators import LinearOperator, adjoint, nuclear_norm, operator_norm
from .spaces import EllipsoidBall, Lp, NormedSpace, Schatten, crosspolytope_basis, euclidean_root, parallelotope_basis
from .tensors import Tensor, apply_kron, projective_norm


@dataclass(frozen=True)
class TauResult:
    """``value`` is ``tau_k``; ``power`` is the exact ``tau_k^k`` when known.

    The witness ``(psi, z)`` satisfies ``<psi, T^{(x)k} z> = value^k`` with
    ``z`` in ``B_{eps_k(X)}`` and ``psi`` in ``B_{eps_k(Y*)}``.
    """

    k: int
    value: float
    power: object
    witness: tuple
    certified: bool
    method: str

    @property
    def exact(self) -> Surd | None:
        if isinstance(self.power, Fraction):
            return Surd(self.power, self.k)
        return None

    def __float__(self):
        return self.value

    def to_json(self) -> dict:
        out = {"k": self.k, "value": self.value, "certified": self.certified, "method": self.method}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out


@dataclass(frozen=True)
class RadiusReport:
    quantity: str
    interval: BoundInterval
    per_k: tuple = ()
    bounds: tuple = ()

    @property
    def lower(self) -> float:
        return self.interval.lower.value

    @property
    def upper(self) -> float:
        return self.interval.upper.value

    @property
    def value(self) -> float | None:
        return self.interval.value

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "interval": self.interval.to_json(),
            "per_k": [t.to_json() for t in self.per_k],
            "bounds": [b.to_json() for b in self.bounds],
        }


def kron_power(A: np.ndarray, k: int) -> np.ndarray:
    return reduce(np.kron, [A] * k)


def _as_bound_exact(v):
    if isinstance(v, Fraction):
        return v
    return None


# ---------------------------------------------------------------------------
# tau_k


def _scan_signs(G: np.ndarray, N: int, exact: bool):
    """Index of a maximizer of ``||G s||_1`` over ``s`` in ``{-1, 1}^N`` with ``s_0 = 1``.

    Rational ``G`` is scaled to integers so that ties are resolved exactly.
    """
    if exact:
        den = math.lcm(*[Fraction(v).denominator for v in G.ravel()])
        Gi = np.array([[int(Fraction(v) * den) for v in row] for row in G], dtype=object)
        Gm = Gi.astype(np.int64) if int(np.abs(Gi).sum()) < 2**62 else Gi
    else:
        Gm = np.asarray(G, dtype=float)
    total = 1 << (N - 1)
    chunk = 1 << 15
    best_val, best_idx = None, 0
    bits = np.arange(N - 1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        S = 1 - 2 * ((idx[:, None] >> bits[None, :]) & 1)
        S = np.concatenate([np.ones((len(idx), 1), dtype=np.int64), S], axis=1)
        vals = np.abs(S.astype(Gm.dtype) @ Gm.T).sum(axis=1)
        j = int(np.argmax(vals))
        if best_val is None or vals[j] > best_val:
            best_val, best_idx = vals[j], int(idx[j])
    s = np.ones(N, dtype=np.int64)
    s[1:] = 1 - 2 * ((best_idx >> np.arange(N - 1)) & 1)
    return s


def _flip_ascent(G: np.ndarray, N: int, starts: int, seed: int):
    """Randomized single-flip ascent on ``||G s||_1`` (heuristic)."""
    rng = np.random.default_rng(seed)
    G = np.asarray(G, dtype=float)
    best = (-1.0, None)
    for _ in range(starts):
        s = rng.choice([-1.0, 1.0], size=N)
        improved = True
        while improved:
            improved = False
            y = G @ s
            base = np.abs(y).sum()
            # value after flipping coordinate j
            trial = np.abs(y[:, None] - 2 * G * s[None, :]).sum(axis=0)
            j = int(np.argmax(trial))
            if trial[j] > base * (1 + 1e-15) + 1e-15:
                s[j] = -s[j]
                improved = True
        v = float(np.abs(G @ s).sum())
        if v > best[0]:
            best = (v, s.copy())
    return best


def _tau_sign(T: LinearOperator, k: int, P, Q, starts: int, seed: int) -> TauResult:
    exact = T.exact and is_exact(P) and is_exact(Q)
    A = T.matrix if exact else to_float(T.matrix)
    P = P if exact else to_float(P)
    Q = Q if exact else to_float(Q)
    Qinv = exact_inv(Q) if exact else np.linalg.inv(Q)
    G = Qinv @ A @ P
    Gk = kron_power(G, k)
    N = Gk.shape[1]
    if (1 << (N - 1)) <= get_caps().sign_vectors:
        s = _scan_signs(Gk, N, exact)
        power = Fraction(sum(abs(v) for v in Gk @ to_exact(s))) if exact else float(np.abs(Gk @ s).sum())
        certified, method = True, "sign-scan"
    else:
        power, s = _flip_ascent(Gk, N, starts, seed)
        exact, certified, method = False, False, "sign-ascent"
        Gk, P, Qinv = to_float(Gk), to_float(P), to_float(Qinv)
    s_arr = to_exact(s) if exact else s.astype(float)
    z = apply_kron(s_arr.reshape((T.domain.dim,) * k), [P] * k).ravel()
    image = Gk @ s_arr
    one = Fraction(1) if exact else 1.0
    signs = np.array([one if v >= 0 else -one for v in image], dtype=object if exact else float)
    psi = apply_kron(signs.reshape((T.codomain.dim,) * k), [Qinv.T] * k).ravel()
    value = float(Surd(power, k)) if exact else float(power) ** (1.0 / k)
    return TauResult(k, value, power if exact else float(power), (psi, z), certified, method)


def _product_facets(F: np.ndarray, k: int) -> np.ndarray:
    rows = [reduce(np.kron, combo) for combo in itertools.product(list(F), repeat=k)]
    return np.array(rows, dtype=F.dtype)


def injective_ball(X: NormedSpace, k: int, max_facets: int | None = None) -> HPolytope:
    """Unit ball of ``eps_k(X)`` for polyhedral ``X`` (facets: products of dual vertices)."""
    F = X.dual_ball.vertices
    caps = get_caps()
    limit = caps.facets if max_facets is None else min(max_facets, caps.facets)
    if len(F) ** k > limit:
        raise SizeCapExceeded(f"{len(F)}^{k} facets exceed the cap {limit}")
    if X.dim**k > caps.vertex_dim:
        raise DimensionCapExceeded(f"dimension {X.dim}^{k} exceeds the cap {caps.vertex_dim}")
    return HPolytope(_product_facets(F, k))


# Double description on product facets grows quickly beyond this; the
# automatic dispatch falls back to alternating ascent past it.
VERTEX_PATH_FACETS = 256
VERTEX_PATH_DIM = 8


def _tau_vertex(T: LinearOperator, k: int, max_facets: int | None = None) -> TauResult:
    X, Y = T.domain, T.codomain
    Vz = enumerate_vertices(injective_ball(X, k, max_facets)).vertices
    Vpsi = enumerate_vertices(injective_ball(Y.dual(), k, max_facets)).vertices
    exact = T.exact and is_exact(Vz) and is_exact(Vpsi)
    Tk = kron_power(T.matrix if exact else to_float(T.matrix), k)
    if not exact:
        Vz, Vpsi = to_float(Vz), to_float(Vpsi)
    Bf = to_float(Vpsi) @ to_float(Tk) @ to_float(Vz).T
    a = np.abs(Bf)
    top = a.max()
    if exact:
        cand = np.argwhere(a >= top - 1e-9 * (1 + top))
        vals = {(int(i), int(j)): Vpsi[i] @ Tk @ Vz[j] for i, j in cand}
        (i, j) = max(vals, key=lambda ij: (abs(vals[ij]), -ij[0], -ij[1]))
        power = abs(vals[(i, j)])
        sgn = 1 if vals[(i, j)] >= 0 else -1
        return TauResult(k, float(Surd(power, k)), power, (sgn * Vpsi[i], Vz[j]), True, "vertex-pairs")
    i, j = np.unravel_index(int(np.argmax(a)), a.shape)
    sgn = 1.0 if Bf[i, j] >= 0 else -1.0
    return TauResult(k, float(top) ** (1.0 / k), float(top), (sgn * Vpsi[i], Vz[j]), True, "vertex-pairs")


def _polar_factor(A: np.ndarray) -> tuple[float, np.ndarray]:
    U, s, Vt = np.linalg.svd(A)
    return float(s.sum()), U @ Vt


def _tau2_euclidean(T: LinearOperator, starts: int, seed: int, max_sweeps: int = 200) -> TauResult:
    """Alternating ascent for ``sup <Psi, T Z T^t>`` over operator-norm balls."""
    X, Y = T.domain, T.codomain
    RX, RY = euclidean_root(X), euclidean_root(Y)
    A = to_float(T.matrix)
    if RY is not None:
        A = RY @ A
    if RX is not None:
        A = A @ np.linalg.inv(RX)
    n = A.shape[1]
    rng = np.random.default_rng(seed)
    best = (-1.0, None, None)
    for _ in range(starts):
        _, Z = _polar_factor(rng.standard_normal((n, n)))
        prev = -np.inf
        for _ in range(max_sweeps):
            _, Psi = _polar_factor(A @ Z @ A.T)
            val, Z = _polar_factor(A.T @ Psi @ A)
            if val - prev <= 1e-12 * abs(val):
                break
            prev = val
        _, Psi = _polar_factor(A @ Z @ A.T)
        val = float(np.sum(Psi * (A @ Z @ A.T)))
        if val > best[0]:
            best = (val, Psi, Z)
    val, Psi, Z = best
    # back to the original coordinates
    if RX is not None:
        Rinv = np.linalg.inv(RX)
        Z = Rinv @ Z @ Rinv.T
    if RY is not None:
        Psi = RY.T @ Psi @ RY
    return TauResult(2, math.sqrt(val), val, (Psi.ravel(), Z.ravel()), False, "alternating-polar")


def _tau_alternating(T: LinearOperator, k: int, starts: int, seed: int, init=(), max_rounds: int = 20) -> TauResult:
    """Alternating best responses using projective norms on both sides (heuristic).

    ``init`` holds feasible ``(psi, z)`` pairs; they are scored as they are
    and also used as starting points ahead of the random rank-one starts.
    """
    X, Y = T.domain, T.codomain
    A = to_float(T.matrix)
    Tk = kron_power(A, k)
    rng = np.random.default_rng(seed)
    best = (-1.0, None, None)
    for psi0, z0 in init:
        val0 = float(psi0 @ Tk @ z0)
        if val0 > best[0]:
            best = (val0, psi0, z0)
    for st in range(len(init) + starts):
        if st < len(init):
            z = init[st][1]
        else:
            xs = []
            for _ in range(k):
                v = rng.standard_normal(X.dim)
                xs.append(v / X.norm(v))
            z = reduce(np.multiply.outer, xs).ravel()
        prev = -np.inf
        psi, val = None, 0.0
        for r in range(max_rounds):
            pr = projective_norm(Tensor((Y,) * k, (Tk @ z).reshape((Y.dim,) * k)), seed=seed + r)
            psi = np.asarray(pr.dual, dtype=float).ravel()
            pz = projective_norm(Tensor((X.dual(),) * k, (Tk.T @ psi).reshape((X.dim,) * k)), seed=seed + r)
            z = np.asarray(pz.dual, dtype=float).ravel()
            val = float(psi @ Tk @ z)
            # gains below the column-generation tolerance are solver noise
            if val - prev <= 1e-8 * abs(val):
                break
            prev = val
        if val > best[0]:
            best = (val, psi, z)
    val, psi, z = best
    return TauResult(k, max(val, 0.0) ** (1.0 / k), val, (psi, z), False, "alternating-projective")


def tau_k(T: LinearOperator, k: int, method: str = "auto", starts: int = 64, seed: int = 0) -> TauResult:
    """``tau_k(T)``: certified when an exhaustive path applies, else a heuristic lower bound."""
    if k < 1:
        raise ValueError("k must be positive")
    X, Y = T.domain, T.codomain
    caps = get_caps()
    if max(X.dim, Y.dim) ** k > caps.tensor_size:
        raise SizeCapExceeded(f"dimension^{k} exceeds the tensor cap {caps.tensor_size}")
    if not np.any(to_float(T.matrix)):
        zero = Fraction(0) if T.exact else 0.0
        return TauResult(k, 0.0, zero, (np.zeros(Y.dim**k), np.zeros(X.dim**k)), True, "zero")
    if k == 1 and method in ("auto", "operator"):
        op = operator_norm(T, starts=starts, seed=seed)
        x = op.witness
        _, f = Y.dual().support(T.matrix @ x if is_exact(x) == T.exact else to_float(T.matrix) @ to_float(x))
        power = op.value if isinstance(op.value, Fraction) else float(op.value)
        return TauResult(1, float(op.value), power, (f, x), op.certified, "operator-norm")
    if method in ("auto", "sign"):
        P, Q = parallelotope_basis(X), crosspolytope_basis(Y)
        if P is not None and Q is not None:
            return _tau_sign(T, k, P, Q, starts, seed)
        if method == "sign":
            raise NotSupported("sign path needs a parallelotope domain and a cross-polytope codomain")
    small = max(X.dim, Y.dim) ** k <= VERTEX_PATH_DIM
    if (method == "vertex" or (method == "auto" and small)) and X.polyhedral and Y.polyhedral:
        try:
            return _tau_vertex(T, k, VERTEX_PATH_FACETS if method == "auto" else None)
        except (SizeCapExceeded, DimensionCapExceeded):
            if method == "vertex":
                raise
    elif method == "vertex" and not (X.polyhedral and Y.polyhedral):
        raise NotPolyhedral("vertex path needs polyhedral spaces")
    if k == 2 and X.euclidean and Y.euclidean:
        return _tau2_euclidean(T, starts, seed)
    return _tau_alternating(T, k, min(starts, 4), seed, _product_starts(T, k, starts, seed))


def _product_starts(T: LinearOperator, k: int, starts: int, seed: int) -> list:
    """``psi_a (x) psi_b`` and ``z_a (x) z_b`` from orders ``a + b = k``.

    Crossnorm products of feasible witnesses stay feasible, so the heuristic
    never falls below ``tau_a^a tau_b^b``.
    """
    if k < 2:
        return []
    a = k // 2
    ra = tau_k(T, a, starts=starts, seed=seed)
    rb = ra if k - a == a else tau_k(T, k - a, starts=starts, seed=seed)
    psi = np.kron(to_float(np.asarray(ra.witness[0])), to_float(np.asarray(rb.witness[0])))
    z = np.kron(to_float(np.asarray(ra.witness[1])), to_float(np.asarray(rb.witness[1])))
    return [(psi, z)]


def rho_k(X: NormedSpace, k: int, **kw) -> TauResult:
    """``rho_k(X) = tau_k(id_X)``."""
    return tau_k(identity(X), k, **kw)


def identity(X: NormedSpace) -> LinearOperator:
    eye = np.empty((X.dim, X.dim), dtype=object)
    for i in range(X.dim):
        for j in range(X.dim):
            eye[i, j] = Fraction(int(i == j))
    return LinearOperator(eye, X, X)


# ---------------------------------------------------------------------------
# Upper bounds by factorization through Hilbert space


@dataclass(frozen=True)
class FactorizationBound:
    value: float
    exact: Surd | None
    certified: bool
    left: object  # nuclear norm of Q1 Q1^* : Y* -> Y
    right: object  # nuclear norm of Q2^* Q2 : X -> X*
    name: str = ""

    def bound(self) -> Bound:
        return Bound(self.value, f"factorization:{self.name}" if self.name else "factorization", self.certified, self.exact)


def factorization_bound(Q1: LinearOperator, Q2: LinearOperator, name: str = "") -> FactorizationBound:
    """Upper bound ``||Q1 Q1^*||_N^{1/2} ||Q2^* Q2||_N^{1/2}`` on ``tau_infty(Q1 Q2)``."""
    H1, H2 = Q1.domain, Q2.codomain
    for H in (H1, H2):
        if not (isinstance(H, Lp) and H.p == 2):
            raise ValueError("the middle space must be l_2^d")
    if H1.dim != H2.dim:
        raise ValueError("inner dimensions differ")
    Y, X = Q1.codomain, Q2.domain
    A1, A2 = Q1.matrix, Q2.matrix
    left = nuclear_norm(LinearOperator(A1 @ A1.T, Y.dual(), Y))
    right = nuclear_norm(LinearOperator(A2.T @ A2, X, X.dual()))
    prod_exact = None
    if isinstance(left.value, Fraction) and isinstance(right.value, Fraction):
        prod_exact = Surd(left.value * right.value, 2)
    value = float(prod_exact) if prod_exact is not None else math.sqrt(float(left.value) * float(right.value))
    return FactorizationBound(value, prod_exact, bool(left.certified and right.certified), left.value, right.value, name)


def _l2(d: int) -> Lp:
    return Lp(d, 2)


def _exact_eye(n: int) -> np.ndarray:
    return identity(Lp(n, 2)).matrix


def _ellipsoid_root(X: NormedSpace, which: str):
    E = john(X) if which == "john" else loewner(X)
    return np.linalg.cholesky(E.M).T


def _proportional_to_identity(R: np.ndarray) -> bool:
    d = np.diag(R)
    return np.allclose(R, np.diag(d), atol=1e-12 * np.abs(R).max()) and np.allclose(d, d[0], rtol=1e-12)


def factorization_splits(T: LinearOperator):
    """Canonical factorizations ``T = Q1 Q2`` through ``l_2^d``.

    Yields ``(name, Q1, Q2)``: through the coordinates of either side, through
    the John and Loewner structures of either side, and the square split for
    two-dimensional parallelotope domains.
    """
    X, Y = T.domain, T.codomain
    n, m = X.dim, Y.dim
    A = T.matrix
    yield "codomain-coordinates", LinearOperator(_exact_eye(m) if T.exact else np.eye(m), _l2(m), Y), LinearOperator(A, X, _l2(m))
    yield "domain-coordinates", LinearOperator(A, _l2(n), Y), LinearOperator(_exact_eye(n) if T.exact else np.eye(n), X, _l2(n))
    Af = to_float(A)
    for side, space in (("domain", X), ("codomain", Y)):
        for which in ("john", "loewner"):
            try:
                R = _ellipsoid_root(space, which)
            except TensorRadiusError:
                continue
            if _proportional_to_identity(R):
                continue  # same bound as the coordinate split
            Rinv = np.linalg.inv(R)
            if side == "domain":
                yield f"{which}-of-domain", LinearOperator(Af @ Rinv, _l2(n), Y), LinearOperator(R, X, _l2(n))
            else:
                yield f"{which}-of-codomain", LinearOperator(Rinv, _l2(m), Y), LinearOperator(R @ Af, X, _l2(m))
    if n == 2:
        P = parallelotope_basis(X)
        if P is not None:
            exact = T.exact and is_exact(P)
            F = np.array([[1, 1], [1, -1]], dtype=object) * Fraction(1)
            if not exact:
                F, P, A2 = to_float(F), to_float(P), Af
            else:
                A2 = A
            Pinv = exact_inv(P) if exact else np.linalg.inv(P)
            half = Fraction(1, 2) if exact else 0.5
            yield "square", LinearOperator(A2 @ P @ F, _l2(2), Y), LinearOperator(half * F @ Pinv, X, _l2(2))


def best_factorization(T: LinearOperator, splits=None) -> list[FactorizationBound]:
    out = []
    for name, Q1, Q2 in splits if splits is not None else factorization_splits(T):
        try:
            out.append(factorization_bound(Q1, Q2, name))
        except (NoConvergence, NotSupported, SizeCapExceeded):
            continue
    return sorted(out, key=lambda b: (not b.certified, b.value))


# ---------------------------------------------------------------------------
# Closed forms


def _closed_form_rho(X: NormedSpace):
    """Exact ``rho_infty`` for l_p, Schatten and Euclidean spaces, else ``None``."""
    if isinstance(X, EllipsoidBall) or (isinstance(X, Lp) and X.p == 2):
        return Surd(Fraction(X.dim)), "euclidean"
    if isinstance(X, (Lp, Schatten)):
        p = X.p
        if isinstance(p, float) and p != math.inf:
            e = abs(0.5 - 1.0 / p)
            base = X.n
            expo = (1.0 if isinstance(X, Lp) else 2.0) - e
            return float(base) ** expo, "lp-closed-form" if isinstance(X, Lp) else "schatten-closed-form"
        e = Fraction(1, 2) if p == math.inf else abs(Fraction(1, 2) - 1 / Fraction(p))
        expo = (1 if isinstance(X, Lp) else 2) - e
        return surd_power(X.n, expo), "lp-closed-form" if isinstance(X, Lp) else "schatten-closed-form"
    return None


def _interval(lowers, uppers) -> BoundInterval:
    lo = max(lowers, key=lambda b: (b.value, b.certified, b.exact is not None))
    certified_uppers = [b for b in uppers if b.certified] or uppers
    up = min(certified_uppers, key=lambda b: (b.value, -int(b.exact is not None)))
    # prefer an exact bound among numerically tied ones
    for b in lowers:
        if b.exact is not None and abs(b.value - lo.value) <= 1e-12 * max(1.0, lo.value) and lo.exact is None:
            lo = b
    for b in certified_uppers:
        if b.exact is not None and abs(b.value - up.value) <= 1e-12 * max(1.0, up.value) and up.exact is None:
            up = b
    if lo.value > up.value and lo.value - up.value <= 1e-12 * max(1.0, up.value):
        # rounding noise between two routes to the same number
        lo = Bound(up.value, lo.source, lo.certified, lo.exact)
    return BoundInterval(lo, up)


def _scalar_identity(T: LinearOperator):
    A = T.matrix
    if A.shape[0] != A.shape[1] or type(T.domain) is not type(T.codomain):
        return None
    if T.domain.to_json() != T.codomain.to_json():
        return None
    c = A[0, 0]
    n = A.shape[0]
    for i in range(n):
        for j in range(n):
            if A[i, j] != (c if i == j else 0):
                return None
    return c


# ---------------------------------------------------------------------------
# tau_infty and rho_infty reports


def tau_infty_bounds(T: LinearOperator, kmax: int = 4, starts: int = 64, seed: int = 0, factorizations: bool = True) -> RadiusReport:
    X, Y = T.domain, T.codomain
    if not np.any(to_float(T.matrix)):
        zero = Bound(0.0, "zero-operator", True, Fraction(0))
        return RadiusReport("tau_infty", BoundInterval(zero, zero), (), (zero,))
    per_k = []
    lowers, uppers = [], []
    euclidean_side = X.euclidean or Y.euclidean
    # a Euclidean side collapses the interval to the nuclear norm, so higher
    # heuristic orders cannot move either end
    for k in range(1, (min(kmax, 2) if euclidean_side else kmax) + 1):
        try:
            r = tau_k(T, k, starts=starts, seed=seed)
        except (SizeCapExceeded, DimensionCapExceeded, NotSupported, NoConvergence):
            continue
        per_k.append(r)
        lowers.append(Bound(r.value, f"tau_{k}", r.certified, r.exact))
    nuc = nuclear_norm(T, starts=starts, seed=seed)
    nuc_exact = _as_bound_exact(nuc.value)
    uppers.append(Bound(float(nuc.value), "nuclear", nuc.certified, nuc_exact))
    if euclidean_side:
        lowers.append(Bound(float(nuc.lower), "nuclear-euclidean-side", nuc.certified, _as_bound_exact(nuc.lower)))
    c = _scalar_identity(T)
    if c is not None:
        cf = _closed_form_rho(X)
        if cf is not None:
            rho, src = cf
            cexact = Fraction(abs(c)) if isinstance(c, (Fraction, int)) else None
            exact = rho * Surd(cexact) if isinstance(rho, Surd) and cexact is not None else None
            val = float(exact) if exact is not None else float(rho) * abs(float(c))
            lowers.append(Bound(val, src, True, exact))
            uppers.append(Bound(val, src, True, exact))
    try:
        dX, dY = bm_distance_euclidean(X), bm_distance_euclidean(Y)
        d = min((dX.upper, dY.upper), key=lambda b: b.value)
        ex = None
        if nuc_exact is not None and d.exact is not None:
            ex = Surd(nuc_exact) / d.exact
        lowers.append(Bound(float(ex) if ex is not None else float(nuc.lower) / d.value, "nuclear-over-distance", nuc.certified and d.certified, ex))
    except TensorRadiusError:
        pass
    if factorizations and not euclidean_side:
        for fb in best_factorization(T):
            uppers.append(fb.bound())
    return RadiusReport("tau_infty", _interval(lowers, uppers), tuple(per_k), tuple(lowers + uppers))


def rho_report(X: NormedSpace, kmax: int = 4, starts: int = 64, seed: int = 0) -> RadiusReport:
    n = X.dim
    cf = _closed_form_rho(X)
    if cf is not None:
        rho, src = cf
        b = Bound(float(rho), src, True, rho if isinstance(rho, Surd) else None)
        return RadiusReport("rho_infty", BoundInterval(b, b), (), (b,))
    lowers = [Bound(math.sqrt(n), "sqrt-dimension", True, Surd(Fraction(n), 2))]
    uppers = [Bound(float(n), "dimension", True, Surd(Fraction(n)))]
    per_k = []
    ident = identity(X)
    for k in range(1, kmax + 1):
        try:
            r = tau_k(ident, k, starts=starts, seed=seed)
        except (SizeCapExceeded, DimensionCapExceeded, NotSupported, NoConvergence):
            continue
        per_k.append(r)
        lowers.append(Bound(r.value, f"rho_{k}", r.certified, r.exact))
    try:
        d = bm_distance_euclidean(X)
        ex = Surd(Fraction(n)) / d.upper.exact if d.upper.exact is not None else None
        lowers.append(Bound(float(ex) if ex is not None else n / d.upper.value, "dimension-over-distance", d.certified, ex))
        if d.collapsed and d.lower.source == "proportional-ellipsoids":
            ex = Surd(Fraction(n)) / d.lower.exact if d.lower.exact is not None else None
            uppers.append(Bound(float(ex) if ex is not None else n / d.lower.value, "proportional-ellipsoids", d.certified, ex))
    except TensorRadiusError:
        pass
    for which in ("john", "loewner"):
        try:
            R = _ellipsoid_root(X, which)
        except TensorRadiusError:
            continue
        fb = factorization_bound(LinearOperator(np.linalg.inv(R), _l2(n), X), LinearOperator(R, X, _l2(n)), which)
        uppers.append(fb.bound())
    return RadiusReport("rho_infty", _interval(lowers, uppers), tuple(per_k), tuple(lowers + uppers))


# ---------------------------------------------------------------------------
# Gap certificates


@dataclass(frozen=True)
class NTPGap:
    nuclear: float
    tau_upper: float
    gap_certified: bool
    tau_lower: float | None
    source: str
    exact_nuclear: object = None
    exact_tau_upper: object = None

    def to_json(self) -> dict:
        out = {
            "nuclear": self.nuclear,
            "tau_upper": self.tau_upper,
            "gap_certified": self.gap_certified,
            "source": self.source,
        }
        if self.tau_lower is not None:
            out["tau_lower"] = self.tau_lower
        if self.exact_nuclear is not None:
            out["nuclear_exact"] = str(self.exact_nuclear)
        if self.exact_tau_upper is not None:
            out["tau_upper_exact"] = str(self.exact_tau_upper)
        return out


def ntp_gap(T: LinearOperator, gap_tol: float = 1e-6, splits=None) -> NTPGap:
    """Certify ``tau_infty(T) < ||T||_N`` by a factorization bound.

    A Euclidean domain or codomain forces equality; the result then reports
    no gap with the collapsed value. Otherwise ``NotCertifiable`` is raised
    when no certified factorization beats the nuclear norm.
    """
    X, Y = T.domain, T.codomain
    nuc = nuclear_norm(T)
    if X.euclidean or Y.euclidean:
        return NTPGap(float(nuc.value), float(nuc.value), False, float(nuc.lower), "euclidean-side", _as_bound_exact(nuc.value), _as_bound_exact(nuc.value))
    if not nuc.certified:
        raise NotCertifiable("nuclear norm is not certified")
    bounds = [b for b in best_factorization(T, splits) if b.certified]
    if not bounds:
        raise NotCertifiable("no certified factorization bound")
    best = bounds[0]
    gap = best.value < float(nuc.lower) - gap_tol
    if best.exact is not None and isinstance(nuc.value, Fraction):
        gap = best.exact < Surd(nuc.value) and best.value < float(nuc.lower) - gap_tol
    if not gap:
        raise NotCertifiable(f"best factorization bound {best.value:.10g} does not beat the nuclear norm {float(nuc.lower):.10g}")
    return NTPGap(float(nuc.value), best.value, True, None, f"factorization:{best.name}", _as_bound_exact(nuc.value), best.exact)


@dataclass(frozen=True)
class SchoenbergWitness:
    x: np.ndarray
    y: np.ndarray
    value: float  # ||x + y||^2 + ||x - y||^2 for unit x, y


def schoenberg_search(Y: NormedSpace, trials: int = 10000, seed: int = 0, margin: float = 1e-9) -> SchoenbergWitness | None:
    """Unit vectors with ``||x+y||^2 + ||x-y||^2 < 4``; such a pair exists iff ``Y`` is not Euclidean.

    ``None`` means no violating pair was found, which proves nothing.
    """
    n = Y.dim
    E = np.eye(n)
    xs, ys = [], []
    for i, j in itertools.combinations(range(n), 2):
        xs += [E[i], E[i] + E[j]]
        ys += [E[j], E[i] - E[j]]
    if Y.polyhedral:
        V = to_float(Y.ball.vertices)[:64]
        for i, j in itertools.combinations(range(len(V)), 2):
            xs.append(V[i])
            ys.append(V[j])
    rng = np.random.default_rng(seed)
    Xs = np.concatenate([np.array(xs).reshape(-1, n), rng.standard_normal((trials, n))])
    Ys = np.concatenate([np.array(ys).reshape(-1, n), rng.standard_normal((trials, n))])
    Xs = Xs / Y.norm_rows(Xs)[:, None]
    Ys = Ys / Y.norm_rows(Ys)[:, None]
    vals = Y.norm_rows(Xs + Ys) ** 2 + Y.norm_rows(Xs - Ys) ** 2
    t = int(np.argmin(vals))
    if vals[t] < 4 - margin:
        return SchoenbergWitness(Xs[t], Ys[t], float(vals[t]))
    return None


@dataclass(frozen=True)
class SquareConstruction:
    T: LinearOperator
    nuclear: float
    tau_upper: float
    formula: float  # (||x+y||^2 + ||x-y||^2)^{1/2}
    exact_tau_upper: Surd | None = None


def square_construction(Y: NormedSpace, x=None, y=None, trials: int = 10000, seed: int = 0) -> SquareConstruction:
    """``T(a, b) = a x + b y`` from ``l_inf^2`` to ``Y``, factored through ``l_2^2``.

    With unit ``x, y`` violating the parallelogram inequality the factorization
    bound is below ``||T||_N = ||x|| + ||y|| = 2``.
    """
    if x is None or y is None:
        w = schoenberg_search(Y, trials=trials, seed=seed)
        if w is None:
            raise NotCertifiable("no parallelogram-violating pair found")
        x, y = w.x, w.y
    x, y = as_array(x), as_array(y)
    if not (is_exact(x) and is_exact(y)) and all(float(v).is_integer() for v in np.concatenate([x, y])):
        x, y = to_exact(to_float(x).astype(np.int64)), to_exact(to_float(y).astype(np.int64))
    exact = is_exact(x) and is_exact(y)
    if not exact:
        x, y = to_float(x), to_float(y)
    A = np.stack([x, y], axis=1)
    T = LinearOperator(A, Lp(2, math.inf), Y)
    F = np.array([[1, 1], [1, -1]], dtype=object) * Fraction(1)
    half = Fraction(1, 2)
    if not exact:
        F, half = to_float(F), 0.5
    fb = factorization_bound(LinearOperator(A @ F, _l2(2), Y), LinearOperator(half * F, T.domain, _l2(2)), "square")
    nuc = nuclear_norm(T)
    formula = math.sqrt(float(Y.norm(x + y)) ** 2 + float(Y.norm(x - y)) ** 2)
    return SquareConstruction(T, float(nuc.value), fb.value, formula, fb.exact)


def john_to_loewner_rotation(p, angle: float) -> LinearOperator:
    """Rotation on ``l_p^2`` scaled so it maps the John ellipsoid onto the Loewner ellipsoid."""
    X = Lp(2, p)
    J, L = john(X), loewner(X)
    scale = float(L.radius / J.radius)
    c, s = math.cos(angle), math.sin(angle)
    return LinearOperator(scale * np.array([[c, -s], [s, c]]), X, X)
