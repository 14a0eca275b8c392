"""Injective, projective and Hilbert-Schmidt norms of small dense tensors.

A tensor of order ``k`` over spaces ``X_1, ..., X_k`` is stored as its
coefficient array in the standard bases. Functionals on ``X_i`` are vectors
paired through the standard inner product, so a rank-one functional acts by
full contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np
from scipy.optimize import minimize

from ._exact import Surd, as_array, is_exact, to_float
from .caps import get_caps
from .errors import NoConvergence, NotSupported, SizeCapExceeded
from .simplex import min_l1_combination
from .spaces import (
    EllipsoidBall,
    Lp,
    NormedSpace,
    Schatten,
    crosspolytope_basis,
    euclidean_root,
    require_tensorable,
    space_from_json,
)

_LETTERS = "abcdefghijklmnopqrstuvwxy"


@dataclass(frozen=True, eq=False)
class Tensor:
    factors: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        factors = tuple(self.factors)
        coeffs = self.coeffs
        if not isinstance(coeffs, np.ndarray) or coeffs.dtype == object:
            coeffs = as_array(coeffs)
        if len(factors) < 1 or coeffs.ndim != len(factors):
            raise ValueError(f"coefficient array of order {coeffs.ndim} with {len(factors)} factors")
        if coeffs.shape != tuple(X.dim for X in factors):
            raise ValueError(f"shape {coeffs.shape} does not match factor dimensions")
        cap = get_caps().tensor_size
        if coeffs.size > cap:
            raise SizeCapExceeded(f"tensor of size {coeffs.size} exceeds the cap {cap}")
        for X in factors:
            require_tensorable(X)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def exact(self) -> bool:
        return is_exact(self.coeffs)

    @classmethod
    def rank_one(cls, factors, vectors) -> "Tensor":
        return cls(tuple(factors), outer(vectors))

    def dual_factors(self) -> tuple:
        return tuple(X.dual() for X in self.factors)

    def to_json(self) -> dict:
        C = self.coeffs
        data = C.tolist() if not self.exact else _nested_str(C)
        return {"factors": [X.to_json() for X in self.factors], "coeffs": data}

    @classmethod
    def from_json(cls, obj) -> "Tensor":
        return cls(tuple(space_from_json(f) for f in obj["factors"]), as_array(obj["coeffs"]))


def _nested_str(C):
    if C.ndim == 0:
        v = C.item()
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return [_nested_str(c) for c in C]


def outer(vectors) -> np.ndarray:
    """Outer product ``v_1 (x) ... (x) v_k`` as a coefficient array."""
    arrs = [np.asarray(v) if isinstance(v, np.ndarray) else as_array(v) for v in vectors]
    if not all(is_exact(a) for a in arrs):
        arrs = [to_float(a) for a in arrs]
    return reduce(np.multiply.outer, arrs)


def contract_slot(C: np.ndarray, A: np.ndarray, slot: int) -> np.ndarray:
    """Apply the matrix ``A`` to axis ``slot`` of ``C``."""
    return np.moveaxis(np.tensordot(A, C, axes=([1], [slot])), 0, slot)


def apply_kron(C: np.ndarray, mats) -> np.ndarray:
    for i, A in enumerate(mats):
        if A is not None:
            C = contract_slot(C, A, i)
    return C


def pair(C: np.ndarray, functionals) -> object:
    """Full contraction ``<f_1 (x) ... (x) f_k, C>``."""
    out = C
    for f in reversed(functionals):
        out = out @ f
    return out


def _root_or_eye(X):
    R = euclidean_root(X)
    return np.eye(X.dim) if R is None else R


# ---------------------------------------------------------------------------
# Results


@dataclass(frozen=True)
class RankOneWitness:
    functionals: tuple
    value: object


@dataclass(frozen=True)
class InjectiveResult:
    value: object
    witness: RankOneWitness
    certified: bool
    method: str

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class NuclearDecomposition:
    """``z = sum_i w_i x_i^(1) (x) ... (x) x_i^(k)`` with ``||x_i^(j)|| <= 1``."""

    atoms: tuple
    weights: np.ndarray

    @property
    def cost(self):
        return sum(abs(w) for w in self.weights)

    def reconstruct(self) -> np.ndarray:
        terms = [w * outer(a) for w, a in zip(self.weights, self.atoms)]
        return reduce(np.add, terms)


@dataclass(frozen=True)
class ProjectiveResult:
    """``value`` is an upper bound (exact when certified), ``lower`` a lower bound.

    ``dual`` is a coefficient array ``y`` with ``<y, z> = lower`` whose
    injective norm on the dual spaces is at most one.
    """

    value: object
    lower: object
    decomposition: NuclearDecomposition | None
    dual: np.ndarray | None
    certified: bool
    method: str

    def __float__(self):
        return float(self.value)

    @property
    def gap(self) -> float:
        return float(self.value) - float(self.lower)


# ---------------------------------------------------------------------------
# Batched one-slot maximization: argmax of <lambda, w> over B_{X*}


def dual_argmax(X: NormedSpace, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``w``: returns ``(||w||_X, lambda)`` with ``lambda`` in ``B_{X*}``."""
    W = np.atleast_2d(W)
    if isinstance(X, Lp):
        p = X.p
        if p == 1:
            return np.abs(W).sum(axis=1), np.where(W >= 0, 1.0, -1.0)
        if p == math.inf:
            j = np.argmax(np.abs(W), axis=1)
            L = np.zeros_like(W)
            rows = np.arange(len(W))
            L[rows, j] = np.where(W[rows, j] >= 0, 1.0, -1.0)
            return np.abs(W[rows, j]), L
        if p == 2:
            nrm = np.linalg.norm(W, axis=1)
            return nrm, W / np.where(nrm > 0, nrm, 1.0)[:, None]
        pf = float(p)
        nrm = np.linalg.norm(W, ord=pf, axis=1)
        safe = np.where(nrm > 0, nrm, 1.0)[:, None]
        return nrm, np.sign(W) * (np.abs(W) / safe) ** (pf - 1.0)
    if isinstance(X, EllipsoidBall):
        MW = W @ X.M
        nrm = np.sqrt(np.maximum(np.einsum("ij,ij->i", MW, W), 0.0))
        return nrm, MW / np.where(nrm > 0, nrm, 1.0)[:, None]
    if X.polyhedral:
        F = to_float(X.dual_ball.vertices)
        P = W @ F.T
        j = np.argmax(np.abs(P), axis=1)
        rows = np.arange(len(W))
        s = np.where(P[rows, j] >= 0, 1.0, -1.0)
        return np.abs(P[rows, j]), F[j] * s[:, None]
    raise NotSupported(f"no one-slot oracle for {X!r}")


# ---------------------------------------------------------------------------
# Injective norm


def _injective_order_one(z: Tensor) -> InjectiveResult:
    X = z.factors[0]
    val, f = X.dual().support(z.coeffs)
    return InjectiveResult(val, RankOneWitness((f,), val), True, "dual-norm")


def _scan_plan(z: Tensor):
    """Slots to enumerate and free slots for the exhaustive scan, or ``None``."""
    poly = [i for i, X in enumerate(z.factors) if X.polyhedral]
    other = [i for i, X in enumerate(z.factors) if not X.polyhedral]
    if len(other) > 2 or (len(other) == 2 and not all(z.factors[i].euclidean for i in other)):
        return None
    if not other:
        free = max(poly, key=lambda i: (len(z.factors[i].dual_ball.vertices), i))
        other = [free]
        poly = [i for i in poly if i != free]
    count = math.prod(len(z.factors[i].dual_ball.vertices) for i in poly)
    if count > get_caps().vertex_tuples:
        return None
    return poly, other


def _injective_scan(z: Tensor, plan) -> InjectiveResult:
    enum, free = plan
    C = z.coeffs
    exact = z.exact and all(z.factors[i].exact for i in enum) and len(free) == 1 and z.factors[free[0]].polyhedral
    if not exact:
        C = to_float(C)
    Fs = {}
    for i in enum:
        F = z.factors[i].dual_ball.vertices
        Fs[i] = F if exact else to_float(F)
        C = contract_slot(C, Fs[i], i)
    W = np.transpose(C, enum + free)
    counts = [len(Fs[i]) for i in enum]
    W = W.reshape((math.prod(counts),) + tuple(z.factors[i].dim for i in free))
    Wf = to_float(W)
    if len(free) == 1:
        X = z.factors[free[0]]
        vals = X.norm_rows(Wf)
        t = int(np.argmax(vals))
        if exact:
            near = np.flatnonzero(vals >= vals[t] - 1e-9 * (1 + abs(vals[t])))
            exact_vals = {int(s): X.norm(W[s]) for s in near}
            t = max(exact_vals, key=lambda s: (exact_vals[s], -s))
            value = exact_vals[t]
        else:
            value = float(vals[t])
        _, g = X.dual().support(W[t])
        free_funcs = {free[0]: g}
    else:
        R1, R2 = (_root_or_eye(z.factors[i]) for i in free)
        Wt = np.einsum("ij,tjk,lk->til", R1, Wf, R2)
        svals = np.linalg.svd(Wt, compute_uv=False)[:, 0]
        t = int(np.argmax(svals))
        U, s, Vt = np.linalg.svd(Wt[t])
        value = float(s[0])
        free_funcs = {free[0]: R1.T @ U[:, 0], free[1]: R2.T @ Vt[0]}
    idx = np.unravel_index(t, counts) if counts else ()
    funcs = []
    for i in range(z.order):
        if i in Fs:
            funcs.append(Fs[i][idx[enum.index(i)]])
        else:
            funcs.append(free_funcs[i])
    achieved = pair(z.coeffs if exact else to_float(z.coeffs), funcs)
    if achieved < 0:
        funcs[0] = -funcs[0]
        achieved = -achieved
    return InjectiveResult(value, RankOneWitness(tuple(funcs), achieved), True, "vertex-scan")


def _einsum_spec(k: int, skip: int) -> str:
    idx = _LETTERS[:k]
    ops = [idx] + ["Z" + idx[j] for j in range(k) if j != skip]
    return ",".join(ops) + "->Z" + idx[skip]


def alternating_ascent(C: np.ndarray, factors, starts: int = 64, seed: int = 0, max_sweeps: int = 200, rtol: float = 1e-12):
    """Multistart block ascent for ``sup <f_1 (x) ... (x) f_k, C>`` over dual balls.

    Returns ``(value, functionals)`` of the best start; all starts run in one batch.
    """
    C = to_float(C)
    k = C.ndim
    rng = np.random.default_rng(seed)
    L = []
    for X in factors:
        _, f = dual_argmax(X, rng.standard_normal((starts, X.dim)))
        L.append(f)
    specs = [_einsum_spec(k, i) for i in range(k)]
    prev = np.full(starts, -np.inf)
    vals = prev
    for _ in range(max_sweeps):
        for i, X in enumerate(factors):
            others = [L[j] for j in range(k) if j != i]
            W = np.einsum(specs[i], C, *others)
            vals, L[i] = dual_argmax(X, W)
        if np.all(vals - prev <= rtol * np.maximum(np.abs(vals), 1e-300)):
            break
        prev = vals
    best = int(np.argmax(vals))
    return float(vals[best]), tuple(l[best] for l in L)


def injective_norm(z: Tensor, starts: int = 64, seed: int = 0, method: str = "auto") -> InjectiveResult:
    """Injective norm ``sup |<f_1 (x) ... (x) f_k, z>|`` over dual unit balls.

    Exact (certified) when all but at most one factor are polyhedral, or all
    but two with those two Euclidean; otherwise a multistart lower bound.
    """
    if z.order == 1:
        return _injective_order_one(z)
    if method not in ("auto", "scan", "ascent"):
        raise ValueError(f"unknown method {method!r}")
    plan = _scan_plan(z) if method != "ascent" else None
    if plan is not None:
        return _injective_scan(z, plan)
    if method == "scan":
        raise NotSupported("exhaustive scan unavailable for these factors")
    value, funcs = alternating_ascent(z.coeffs, z.factors, starts=starts, seed=seed)
    return InjectiveResult(value, RankOneWitness(funcs, value), False, "alternating-ascent")


# ---------------------------------------------------------------------------
# Projective norm


def _projective_order_one(z: Tensor) -> ProjectiveResult:
    X = z.factors[0]
    c = z.coeffs
    val, f = X.dual().support(c)
    if val == 0:
        dec = NuclearDecomposition((), np.array([]))
    else:
        dec = NuclearDecomposition((((c / val if z.exact else to_float(c) / val),),), np.array([val], dtype=object if z.exact else float))
    return ProjectiveResult(val, val, dec, f, True, "norm")


def _all_euclidean(z: Tensor) -> bool:
    return all(X.euclidean and not isinstance(X, Schatten) for X in z.factors)


def _projective_svd(z: Tensor) -> ProjectiveResult:
    R1, R2 = (_root_or_eye(X) for X in z.factors)
    Wt = R1 @ to_float(z.coeffs) @ R2.T
    U, s, Vt = np.linalg.svd(Wt, full_matrices=False)
    value = float(s.sum())
    atoms = tuple((np.linalg.solve(R1, U[:, i]), np.linalg.solve(R2, Vt[i])) for i in range(len(s)) if s[i] > 0)
    dual = R1.T @ (U @ Vt) @ R2
    dec = NuclearDecomposition(atoms, s[s > 0])
    return ProjectiveResult(value, value, dec, dual, True, "svd")


def _projective_crosspolytope(z: Tensor, Qs) -> ProjectiveResult:
    from ._exact import exact_inv

    exact = z.exact and all(is_exact(Q) for Q in Qs)
    C = z.coeffs if exact else to_float(z.coeffs)
    Qs = [Q if exact else to_float(Q) for Q in Qs]
    Qinv = [exact_inv(Q) if exact else np.linalg.inv(Q) for Q in Qs]
    c = apply_kron(C, Qinv)
    value = np.abs(c).sum() if not exact else sum(abs(v) for v in c.ravel())
    one = Fraction(1) if exact else 1.0
    signs = np.vectorize(lambda v: one if v >= 0 else -one, otypes=[object if exact else float])(c)
    dual = apply_kron(signs, [Qi.T for Qi in Qinv])
    atoms, weights = [], []
    for idx in zip(*np.nonzero(to_float(c))):
        atoms.append(tuple(Qs[j][:, idx[j]] for j in range(z.order)))
        weights.append(c[idx])
    dec = NuclearDecomposition(tuple(atoms), np.array(weights, dtype=object if exact else float))
    return ProjectiveResult(value, value, dec, dual, True, "crosspolytope")


def _atom_tuples(vertex_sets):
    import itertools

    return list(itertools.product(*[range(len(V)) for V in vertex_sets]))


def _projective_lp(z: Tensor) -> ProjectiveResult:
    Vs = [X.ball.vertices for X in z.factors]
    count = math.prod(len(V) for V in Vs)
    if count > get_caps().vertex_tuples:
        raise SizeCapExceeded(f"{count} product atoms exceed the cap")
    exact = z.exact and all(is_exact(V) for V in Vs) and z.coeffs.size <= get_caps().lp_rows_exact
    if not exact:
        Vs = [to_float(V) for V in Vs]
    tuples = _atom_tuples(Vs)
    atoms = np.array([outer([Vs[j][t[j]] for j in range(z.order)]).ravel() for t in tuples], dtype=object if exact else float)
    target = z.coeffs.ravel() if exact else to_float(z.coeffs).ravel()
    sol = min_l1_combination(atoms, target, exact)
    w = sol.x
    keep = [i for i in range(len(w)) if w[i] != 0]
    dec = NuclearDecomposition(
        tuple(tuple(Vs[j][tuples[i][j]] for j in range(z.order)) for i in keep),
        np.array([w[i] for i in keep], dtype=object if exact else float),
    )
    dual = np.asarray(sol.y).reshape(z.coeffs.shape)
    return ProjectiveResult(sol.value, sol.value, dec, dual, True, "atom-lp")


def _initial_atoms(X: NormedSpace) -> np.ndarray:
    if X.polyhedral:
        return to_float(X.ball.vertices)
    E = np.eye(X.dim)
    return E / X.norm_rows(E)[:, None]


def _projective_colgen(z: Tensor, tol: float, max_iter: int, starts: int, seed: int) -> ProjectiveResult:
    import itertools

    C = to_float(z.coeffs)
    target = C.ravel()
    base = [_initial_atoms(X) for X in z.factors]
    atom_list = [tuple(vs) for vs in itertools.product(*base)]
    duals = z.dual_factors()
    last = None
    for it in range(max_iter):
        atoms = np.array([outer(a).ravel() for a in atom_list])
        sol = min_l1_combination(atoms, target, exact=False)
        y = np.asarray(sol.y).reshape(C.shape)
        price = injective_norm(Tensor(duals, y), starts=starts, seed=seed + it)
        pv = float(price.value)
        lower = float(sol.value) / pv if pv > 1 else float(sol.value)
        keep = [i for i in range(len(atom_list)) if abs(sol.x[i]) > 1e-14]
        dec = NuclearDecomposition(tuple(atom_list[i] for i in keep), np.asarray(sol.x)[keep])
        gap_ok = float(sol.value) - lower <= 1e-6 * max(1.0, float(sol.value))
        last = ProjectiveResult(
            float(sol.value),
            lower,
            dec,
            y / max(pv, 1.0),
            bool(price.certified and gap_ok),
            "column-generation",
        )
        if pv <= 1 + tol:
            return last
        atom_list.append(tuple(np.asarray(f, dtype=float) for f in price.witness.functionals))
    raise NoConvergence("column generation hit the iteration cap", partial=last)


def projective_norm(
    z: Tensor, method: str = "auto", tol: float = 1e-7, max_iter: int = 200, starts: int = 64, seed: int = 0
) -> ProjectiveResult:
    """Projective norm: the least cost of a decomposition into elementary tensors."""
    if z.order == 1:
        return _projective_order_one(z)
    if method not in ("auto", "fast", "lp", "svd", "colgen"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "svd") and z.order == 2 and _all_euclidean(z):
        return _projective_svd(z)
    if method in ("auto", "fast", "lp") and all(X.polyhedral for X in z.factors):
        if method != "lp":
            Qs = [crosspolytope_basis(X) for X in z.factors]
            if all(Q is not None for Q in Qs):
                return _projective_crosspolytope(z, Qs)
        return _projective_lp(z)
    return _projective_colgen(z, tol, max_iter, starts, seed)


def hs_norm(z: Tensor) -> float:
    """Euclidean norm of the coefficients, in the inner product of each Euclidean factor."""
    C = to_float(z.coeffs)
    mats = [euclidean_root(X) if X.euclidean else None for X in z.factors]
    return float(np.linalg.norm(apply_kron(C, mats)))


# ---------------------------------------------------------------------------
# Entangled tensors in (l_2^2)^{(x) k}


def _spectral_2x2(A: np.ndarray) -> np.ndarray:
    """Largest singular value of a stack of 2x2 matrices."""
    fro2 = np.einsum("...ij,...ij->...", A, A)
    det = A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
    disc = np.sqrt(np.maximum(fro2 * fro2 - 4 * det * det, 0.0))
    return np.sqrt(np.maximum((fro2 + disc) / 2, 0.0))


def _circle_grid(N: int) -> np.ndarray:
    theta = np.pi * np.arange(N) / N
    return np.stack([np.cos(theta), np.sin(theta)], axis=1)


def _contract_leading(W: np.ndarray, G: np.ndarray, k: int, batch: int = 0) -> np.ndarray:
    """Contract the first ``k - 2`` tensor slots (after ``batch`` axes) with the rows of ``G``."""
    for j in range(k - 2):
        W = np.moveaxis(np.tensordot(W, G, axes=([batch + j], [1])), -1, batch + j)
    return W


def grid_injective(C: np.ndarray, N: int, chunk: int = 1 << 20) -> float:
    """Max over a grid of ``N`` angles per leading slot of the exact two-slot spectral norm.

    This is a lower bound on the injective norm of ``C`` over ``l_2^2`` factors.
    """
    C = np.asarray(C, dtype=float)
    k = C.ndim
    if k == 1:
        return float(np.linalg.norm(C))
    if k == 2:
        return float(np.linalg.norm(C, 2))
    G = _circle_grid(N)
    step = max(1, chunk // (N ** (k - 3) * 4))
    best = 0.0
    for s in range(0, N, step):
        W = np.tensordot(G[s : s + step], C, axes=([1], [0]))
        W = _contract_leading(W, G, k - 1, batch=1)
        best = max(best, float(_spectral_2x2(W).max()))
    return best


def certified_injective_l2(C: np.ndarray, N: int) -> float:
    """Certified upper bound on the injective norm over ``(l_2^2)^{(x) k}``.

    Each unit vector of a leading slot is within angle ``pi/(2N)`` of a grid
    point (up to sign). Along one slot the pairing is a sinusoid in the angle,
    so snapping a maximizer to the grid slot by slot loses at most a factor
    ``cos(pi/(2N))`` per leading slot.
    """
    C = np.asarray(C, dtype=float)
    k = C.ndim
    if k <= 2:
        return grid_injective(C, N) * (1 + 1e-14)
    g = grid_injective(C, N)
    return g / math.cos(math.pi / (2 * N)) ** (k - 2) * (1 + 1e-12)


def _bell(k: int) -> np.ndarray:
    bell = np.eye(2) / math.sqrt(2)
    return reduce(np.multiply.outer, [bell] * (k // 2))


def _odd_core() -> np.ndarray:
    W = np.zeros((2, 2, 2))
    W[0, 0, 0], W[0, 1, 1], W[1, 0, 1], W[1, 1, 0] = 0.5, -0.5, 0.5, 0.5
    return W


def _smoothed_objective(N: int, beta: float, k: int):
    G = _circle_grid(N)

    def f(x):
        nrm = np.linalg.norm(x)
        C = (x / nrm).reshape((2,) * k)
        W = _contract_leading(C, G, k)
        # W has shape (N,)*(k-2) + (2, 2)
        flat = W.reshape(-1, 2, 2)
        U, s, Vt = np.linalg.svd(flat)
        top = s[:, 0]
        m = top.max()
        wts = np.exp(beta * (top - m))
        Z = wts.sum()
        val = m + math.log(Z) / beta
        wts /= Z
        # gradient of top singular value w.r.t. C: grid vectors (x) u v^T
        uv = np.einsum("t,ti,tj->tij", wts, U[:, :, 0], Vt[:, 0, :]).reshape(W.shape)
        grad = uv
        for j in reversed(range(k - 2)):
            grad = np.tensordot(grad, G, axes=([j], [0]))
            grad = np.moveaxis(grad, -1, j)
        grad = grad.ravel()
        g = (grad - (grad @ (x / nrm)) * (x / nrm)) / nrm
        return val, g

    return f


def refine_entangled(C: np.ndarray, rounds=((24, 60.0), (24, 400.0), (48, 2000.0))) -> np.ndarray:
    """Locally decrease the injective norm of a unit tensor over ``l_2^2`` factors."""
    k = C.ndim
    x = np.asarray(C, dtype=float).ravel()
    x = x / np.linalg.norm(x)
    for N, beta in rounds:
        res = minimize(_smoothed_objective(N, beta, k), x, jac=True, method="L-BFGS-B", options={"maxiter": 300})
        x = res.x / np.linalg.norm(res.x)
    return x.reshape(C.shape)


@dataclass(frozen=True)
class EntangledWitness:
    tensor: Tensor
    eps_upper: float
    ratio_bound: float
    exact: Surd | None
    certified: bool
    source: str


def _screen_estimate(Cs: np.ndarray, N: int) -> np.ndarray:
    """Grid estimate of the injective norm for a batch of order-k tensors over l_2^2."""
    k = Cs.ndim - 1
    if k == 2:
        return np.linalg.norm(Cs, ord=2, axis=(1, 2))
    W = _contract_leading(Cs, _circle_grid(N), k, batch=1)
    return _spectral_2x2(W).reshape(len(Cs), -1).max(axis=1)


def entangled_witness(
    n: int,
    k: int,
    trials: int = 10000,
    seed: int = 0,
    refine: int = 4,
    certify_grid: int | None = None,
) -> EntangledWitness:
    """Search for ``z`` in ``(l_2^n)^{(x) k}`` with small injective norm.

    Gaussian tensors are screened by a coarse grid estimate, the best few are
    refined by local descent of a smoothed injective norm, and the winner is
    certified by a fine grid with a rigorous inflation factor. Products of
    maximally entangled pairs are included as candidates. The returned bound
    ``(hs/eps_upper)^(2/k)`` is a certified lower bound on ``rho_k(l_2^n)``.
    """
    if n != 2:
        raise NotSupported("certified injective bounds are implemented for n = 2 only")
    if n**k > get_caps().tensor_size:
        raise SizeCapExceeded(f"{n}^{k} exceeds the tensor cap")
    if k < 1:
        raise ValueError("order must be positive")
    if k == 1:
        C = np.array([1.0, 0.0])
        return EntangledWitness(Tensor((Lp(2, 2),), C), 1.0, 1.0, Surd(Fraction(1)), True, "trivial")
    rng = np.random.default_rng(seed)
    candidates = []
    Cs = rng.standard_normal((trials,) + (2,) * k)
    Cs /= np.linalg.norm(Cs.reshape(trials, -1), axis=1).reshape((trials,) + (1,) * k)
    est = np.concatenate([_screen_estimate(Cs[s : s + 2048], 16) for s in range(0, trials, 2048)])
    order = np.argsort(est, kind="stable")
    for i in order[: max(refine, 1)]:
        candidates.append(("sampled", Cs[i]))
        if k >= 3 and refine:
            candidates.append(("refined", refine_entangled(Cs[i])))
    exact = {}
    if k % 2 == 0:
        candidates.append(("entangled-pairs", _bell(k)))
        exact["entangled-pairs"] = Surd(Fraction(2), 2)
    elif k >= 3:
        candidates.append(("odd-core", reduce(np.multiply.outer, [_odd_core()] + [np.eye(2) / math.sqrt(2)] * ((k - 3) // 2))))
    N = certify_grid or {2: 1, 3: 200000, 4: 2000}.get(k, 64)
    best = None
    for source, C in candidates:
        C = C / np.linalg.norm(C)
        eps = certified_injective_l2(C, N)
        bound = (1.0 / eps) ** (2.0 / k)
        ex = exact.get(source)
        if ex is not None:
            bound = float(ex)
            eps = 2.0 ** (-k / 4)
        key = (bound, ex is not None)
        if best is None or key > best[0]:
            best = (key, source, C, eps, bound, ex)
    _, source, C, eps, bound, ex = best
    return EntangledWitness(Tensor((Lp(2, 2),) * k, C), eps, bound, ex, True, source)
