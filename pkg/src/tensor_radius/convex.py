"""Origin-symmetric polytopes: H/V representations, polarity, vertex
enumeration (double description) and linear programming.

Both representations describe centrally symmetric bodies:

* ``HPolytope(facets)`` is ``{x : |<a_i, x>| <= 1 for all i}``;
* ``VPolytope(vertices)`` is ``conv{+-v_j}``.

Coordinates are exact (``Fraction`` object arrays) whenever the input is, and
float otherwise. Float mode uses an absolute/relative tolerance of ``1e-9``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import simplex
from ._exact import as_array, is_exact, matrix_rank, to_float
from .caps import get_caps
from .errors import (
    DimensionCapExceeded,
    DimensionMismatch,
    UnboundedBody,
)

FLOAT_TOL = 1e-9


def _is_zero(v, exact: bool, tol: float = FLOAT_TOL) -> bool:
    return v == 0 if exact else abs(v) <= tol


def canonical_sign(v: np.ndarray, exact: bool) -> np.ndarray:
    """Flip ``v`` so its first nonzero coordinate is positive."""
    for x in v:
        if not _is_zero(x, exact):
            return v if x > 0 else -v
    return v


def canonicalize(points, exact: bool) -> np.ndarray:
    """One representative per +- pair, zero vectors dropped, rows sorted."""
    pts = np.asarray(points, dtype=object if exact else float)
    if pts.size == 0:
        return pts.reshape(0, pts.shape[-1] if pts.ndim == 2 else 0)
    reps = [canonical_sign(p, exact) for p in pts]
    reps = [r for r in reps if not all(_is_zero(x, exact) for x in r)]
    if not reps:
        return np.empty((0, pts.shape[1]), dtype=pts.dtype)
    if exact:
        uniq = sorted({tuple(r) for r in reps})
        return np.array(uniq, dtype=object).reshape(len(uniq), pts.shape[1])
    arr = np.array(reps, dtype=float)
    arr = arr[np.lexsort(arr.T[::-1])]
    keep = [arr[0]]
    for row in arr[1:]:
        if not any(np.max(np.abs(row - k)) <= FLOAT_TOL * max(1.0, np.max(np.abs(k))) for k in keep):
            keep.append(row)
    return np.array(keep)


@dataclass(frozen=True, eq=False)
class HPolytope:
    facets: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        F = as_array(self.facets) if not isinstance(self.facets, np.ndarray) or self.facets.dtype.kind in "iub" else self.facets
        if F.ndim != 2 or F.shape[0] == 0:
            raise ValueError("facets must be a non-empty 2-D array")
        object.__setattr__(self, "dim", F.shape[1])
        if matrix_rank(F, is_exact(F)) < F.shape[1]:
            raise UnboundedBody("facet normals do not span the space")
        object.__setattr__(self, "facets", canonicalize(F, is_exact(F)))

    @property
    def exact(self) -> bool:
        return is_exact(self.facets)

    def contains(self, x, tol: float = FLOAT_TOL) -> bool:
        vals = np.abs(self.facets @ np.asarray(x))
        return bool(np.all(vals <= 1)) if self.exact and is_exact(np.asarray(x)) else bool(
            np.all(to_float(vals) <= 1 + tol)
        )

    def gauge(self, x):
        return np.max(np.abs(self.facets @ x))

    def __eq__(self, other):
        return isinstance(other, HPolytope) and _same_rows(self.facets, other.facets)

    def __repr__(self):
        return f"HPolytope(dim={self.dim}, facets={len(self.facets)})"


@dataclass(frozen=True, eq=False)
class VPolytope:
    vertices: np.ndarray
    dim: int = field(init=False)
    prune: bool = True

    def __post_init__(self):
        V = as_array(self.vertices) if not isinstance(self.vertices, np.ndarray) or self.vertices.dtype.kind in "iub" else self.vertices
        if V.ndim != 2 or V.shape[0] == 0:
            raise ValueError("vertices must be a non-empty 2-D array")
        object.__setattr__(self, "dim", V.shape[1])
        exact = is_exact(V)
        if matrix_rank(V, exact) < V.shape[1]:
            raise ValueError("vertices do not span the space")
        V = canonicalize(V, exact)
        if self.prune:
            V = _prune_redundant(V, exact)
        object.__setattr__(self, "vertices", V)

    @property
    def exact(self) -> bool:
        return is_exact(self.vertices)

    def support(self, c):
        """``max_{x in P} <c, x>``, scanned over the vertices."""
        vals = self.vertices @ np.asarray(c)
        return np.max(np.abs(vals))

    def __eq__(self, other):
        return isinstance(other, VPolytope) and _same_rows(self.vertices, other.vertices)

    def __repr__(self):
        return f"VPolytope(dim={self.dim}, vertices={len(self.vertices)})"


def _same_rows(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    if is_exact(a) and is_exact(b):
        return bool(np.all(a == b))
    return bool(np.allclose(to_float(a), to_float(b), atol=1e-8))


def _prune_redundant(V: np.ndarray, exact: bool) -> np.ndarray:
    """Drop points lying in the symmetric hull of the others."""
    keep = list(range(len(V)))
    n = V.shape[1]
    for j in range(len(V)):
        others = [i for i in keep if i != j]
        if len(others) < n or matrix_rank(V[others], exact) < n:
            continue
        sol = simplex.min_l1_combination(V[others], V[j], exact)
        if (sol.value <= 1) if exact else (sol.value <= 1 + FLOAT_TOL):
            keep.remove(j)
    return V[keep]


@dataclass(frozen=True)
class LPResult:
    value: object
    maximizer: np.ndarray
    status: str = "optimal"


def lp_max(c, P: HPolytope | VPolytope, exact: bool | None = None) -> LPResult:
    """Maximize ``<c, x>`` over the polytope."""
    c = as_array(c) if not isinstance(c, np.ndarray) else c
    if c.shape != (P.dim,):
        raise DimensionMismatch(f"objective has shape {c.shape}, polytope dim {P.dim}")
    if isinstance(P, VPolytope):
        V = P.vertices
        if not is_exact(c):
            V = to_float(V)
        vals = V @ c
        i = int(np.argmax(np.abs(to_float(vals))))
        if is_exact(vals):
            # exact recheck among float near-ties
            fv = np.abs(to_float(vals))
            cands = np.flatnonzero(fv >= fv[i] - 1e-9 * (1 + fv[i]))
            i = max(cands, key=lambda t: abs(vals[t]))
        x = V[i] if vals[i] >= 0 else -V[i]
        return LPResult(abs(vals[i]), x)
    if exact is None:
        exact = P.exact and is_exact(c)
    F = P.facets if exact else to_float(P.facets)
    sol = simplex.max_over_symmetric_hrep(c if exact else to_float(c), F, exact)
    return LPResult(sol.value, sol.x)


def polar(P: HPolytope | VPolytope) -> HPolytope | VPolytope:
    """Polar body in the opposite representation."""
    if isinstance(P, VPolytope):
        return HPolytope(P.vertices)
    # facets of P are the candidate vertices of the polar; redundant ones are pruned
    return VPolytope(P.facets, prune=len(P.facets) > P.dim)


def enumerate_vertices(P: HPolytope, exact: bool | None = None) -> VPolytope:
    """Extreme points of ``P`` (one per +- pair), by the double description method."""
    caps = get_caps()
    if P.dim > caps.vertex_dim:
        raise DimensionCapExceeded(f"dimension {P.dim} exceeds cap {caps.vertex_dim}")
    if len(P.facets) > caps.facets:
        raise DimensionCapExceeded(f"{len(P.facets)} facets exceed cap {caps.facets}")
    if exact is None:
        exact = P.exact
    F = P.facets if exact else to_float(P.facets)
    if len(F) == P.dim:
        verts = _parallelotope_vertices(F, exact)
    else:
        verts = double_description(F, exact)
    return VPolytope(verts, prune=False)


def _parallelotope_vertices(F, exact: bool) -> np.ndarray:
    from ._exact import exact_inv

    n = F.shape[0]
    Pinv = exact_inv(F) if exact else np.linalg.inv(F)
    signs = _sign_matrix(n, exact)
    return (Pinv @ signs.T).T


def _sign_matrix(n: int, exact: bool) -> np.ndarray:
    """All sign vectors of length ``n`` with first entry +1, one per row."""
    count = 1 << (n - 1)
    bits = (np.arange(count)[:, None] >> np.arange(n - 2, -1, -1)[None, :]) & 1 if n > 1 else np.zeros((1, 0), int)
    S = np.ones((count, n), dtype=int)
    S[:, 1:] = 1 - 2 * bits
    if exact:
        out = np.empty(S.shape, dtype=object)
        out.ravel()[:] = [Fraction(int(v)) for v in S.ravel()]
        return out
    return S.astype(float)


def double_description(F, exact: bool) -> np.ndarray:
    """Vertices of ``{x : |F x| <= 1}`` via the double description method.

    Works on the homogenized cone ``{(t, x) : t - F x >= 0, t + F x >= 0, t >= 0}``.
    Rays are combined pairwise only when combinatorially adjacent.
    """
    F = np.asarray(F, dtype=object if exact else float)
    m, n = F.shape
    d = n + 1
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    rows = [np.array([one] + [zero] * n, dtype=F.dtype)]
    for a in F:
        rows.append(np.concatenate([[one], -a]))
        rows.append(np.concatenate([[one], a]))
    H = np.array(rows, dtype=F.dtype)

    def zero_test(v):
        return _is_zero(v, exact, 1e-10)

    # initial simplicial cone from d independent rows
    chosen = []
    for i in range(len(H)):
        if matrix_rank(H[chosen + [i]], exact) == len(chosen) + 1:
            chosen.append(i)
            if len(chosen) == d:
                break
    if len(chosen) < d:
        raise UnboundedBody("constraints do not define a pointed cone")
    if exact:
        from ._exact import exact_inv

        R0 = exact_inv(H[chosen])
    else:
        R0 = np.linalg.inv(H[chosen])
    rays = [_normalize_ray(R0[:, j], exact) for j in range(d)]
    processed = list(chosen)

    def zero_set(r):
        mask = 0
        for idx in processed:
            if zero_test(H[idx] @ r):
                mask |= 1 << idx
        return mask

    zsets = [zero_set(r) for r in rays]
    for i in range(len(H)):
        if i in chosen:
            continue
        h = H[i]
        vals = [h @ r for r in rays]
        pos = [j for j, v in enumerate(vals) if not zero_test(v) and v > 0]
        neg = [j for j, v in enumerate(vals) if not zero_test(v) and v < 0]
        zer = [j for j, v in enumerate(vals) if zero_test(v)]
        new_rays, new_z = [], []
        # holders[c]: bitmask of the rays whose zero set contains constraint c
        holders = {}
        for j, z in enumerate(zsets):
            while z:
                low = z & -z
                c = low.bit_length() - 1
                holders[c] = holders.get(c, 0) | (1 << j)
                z ^= low
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if common.bit_count() < d - 2:
                    continue
                # adjacent iff no third ray's zero set contains the common one
                pair_mask = (1 << p) | (1 << q)
                inside = -1
                c_bits = common
                while c_bits and inside != pair_mask:
                    low = c_bits & -c_bits
                    inside &= holders[low.bit_length() - 1]
                    c_bits ^= low
                if inside != pair_mask:
                    continue
                r = vals[p] * rays[q] - vals[q] * rays[p]
                new_rays.append(_normalize_ray(r, exact))
                new_z.append(common | (1 << i))
        keep = pos + zer
        rays = [rays[j] for j in keep] + new_rays
        zsets = [zsets[j] | ((1 << i) if j in zer else 0) for j in keep] + new_z
        processed.append(i)
        if len(rays) > get_caps().vertices * 2:
            raise DimensionCapExceeded("too many intermediate rays")
    verts = []
    for r in rays:
        if zero_test(r[0]):
            raise UnboundedBody("recession direction found")
        verts.append(r[1:] / r[0])
    return canonicalize(np.array(verts, dtype=F.dtype), exact)


def _normalize_ray(r, exact: bool):
    if exact:
        m = max((abs(v) for v in r), default=Fraction(0))
        return r / m if m != 0 else r
    m = np.max(np.abs(r))
    return r / m if m > 0 else r


def vertices_of(P: HPolytope | VPolytope) -> np.ndarray:
    return P.vertices if isinstance(P, VPolytope) else enumerate_vertices(P).vertices


def facets_of(P: HPolytope | VPolytope) -> np.ndarray:
    return P.facets if isinstance(P, HPolytope) else enumerate_vertices(polar(P)).vertices
