"""Invariants as property tests; integer inputs keep the certified paths exact."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tensor_radius._exact import Surd, as_array
from tensor_radius.convex import HPolytope, VPolytope, enumerate_vertices, polar
from tensor_radius.ellipsoids import bm_distance_euclidean
from tensor_radius.operators import LinearOperator, adjoint, nuclear_norm, operator_norm
from tensor_radius.radius import rho_k, rho_report, tau_infty_bounds, tau_k
from tensor_radius.spaces import Lp, PolyV
from tensor_radius.tensors import Tensor, hs_norm, injective_norm, projective_norm

INF = math.inf
H = LinearOperator(as_array([["1/2", "1/2"], ["1/2", "-1/2"]]), Lp(2, INF), Lp(2, 1))
S = LinearOperator(as_array([[1, "1/3"], ["1/3", 1]]), Lp(2, 1), Lp(2, 1))
HEXAGON = PolyV(VPolytope(as_array([[1, 0], [0, 1], [1, -1]])))

PROPS = settings(max_examples=25, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow])

small_ints = st.integers(-4, 4)
int_matrix = arrays(np.int64, (2, 2), elements=small_ints)
nonzero_matrix = int_matrix.filter(lambda A: np.any(A))
POLY_SPACES = [Lp(2, 1), Lp(2, INF), HEXAGON]
poly_space = st.sampled_from(POLY_SPACES)


def exact(A):
    return as_array(np.asarray(A, dtype=np.int64))


# -- tensor norms -----------------------------------------------------------


@PROPS
@given(arrays(np.float64, (2, 3), elements=st.floats(-5, 5, allow_nan=False)))
def test_hs_squared_below_projective_times_injective(C):
    z = Tensor((Lp(2, 2), Lp(3, 2)), C)
    assert hs_norm(z) ** 2 <= float(projective_norm(z).value) * float(injective_norm(z).value) * (1 + 1e-8) + 1e-8


@PROPS
@given(st.integers(2, 3), st.data())
def test_injective_below_projective(k, data):
    factors = tuple(data.draw(poly_space) for _ in range(k))
    C = data.draw(arrays(np.int64, (2,) * k, elements=small_ints))
    z = Tensor(factors, exact(C))
    assert injective_norm(z).value <= projective_norm(z).value


@PROPS
@given(int_matrix, int_matrix, st.integers(-3, 3), poly_space, poly_space)
def test_norm_axioms(C, D, c, X, Y):
    z, w = Tensor((X, Y), exact(C)), Tensor((X, Y), exact(D))
    zw = Tensor((X, Y), exact(C + D))
    cz = Tensor((X, Y), exact(c * C))
    for norm in (lambda t: injective_norm(t).value, lambda t: projective_norm(t).value):
        assert norm(zw) <= norm(z) + norm(w)
        assert norm(cz) == abs(c) * norm(z)


@PROPS
@given(int_matrix, st.integers(1, 3), st.integers(0, 1), poly_space, poly_space)
def test_norm_one_diagonal_map_is_a_contraction(C, d, slot, X, Y):
    """``diag(1, 1/d)`` on an l_1 or l_inf factor has norm one."""
    Z = [Lp(2, 1), Lp(2, INF)][slot]
    Dg = as_array([[1, 0], [0, Fraction(1, d)]])
    z = Tensor((Z, Y), exact(C))
    mz = Tensor((Z, Y), Dg @ exact(C))
    assert injective_norm(mz).value <= injective_norm(z).value
    assert projective_norm(mz).value <= projective_norm(z).value


@PROPS
@given(arrays(np.int64, (3,), elements=small_ints), arrays(np.int64, (2,), elements=small_ints), poly_space)
def test_crossnorm(x, y, Y):
    X = Lp(3, 1)
    z = Tensor.rank_one((X, Y), (exact(x), exact(y)))
    assert injective_norm(z).value == projective_norm(z).value == X.norm(exact(x)) * Y.norm(exact(y))


# -- convex bodies ----------------------------------------------------------


@PROPS
@given(arrays(np.int64, (4, 2), elements=small_ints))
def test_polar_involution(F):
    assume(np.linalg.matrix_rank(F) == 2)
    P = HPolytope(exact(F))
    V = enumerate_vertices(P).vertices
    back = polar(polar(VPolytope(V))).vertices
    key = lambda M: sorted(tuple(r) if tuple(r) > tuple(-r) else tuple(-r) for r in M)
    assert key(back) == key(V)


# -- operators and tensor radii ---------------------------------------------


@PROPS
@given(nonzero_matrix, poly_space, poly_space)
def test_sandwich(A, X, Y):
    T = LinearOperator(exact(A), X, Y)
    t1, t2 = tau_k(T, 1), tau_k(T, 2)
    nuc = nuclear_norm(T)
    assert t1.certified and nuc.certified
    assert t1.power == operator_norm(T).value
    assert float(t1.value) <= t2.value * (1 + 1e-12)
    if t2.certified:
        assert t2.power <= nuc.value**2


@PROPS
@given(nonzero_matrix, st.integers(2, 3))
def test_tau_of_adjoint(A, k):
    for X, Y in [(Lp(2, INF), Lp(2, 1)), (Lp(2, 1), Lp(2, 1))]:
        T = LinearOperator(exact(A), X, Y)
        r, ra = tau_k(T, k), tau_k(adjoint(T), k)
        assert r.certified and ra.certified
        assert r.power == ra.power


@pytest.mark.parametrize("op", [H, S], ids=["H", "S"])
def test_superadditivity(op):
    powers = {k: tau_k(op, k).power for k in range(1, 5)}
    for k1 in range(1, 4):
        for k2 in range(1, 5 - k1):
            assert powers[k1 + k2] >= powers[k1] * powers[k2]


@PROPS
@given(nonzero_matrix, nonzero_matrix, nonzero_matrix)
def test_ideal_property_for_tau(A, B, M):
    X, Y = Lp(2, INF), Lp(2, 1)
    T = LinearOperator(exact(M), X, Y)
    left = LinearOperator(exact(A), X, X)
    right = LinearOperator(exact(B), Y, Y)
    BTA = right.compose(T).compose(left)
    assume(np.any(np.asarray(BTA.matrix, dtype=float)))
    lhs = tau_k(BTA, 2).power
    rhs = (operator_norm(right).value * operator_norm(left).value) ** 2 * tau_k(T, 2).power
    assert lhs <= rhs


@PROPS
@given(nonzero_matrix)
def test_weak_triangle(A):
    T = LinearOperator(exact(A), Lp(2, 1), Lp(2, 1))
    ST = LinearOperator(S.matrix + T.matrix, S.domain, S.codomain)
    upper_S = tau_infty_bounds(S, kmax=2).upper
    assert tau_k(ST, 2).value <= upper_S + float(nuclear_norm(T).value) + 1e-8


@PROPS
@given(arrays(np.int64, (3, 2), elements=small_ints))
def test_rho_two_below_dimension_power(V):
    assume(np.linalg.matrix_rank(V) == 2)
    r = rho_k(PolyV(VPolytope(exact(V))), 2)
    assert r.certified and r.power <= 2


@pytest.mark.parametrize("X", POLY_SPACES + [Lp(3, 1)], ids=["l1", "linf", "hexagon", "l1_3"])
@pytest.mark.parametrize("k", [2, 3])
def test_rho_k_below_dimension_power(X, k):
    r = rho_k(X, k)
    assert r.value <= X.dim ** (1 - 1 / k) + 1e-8


@PROPS
@given(arrays(np.int64, (3, 2), elements=small_ints))
def test_rho_two_of_dual(V):
    assume(np.linalg.matrix_rank(V) == 2)
    X = PolyV(VPolytope(exact(V)))
    r, rd = rho_k(X, 2), rho_k(X.dual(), 2)
    assert r.certified and rd.certified
    assert r.power == rd.power


def test_submultiplicativity_on_l1():
    r2, r4 = rho_report(Lp(2, 1)), rho_report(Lp(4, 1))
    assert r4.upper <= r2.value**2 + 1e-12
    d2, d4 = bm_distance_euclidean(Lp(2, 1)), bm_distance_euclidean(Lp(4, 1))
    assert d4.lower.value >= d2.upper.value**2 - 1e-12
    assert d4.lower.exact == Surd(Fraction(4), 2)
