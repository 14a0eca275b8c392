import math
from fractions import Fraction

import numpy as np
import pytest

from tensor_radius._exact import Surd, as_array, exact_inv, exact_rank, exact_solve, parse_scalar, surd_power
from tensor_radius.convex import HPolytope, VPolytope, enumerate_vertices, lp_max, polar
from tensor_radius.errors import DimensionCapExceeded, InfeasibleBody, UnboundedBody
from tensor_radius.simplex import max_over_symmetric_hrep, min_l1_combination, solve_exact

from oracles import hull_facets, lp_max_hrep, sym_hrep_vertices


def same_rows_up_to_sign(A, B, atol=1e-9):
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    if len(A) != len(B):
        return False
    return all(any(np.allclose(a, b, atol=atol) or np.allclose(a, -b, atol=atol) for b in B) for a in A)


# -- exact scalars ---------------------------------------------------------


def test_parse_scalar_forms():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar(2) == Fraction(2)
    assert parse_scalar("inf") == math.inf
    assert isinstance(parse_scalar(0.1), float)
    with pytest.raises(TypeError):
        parse_scalar(True)


def test_as_array_keeps_integer_arrays_exact():
    A = as_array(np.array([[1, 2], [3, 4]]))
    assert A.dtype == object and A[1, 0] == Fraction(3)
    assert as_array([[0.5, 1]]).dtype == float


def test_surd_arithmetic_and_comparison():
    r2 = Surd(Fraction(2), 2)
    assert float(r2) == math.sqrt(2)
    assert r2 * r2 == Surd(Fraction(2))
    assert Surd(Fraction(155, 24), 2) > r2
    assert surd_power(8, Fraction(3, 4)) == Surd(Fraction(512), 4)
    assert Surd(Fraction(4), 4) == r2


def test_exact_linear_algebra():
    A = as_array([[2, 1], [1, 3]])
    x = exact_solve(A, as_array([[1], [2]]))
    assert list(x.ravel()) == [Fraction(1, 5), Fraction(3, 5)]
    assert (A @ exact_inv(A) == as_array([[1, 0], [0, 1]])).all()
    assert exact_rank(as_array([[1, 2], [2, 4]])) == 1


# -- linear programming ----------------------------------------------------


def test_exact_simplex_small_lp():
    # min -x - y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6
    sol = solve_exact([-1, -1, 0, 0], [[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6])
    assert sol.status == "optimal"
    assert sol.value == Fraction(-14, 5)


def test_exact_simplex_infeasible_and_unbounded():
    assert solve_exact([1], [[1]], [-1]).status == "infeasible"
    assert solve_exact([-1, 0], [[1, -1]], [0]).status == "unbounded"


@pytest.mark.parametrize("seed", range(10))
def test_symmetric_hrep_lp_matches_highs(seed):
    rng = np.random.default_rng(seed)
    F = rng.integers(-3, 4, size=(6, 3))
    F = F[np.abs(F).sum(axis=1) > 0]
    if np.linalg.matrix_rank(F) < 3:
        pytest.skip("degenerate draw")
    c = rng.integers(-5, 6, size=3)
    exact = max_over_symmetric_hrep(c, F, exact=True)
    assert float(exact.value) == pytest.approx(lp_max_hrep(c, F), rel=1e-9)
    # multipliers certify the value
    u = np.asarray(exact.y)
    assert sum(abs(v) for v in u) == exact.value
    assert (F.T.astype(object) @ u == c.astype(object)).all()


def test_min_l1_combination_dual_certificate():
    atoms = as_array([[1, 0], [0, 1], [1, 1], [1, -1]])
    sol = min_l1_combination(atoms, as_array([3, 1]), exact=True)
    assert sol.value == 3
    y = np.asarray(sol.y)
    assert all(abs(a @ y) <= 1 for a in atoms)


# -- polytopes -------------------------------------------------------------


def test_unbounded_hrep_rejected():
    with pytest.raises(UnboundedBody):
        HPolytope(as_array([[1, 0]]))


def test_square_vertices_and_polar():
    P = HPolytope(as_array([[1, 0], [0, 1]]))
    V = enumerate_vertices(P).vertices
    assert same_rows_up_to_sign(V, [[1, 1], [1, -1]])
    Q = polar(P)
    assert isinstance(Q, VPolytope)
    assert same_rows_up_to_sign(Q.vertices, [[1, 0], [0, 1]])


@pytest.mark.parametrize("seed", range(8))
def test_double_description_matches_qhull(seed):
    rng = np.random.default_rng(100 + seed)
    n = 3
    F = rng.integers(-4, 5, size=(7, n))
    F = F[np.abs(F).sum(axis=1) > 0]
    if np.linalg.matrix_rank(F) < n:
        pytest.skip("degenerate draw")
    V = enumerate_vertices(HPolytope(as_array(F))).vertices
    ref = sym_hrep_vertices(F)
    # qhull returns both members of each +- pair
    assert len(ref) == 2 * len(V)
    for v in ref:
        assert any(np.allclose(v, w) or np.allclose(v, -w) for w in np.asarray(V, dtype=float))


def test_polar_vertices_are_hull_facets():
    V = as_array([[1, 0], [0, 1], [1, -1]])
    H = polar(VPolytope(V))
    assert same_rows_up_to_sign(H.facets, V)
    W = enumerate_vertices(H).vertices
    assert same_rows_up_to_sign(W, hull_facets(np.asarray(V, dtype=float)))


def test_lp_max_over_vrep_and_hrep_agree():
    V = as_array([[1, 0], [0, 1], [1, -1]])
    P = VPolytope(V)
    H = HPolytope(enumerate_vertices(polar(P)).vertices)
    c = as_array([2, 3])
    assert lp_max(c, P).value == lp_max(c, H).value == 3


def test_vertex_enumeration_cap(monkeypatch):
    monkeypatch.setenv("TRL_CAPS", "vertex_dim=2")
    with pytest.raises(DimensionCapExceeded):
        enumerate_vertices(HPolytope(as_array(np.eye(3, dtype=int))))
