import math
from fractions import Fraction

import numpy as np
import pytest

from tensor_radius._exact import as_array
from tensor_radius.convex import HPolytope, VPolytope, enumerate_vertices
from tensor_radius.errors import DimensionMismatch, NotPolyhedral
from tensor_radius.spaces import (
    EllipsoidBall,
    Lp,
    PolyH,
    PolyV,
    Schatten,
    crosspolytope_basis,
    dual,
    extreme_points,
    norm_eval,
    parallelotope_basis,
    space_from_json,
)

from oracles import gauge_bisection, gauge_vrep, lp_norm

INF = math.inf
HEXAGON = as_array([[1, 0], [0, 1], [1, -1]])


def test_lp_norm_examples():
    assert norm_eval(Lp(2, 1), as_array([1, -2])) == 3
    assert norm_eval(Lp(3, INF), as_array([1, -5, 2])) == 5
    assert norm_eval(Lp(2, 2), [3.0, 4.0]) == pytest.approx(5.0)


def test_schatten_inf_is_operator_norm():
    assert norm_eval(Schatten(2, INF), np.diag([3.0, -4.0]).ravel()) == pytest.approx(4.0)
    assert Schatten(3, 1).dim == 9


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        norm_eval(Lp(2, 1), [1.0, 2.0, 3.0])


@pytest.mark.parametrize("p", [1, 1.5, 2, 3, 4, INF])
def test_lp_norm_matches_formula(p):
    rng = np.random.default_rng(1)
    X = Lp(3, p)
    for x in rng.standard_normal((20, 3)):
        assert X.norm(x) == pytest.approx(lp_norm(x, p), rel=1e-12)


def test_hexagon_gauge_matches_bisection_and_lp():
    X = PolyV(VPolytope(HEXAGON))
    V = np.asarray(HEXAGON, dtype=float)
    F = np.asarray(X.dual_ball.vertices, dtype=float)
    rng = np.random.default_rng(2)
    for x in rng.standard_normal((25, 2)):
        contains = lambda y: bool(np.all(np.abs(F @ y) <= 1))
        assert X.norm(x) == pytest.approx(gauge_bisection(x, contains), rel=1e-9)
        assert X.norm(x) == pytest.approx(gauge_vrep(x, V), rel=1e-9)


def test_dual_pairs():
    assert isinstance(dual(Lp(2, 1)), Lp) and dual(Lp(2, 1)).p == INF
    assert dual(Lp(2, 3)).p == Fraction(3, 2)
    E = dual(EllipsoidBall(np.diag([4.0, 1.0])))
    np.testing.assert_allclose(E.M, np.diag([0.25, 1.0]))
    assert dual(Schatten(2, 1)).p == INF
    assert isinstance(dual(PolyV(VPolytope(HEXAGON))), PolyH)


@pytest.mark.parametrize(
    "X",
    [Lp(2, 1), Lp(3, 4), PolyV(VPolytope(HEXAGON)), EllipsoidBall(np.array([[2.0, 0.5], [0.5, 1.0]])), Schatten(2, 1)],
    ids=["l1", "l4", "hexagon", "ellipse", "S1"],
)
def test_dual_norm_is_sup_over_unit_ball(X):
    """``||f||_* = sup <f, x>`` over the ball; check the support point and value."""
    rng = np.random.default_rng(3)
    Xd = dual(X)
    for f in rng.standard_normal((10, X.dim)):
        val, x = X.support(f)
        assert float(val) == pytest.approx(Xd.norm(f), rel=1e-9)
        assert X.norm(np.asarray(x, dtype=float)) <= 1 + 1e-9
        assert float(np.asarray(x, dtype=float) @ f) == pytest.approx(float(val), rel=1e-9)


def test_double_dual_is_isometric():
    X = PolyV(VPolytope(HEXAGON))
    rng = np.random.default_rng(4)
    for x in rng.standard_normal((10, 2)):
        assert dual(dual(X)).norm(x) == pytest.approx(X.norm(x), rel=1e-12)


def test_extreme_points():
    V = extreme_points(Lp(2, INF)).vertices
    assert sorted(map(tuple, np.abs(np.asarray(V, dtype=int)))) == [(1, 1), (1, 1)]
    V = np.asarray(extreme_points(Lp(3, 1)).vertices, dtype=int)
    assert sorted(map(tuple, V)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    with pytest.raises(NotPolyhedral):
        extreme_points(Lp(2, 2))


def test_polyh_extreme_points_match_enumeration():
    F = as_array([[1, 2], [3, -1], [1, 1]])
    X = PolyH(HPolytope(F))
    got = {tuple(v) for v in extreme_points(X).vertices}
    ref = {tuple(v) for v in enumerate_vertices(HPolytope(F)).vertices}
    assert got == ref


def test_parallelotope_and_crosspolytope_bases():
    assert parallelotope_basis(Lp(2, INF)) is not None
    assert crosspolytope_basis(Lp(2, 1)) is not None
    assert parallelotope_basis(Lp(2, 1)) is not None  # the l_1 square is a rotated cube
    assert parallelotope_basis(Lp(3, 1)) is None
    assert parallelotope_basis(PolyV(VPolytope(HEXAGON))) is None


def test_json_round_trip():
    for X in [Lp(2, INF), Lp(3, Fraction(3, 2)), PolyV(VPolytope(HEXAGON)), Schatten(2, 1), EllipsoidBall(np.eye(2) * 2)]:
        Y = space_from_json(X.to_json())
        assert Y.to_json() == X.to_json()
    assert space_from_json({"type": "lp", "n": 2, "p": "inf"}).p == INF
    with pytest.raises(ValueError):
        space_from_json({"type": "banana"})


def test_exact_norms_on_rational_input():
    X = PolyV(VPolytope(HEXAGON))
    v = X.norm(as_array(["1/2", "3/4"]))
    assert isinstance(v, Fraction)
