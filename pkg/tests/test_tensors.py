import math
from fractions import Fraction

import numpy as np
import pytest

from tensor_radius._exact import as_array
from tensor_radius.convex import VPolytope
from tensor_radius.errors import NotSupported, SizeCapExceeded
from tensor_radius.spaces import Lp, PolyV
from tensor_radius.tensors import (
    Tensor,
    entangled_witness,
    hs_norm,
    injective_norm,
    outer,
    pair,
    projective_norm,
)

from oracles import injective_l2_grid, projective_lp

INF = math.inf
HEXAGON = PolyV(VPolytope(as_array([[1, 0], [0, 1], [1, -1]])))


def random_int_tensor(rng, k, n=2):
    return as_array(rng.integers(-4, 5, size=(n,) * k))


def test_crossnorm_exact_on_rank_one():
    rng = np.random.default_rng(0)
    for X, Y in [(Lp(2, 1), Lp(3, INF)), (HEXAGON, Lp(2, 1)), (Lp(2, INF), HEXAGON)]:
        for _ in range(5):
            x = as_array(rng.integers(-5, 6, size=X.dim))
            y = as_array(rng.integers(-5, 6, size=Y.dim))
            z = Tensor.rank_one((X, Y), (x, y))
            expected = X.norm(x) * Y.norm(y)
            assert injective_norm(z).value == expected
            assert projective_norm(z).value == expected


def test_crossnorm_euclidean():
    x, y = np.array([3.0, 4.0]), np.array([1.0, -1.0])
    z = Tensor.rank_one((Lp(2, 2), Lp(2, 2)), (x, y))
    assert float(injective_norm(z).value) == pytest.approx(5 * math.sqrt(2), rel=1e-12)
    assert float(projective_norm(z).value) == pytest.approx(5 * math.sqrt(2), rel=1e-12)
    assert hs_norm(z) == pytest.approx(5 * math.sqrt(2), rel=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_injective_over_linf_is_max_entry(k):
    rng = np.random.default_rng(k)
    for _ in range(5):
        C = random_int_tensor(rng, k)
        r = injective_norm(Tensor((Lp(2, INF),) * k, C))
        assert r.certified
        assert r.value == max(abs(c) for c in C.ravel())
        # the witness attains the value
        assert abs(pair(C, r.witness.functionals)) == r.value


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_projective_over_l1_is_coefficient_sum(k):
    rng = np.random.default_rng(10 + k)
    for _ in range(5):
        C = random_int_tensor(rng, k)
        r = projective_norm(Tensor((Lp(2, 1),) * k, C))
        assert r.certified
        assert r.value == sum(abs(c) for c in C.ravel())
        assert (r.decomposition.reconstruct() == C).all()


@pytest.mark.parametrize("seed", range(4))
def test_projective_lp_matches_highs_oracle(seed):
    rng = np.random.default_rng(20 + seed)
    factors = (HEXAGON, Lp(2, INF))
    C = rng.standard_normal((2, 2))
    r = projective_norm(Tensor(factors, C))
    ref = projective_lp(C, [np.asarray(X.ball.vertices, dtype=float) for X in factors])
    assert float(r.value) == pytest.approx(ref, rel=1e-9)


def test_euclidean_trace_norm_example():
    z = Tensor((Lp(2, 2), Lp(2, 2)), np.array([[1.0, 1.0], [1.0, -1.0]]))
    assert float(projective_norm(z).value) == pytest.approx(2 * math.sqrt(2), rel=1e-12)
    assert float(injective_norm(z).value) == pytest.approx(math.sqrt(2), rel=1e-12)
    assert hs_norm(z) == pytest.approx(2.0)
    assert hs_norm(Tensor.rank_one((Lp(2, 2), Lp(2, 2)), ([1, 0], [1, 0]))) == 1


@pytest.mark.parametrize("seed", range(3))
def test_order_three_euclidean_matches_grid(seed):
    rng = np.random.default_rng(30 + seed)
    C = rng.standard_normal((2, 2, 2))
    r = injective_norm(Tensor((Lp(2, 2),) * 3, C))
    assert float(r.value) == pytest.approx(injective_l2_grid(C, N=360), abs=1e-3)


@pytest.mark.parametrize("seed", range(5))
def test_projective_is_dual_of_injective(seed):
    """The exact projective norm equals ``<y, z>`` for its dual certificate ``y`` of unit injective norm."""
    rng = np.random.default_rng(40 + seed)
    factors = (Lp(2, 1), HEXAGON, Lp(2, INF))
    C = as_array(rng.integers(-3, 4, size=(2, 2, 2)))
    z = Tensor(factors, C)
    r = projective_norm(z, method="lp")
    assert r.certified and isinstance(r.value, Fraction)
    y = Tensor(z.dual_factors(), r.dual)
    assert injective_norm(y).value == 1 or r.value == 0
    assert sum(a * b for a, b in zip(r.dual.ravel(), C.ravel())) == r.value


def test_column_generation_matches_lp_on_polyhedral_input():
    rng = np.random.default_rng(5)
    C = rng.standard_normal((2, 2))
    z = Tensor((HEXAGON, Lp(2, 1)), C)
    assert float(projective_norm(z, method="colgen").value) == pytest.approx(float(projective_norm(z).value), rel=1e-6)


def test_curved_projective_has_small_gap():
    rng = np.random.default_rng(6)
    r = projective_norm(Tensor((Lp(2, 4), Lp(2, 1)), rng.standard_normal((2, 2))))
    assert r.lower <= r.value + 1e-12
    assert r.gap <= 1e-6 * max(1.0, float(r.value))


def test_outer_stays_exact():
    C = outer([as_array([1, 2]), as_array(["1/2", "1/3"])])
    assert C[1, 1] == Fraction(2, 3)


def test_entangled_witness_order_two():
    w = entangled_witness(2, 2, trials=100, seed=0)
    assert w.ratio_bound == pytest.approx(math.sqrt(2), abs=1e-12)
    assert w.certified


def test_entangled_witness_bounds():
    w = entangled_witness(2, 3, trials=200, seed=1)
    assert math.sqrt(2) - 1e-12 <= w.ratio_bound <= 2 ** (2 / 3) + 1e-8


def test_entangled_witness_rejects_larger_n():
    with pytest.raises(NotSupported):
        entangled_witness(3, 2, trials=10)


def test_size_cap(monkeypatch):
    monkeypatch.setenv("TRL_CAPS", "tensor_size=8")
    with pytest.raises(SizeCapExceeded):
        Tensor((Lp(2, 1),) * 4, np.zeros((2, 2, 2, 2)))
