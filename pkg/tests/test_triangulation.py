from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import scipy_volume
from toricpatch.configs import (
    PINWHEEL_SIMPLICES,
    cube_config,
    curve_config,
    pinwheel_config,
    square_config,
    triangle_config,
)
from toricpatch.errors import InvalidTriangulation, NonGenericLifting, SizeMismatch
from toricpatch.geometry import PointConfig
from toricpatch.triangulation import (
    LiftingFunction,
    Triangulation,
    control_polytope,
    hull_volume,
    is_regular,
    perturb_lifting,
    pulling_triangulation,
    realization_in_simplex,
    regular_triangulation,
    triangulation_volume,
    validate_triangulation,
)

SQ = square_config()


def test_square_examples():
    assert regular_triangulation(SQ, (0, 0, 0, 1)).to_list() == [[0, 1, 3], [0, 2, 3]]
    assert regular_triangulation(SQ, (0, 1, 1, 0)).to_list() == [[0, 1, 2], [1, 2, 3]]


def test_curve_examples():
    q = curve_config(2)
    assert regular_triangulation(q, (0, 1, 0)).to_list() == [[0, 1], [1, 2]]
    T = regular_triangulation(q, (0, -1, 0))
    assert T.to_list() == [[0, 2]]
    assert T.used_points == {0, 2}


def test_flat_lift_is_not_generic():
    with pytest.raises(NonGenericLifting):
        regular_triangulation(SQ, (0, 0, 0, 0))
    assert regular_triangulation(PointConfig(((0, 0), (1, 0), (0, 1)), 2), (0, 0, 0)).to_list() == [[0, 1, 2]]


def test_coplanar_upper_facet_is_not_generic():
    with pytest.raises(NonGenericLifting):
        regular_triangulation(curve_config(2), (0, 1, 2))


def test_perturbation_examples():
    lam = perturb_lifting((0, 0, 0, 0), SQ)
    assert all(a < b for a, b in zip(lam.values, lam.values[1:]))
    assert len(regular_triangulation(SQ, lam)) == 2
    q = curve_config(2)
    eps = Fraction(1, 10**7)
    assert perturb_lifting((0, 0, 0), q).values == (0, eps, 4 * eps)
    assert regular_triangulation(q, perturb_lifting((0, 0, 0), q)).to_list() == [[0, 2]]
    generic = (0.3, -0.2, 0.9, 0.1)
    assert regular_triangulation(SQ, perturb_lifting(generic, SQ)) == regular_triangulation(SQ, generic)


def test_float_perturbation_scale():
    lam = perturb_lifting((1.0, 3.0, 2.0), curve_config(2))
    assert lam.values[2] - 2.0 == pytest.approx(4 * 2e-7)


def test_both_square_diagonals_are_regular():
    for T in ([[0, 1, 3], [0, 2, 3]], [[0, 1, 2], [1, 2, 3]]):
        ok, lam = is_regular(SQ, Triangulation(T))
        assert ok
        assert regular_triangulation(SQ, lam).to_list() == T


def test_pinwheel_is_irregular():
    ok, lam = is_regular(pinwheel_config(), Triangulation(PINWHEEL_SIMPLICES))
    assert not ok and lam is None


def test_pinwheel_is_a_valid_triangulation():
    validate_triangulation(pinwheel_config(), Triangulation(PINWHEEL_SIMPLICES))


def test_unused_point_constrains_regularity():
    q = curve_config(2)
    ok, lam = is_regular(q, Triangulation([[0, 2]]))
    assert ok and lam[1] < (lam[0] + lam[2]) / 2


def test_invalid_triangulations():
    with pytest.raises(InvalidTriangulation):      # overlapping
        validate_triangulation(SQ, Triangulation([[0, 1, 3], [0, 2, 3], [0, 1, 2]]))
    with pytest.raises(InvalidTriangulation):      # not covering
        validate_triangulation(SQ, Triangulation([[0, 1, 3]]))
    with pytest.raises(InvalidTriangulation):      # crossing diagonals, right total area
        validate_triangulation(SQ, Triangulation([[0, 1, 3], [0, 1, 2]]))
    with pytest.raises(InvalidTriangulation):      # wrong arity
        validate_triangulation(SQ, Triangulation([[0, 1]]))
    with pytest.raises(InvalidTriangulation):      # degenerate simplex
        validate_triangulation(curve_config(2), Triangulation([[0, 1], [1, 1]]))
    with pytest.raises(InvalidTriangulation):
        is_regular(SQ, Triangulation([[0, 1, 3]]))


def test_t_junction_is_rejected():
    cfg = PointConfig(((0, 0), (2, 0), (1, 0), (1, 2), (1, -2)), 2)
    # upper triangle uses the long edge, lower ones split it at (1, 0)
    T = Triangulation([[0, 1, 3], [0, 2, 4], [1, 2, 4]])
    with pytest.raises(InvalidTriangulation):
        validate_triangulation(cfg, T)


def test_volumes():
    for cfg in (SQ, triangle_config(3), cube_config(), curve_config(5), pinwheel_config()):
        assert float(hull_volume(cfg)) == pytest.approx(scipy_volume(cfg.array), abs=1e-12)
        validate_triangulation(cfg, pulling_triangulation(cfg))


def test_control_polytope_examples():
    tri = triangle_config(2)
    T = regular_triangulation(tri, [float(i * i % 7) + 0.01 * i for i in range(6)])
    emb = control_polytope(T, tri.array)
    for s, verts in zip(T, emb.simplices):
        assert np.array_equal(verts, tri.array[list(s)])
    cubic = curve_config(3)
    B = np.array([[0, 0], [1, 2], [3, 2], [4, 0]], dtype=float)
    emb = control_polytope(regular_triangulation(cubic, (0, 2, 2, 0)), B)
    assert [v.tolist() for v in emb.simplices] == [B[[0, 1]].tolist(), B[[1, 2]].tolist(),
                                                   B[[2, 3]].tolist()]
    real = realization_in_simplex(T, len(tri))
    for s, verts in zip(T, real.simplices):
        assert np.array_equal(verts, np.eye(len(tri))[list(s)])
    with pytest.raises(SizeMismatch):
        control_polytope(T, tri.array[:3])


@given(st.integers(0, 10_000))
def test_projection_of_realization_is_control_polytope(seed):
    rng = np.random.default_rng(seed)
    tri = triangle_config(3)
    T = regular_triangulation(tri, rng.random(len(tri)))
    B = rng.normal(size=(len(tri), 3))
    real = realization_in_simplex(T, len(tri))
    ctrl = control_polytope(T, B)
    for r, c in zip(real.simplices, ctrl.simplices):
        assert np.allclose(r @ B, c, atol=0)


CONFIGS = [SQ, triangle_config(3), PointConfig(tuple((i,) for i in range(6)), 1), triangle_config(2)]


@given(st.sampled_from(CONFIGS), st.integers(0, 10_000))
def test_round_trip(cfg, seed):
    lam = np.random.default_rng(seed).random(len(cfg))
    T = regular_triangulation(cfg, lam)
    ok, witness = is_regular(cfg, T)
    assert ok
    assert regular_triangulation(cfg, witness) == T
    assert float(triangulation_volume(cfg, T)) == pytest.approx(float(hull_volume(cfg)), abs=1e-9)


@given(st.integers(0, 10_000))
def test_round_trip_float_configuration(seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((6, 2)) * 3
    cfg = PointConfig(tuple(map(tuple, pts)), 2)
    T = regular_triangulation(cfg, rng.random(6))
    ok, witness = is_regular(cfg, T)
    assert ok
    assert regular_triangulation(cfg, witness) == T


def test_four_distinct_regular_triangulations_of_cubic_triangle():
    tri = triangle_config(3)
    lifts = [np.random.default_rng(seed).random(len(tri)) for seed in range(4)]
    seen = set()
    for lam in lifts:
        T = regular_triangulation(tri, perturb_lifting(lam, tri))
        assert is_regular(tri, T)[0]
        seen.add(T)
    assert len(seen) == 4


def test_lifting_function_type():
    lam = LiftingFunction((1, 2.0, Fraction(1, 2)))
    assert lam.values == (1, 2, Fraction(1, 2)) and lam.exact
    assert len(lam) == 3 and lam[2] == Fraction(1, 2)
