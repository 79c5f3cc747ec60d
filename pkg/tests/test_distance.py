from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from clustsim import (
    DataMatrix,
    DegenerateColumnError,
    DistanceMatrix,
    corr_distance,
    distance_matrix,
    pearson,
)
from conftest import DEMO_DISTANCES, DEMO_RHO_12


# --- pearson ----------------------------------------------------------------

def test_pearson_exact_linear_dependence():
    assert pearson([1, 2, 3], [2, 4, 6]) == 1.0
    assert pearson([1, 2, 3], [3, 2, 1]) == -1.0


def test_pearson_demo_columns_match_independent_reference(demo_matrix):
    rho = pearson(demo_matrix.column(0), demo_matrix.column(1))
    assert rho == pytest.approx(DEMO_RHO_12, abs=1e-11)


def test_pearson_degenerate_column():
    with pytest.raises(DegenerateColumnError):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(DegenerateColumnError):
        pearson([1.0, 2.0, 3.0], [5.0, 5.0, 5.0])


def test_pearson_shape_checks():
    with pytest.raises(ValueError):
        pearson([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        pearson([1.0], [2.0])


# --- corr_distance ----------------------------------------------------------

def test_corr_distance_endpoints():
    assert corr_distance(1.0) == 0.0
    assert corr_distance(-1.0) == 2.0
    assert corr_distance(0.0) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_corr_distance_clips_roundoff_but_rejects_corruption():
    assert corr_distance(1.0 + 5e-10) == 0.0
    assert corr_distance(-1.0 - 5e-10) == 2.0
    with pytest.raises(ValueError):
        corr_distance(1.0 + 1e-8)
    with pytest.raises(ValueError):
        corr_distance(-1.5)


@given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
def test_corr_distance_monotone_decreasing(a, b):
    if a == b:
        assert corr_distance(a) == corr_distance(b)
    elif a < b:
        assert corr_distance(a) >= corr_distance(b)
        if 1.0 - a != 1.0 - b:  # distinguishable after the float subtraction
            assert corr_distance(a) > corr_distance(b)


# --- distance_matrix --------------------------------------------------------

def test_distance_matrix_perfect_pairs():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    m = DataMatrix(np.column_stack([x, 3.0 * x]))
    assert distance_matrix(m).d[0, 1] == 0.0
    m = DataMatrix(np.column_stack([x, -x]))
    assert distance_matrix(m).d[0, 1] == 2.0


def test_distance_matrix_demo_reference(demo_matrix):
    got = distance_matrix(demo_matrix).d
    assert np.allclose(got, DEMO_DISTANCES, atol=1e-9, rtol=0.0)


def test_distance_matrix_names_degenerate_column():
    m = DataMatrix([[1.0, 4.0, 1.0], [2.0, 4.0, 5.0], [3.0, 4.0, 2.0]],
                   col_names=("A", "B", "C"))
    with pytest.raises(DegenerateColumnError) as err:
        distance_matrix(m)
    assert err.value.column == "B"
    assert "B" in str(err.value)


def test_distance_matrix_agrees_with_pairwise_route():
    rng = np.random.default_rng(7)
    for _ in range(50):
        m = DataMatrix(rng.standard_normal((int(rng.integers(2, 12)), int(rng.integers(2, 9)))))
        dm = distance_matrix(m)
        for i in range(m.p):
            for j in range(i + 1, m.p):
                expected = corr_distance(pearson(m.column(i), m.column(j)))
                assert dm.d[i, j] == pytest.approx(expected, abs=1e-12)


def test_distance_matrix_affine_invariance():
    rng = np.random.default_rng(11)
    for _ in range(50):
        values = rng.standard_normal((8, 5))
        base = distance_matrix(DataMatrix(values)).d
        scaled = values.copy()
        j = int(rng.integers(0, 5))
        a = float(rng.uniform(0.1, 10.0))
        b = float(rng.uniform(-5.0, 5.0))
        scaled[:, j] = a * scaled[:, j] + b
        moved = distance_matrix(DataMatrix(scaled)).d
        assert np.allclose(base, moved, atol=1e-10, rtol=0.0)


def test_distance_matrix_sign_flip_maps_rho_to_minus_rho():
    rng = np.random.default_rng(13)
    values = rng.standard_normal((10, 4))
    rho = np.array([[pearson(values[:, i], values[:, j]) if i != j else 1.0
                     for j in range(4)] for i in range(4)])
    flipped = values.copy()
    flipped[:, 0] = -flipped[:, 0]
    moved = distance_matrix(DataMatrix(flipped)).d
    for j in range(1, 4):
        assert moved[0, j] == pytest.approx(math.sqrt(2.0 * (1.0 + rho[0, j])), abs=1e-10)


def test_distance_matrix_output_satisfies_type_invariants():
    rng = np.random.default_rng(3)
    for _ in range(100):
        m = DataMatrix(rng.standard_normal((int(rng.integers(2, 10)), int(rng.integers(2, 9)))))
        dm = distance_matrix(m)
        DistanceMatrix(dm.d)  # revalidates symmetry, range, diagonal
        assert np.array_equal(dm.d, dm.d.T)
        assert (np.diagonal(dm.d) == 0.0).all()
        assert dm.d.min() >= 0.0 and dm.d.max() <= 2.0


def test_distance_matrix_type_rejects_invalid_grids():
    good = np.array([[0.0, 1.0], [1.0, 0.0]])
    DistanceMatrix(good)
    with pytest.raises(ValueError):
        DistanceMatrix(np.array([[0.0, 1.0], [0.9, 0.0]]))  # asymmetric
    with pytest.raises(ValueError):
        DistanceMatrix(np.array([[0.1, 1.0], [1.0, 0.0]]))  # nonzero diagonal
    with pytest.raises(ValueError):
        DistanceMatrix(np.array([[0.0, 2.5], [2.5, 0.0]]))  # out of range
    with pytest.raises(ValueError):
        DistanceMatrix(np.array([[0.0, -0.1], [-0.1, 0.0]]))
    with pytest.raises(ValueError):
        DistanceMatrix(np.zeros((2, 3)))
