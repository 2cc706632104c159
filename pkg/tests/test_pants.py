"""Hexagon identities against the matrix-model oracle."""

import math

import pytest

from covermeasure import invariants as IV

GRID_L12 = [0.5, 0.875, 1.25, 1.625, 2.0]
GRID_L3 = [1.0 + 19.0 * i / 9.0 for i in range(10)]


def test_translation_length_roundtrip():
    for l in (1.0, 2.0, 5.0):
        mat = ((math.exp(l / 2), 0.0), (0.0, math.exp(-l / 2)))
        assert abs(IV.translation_length(mat) - l) < 1e-12


def test_translation_length_rejects_elliptic():
    rot = ((math.cos(0.3), -math.sin(0.3)), (math.sin(0.3), math.cos(0.3)))
    with pytest.raises(IV.InfeasibleGeometryError):
        IV.translation_length(rot)


def test_generators_realize_traces():
    b = IV.PantsBoundary(1.6, 2.2, 3.0)
    a_mat, b_mat = IV.pants_group_generators(b)
    assert abs(IV.trace(a_mat) - 2 * math.cosh(0.8)) < 1e-12
    assert abs(IV.trace(b_mat) - 2 * math.cosh(1.1)) < 1e-12
    ab = ((a_mat[0][0] * b_mat[0][0] + a_mat[0][1] * b_mat[1][0],
           a_mat[0][0] * b_mat[0][1] + a_mat[0][1] * b_mat[1][1]),
          (a_mat[1][0] * b_mat[0][0] + a_mat[1][1] * b_mat[1][0],
           a_mat[1][0] * b_mat[0][1] + a_mat[1][1] * b_mat[1][1]))
    assert abs(IV.trace(ab) + 2 * math.cosh(1.5)) < 1e-12


def test_hexagon_agrees_with_matrix_oracle_on_grid():
    worst = 0.0
    for l1 in GRID_L12:
        for l2 in GRID_L12:
            for l3 in GRID_L3:
                b = IV.PantsBoundary(l1, l2, l3)
                hexa = IV.separating_orthogeodesic_length(b)
                mat = IV.matrix_pants_oracle(b)
                worst = max(worst, abs(hexa - mat))
    assert worst < 1e-9


def test_symmetric_in_first_two_boundaries():
    for l1, l2, l3 in ((0.7, 1.9, 4.0), (0.5, 2.0, 11.0), (1.2, 1.3, 2.0)):
        a = IV.separating_orthogeodesic_length(IV.PantsBoundary(l1, l2, l3))
        b = IV.separating_orthogeodesic_length(IV.PantsBoundary(l2, l1, l3))
        assert abs(a - b) < 1e-12
        am = IV.matrix_pants_oracle(IV.PantsBoundary(l1, l2, l3))
        bm = IV.matrix_pants_oracle(IV.PantsBoundary(l2, l1, l3))
        assert abs(am - bm) < 1e-12


def test_strictly_decreasing_in_l3():
    for l1 in GRID_L12:
        for l2 in GRID_L12:
            values = [
                IV.separating_orthogeodesic_length(IV.PantsBoundary(l1, l2, l3))
                for l3 in GRID_L3
            ]
            assert all(a > b for a, b in zip(values, values[1:]))


def test_decay_along_l3():
    v5 = IV.separating_orthogeodesic_length(IV.PantsBoundary(1, 1, 5))
    v10 = IV.separating_orthogeodesic_length(IV.PantsBoundary(1, 1, 10))
    v20 = IV.separating_orthogeodesic_length(IV.PantsBoundary(1, 1, 20))
    assert v20 < v10 < v5
    # asymptotic rate: length ~ 4 exp(-l3/4), so each doubling of the long
    # boundary roughly squares-down the value
    assert v20 < v10 * v10
    ratio = v20 / (4 * math.exp(-20 / 4.0))
    assert 0.9 < ratio < 1.3


def test_oracle_infeasible_inputs():
    with pytest.raises(IV.InfeasibleGeometryError):
        IV.PantsBoundary(0.0, 1.0, 1.0)
