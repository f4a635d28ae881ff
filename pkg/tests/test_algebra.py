# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Localized matrix algebra tests."""

import numpy as np
import pytest
from test_helpers import decaying_spd, points, tridiagonal

from nonlinear_sampling.algebra import (
    LocalizedMatrix,
    PointSet,
    PseudoInverse,
    algebra_constant,
    check_differential_norm,
    jaffard_norm,
    norm_controlled_inverse,
    norm_report,
    operator_norm,
    pseudo_inverse_apply,
    spectral_norm,
)
from nonlinear_sampling.errors import LinearizationError, NotInvertibleError


def test_point_set_rejects_ties():
    """Test that points must be strictly increasing and finite."""
    with pytest.raises(ValueError):
        PointSet([0.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        PointSet([1.0, 0.0])
    with pytest.raises(ValueError):
        PointSet([0.0, np.inf])
    assert len(PointSet([])) == 0


def test_point_set_statistics():
    """Test separation count and gaps."""
    pts = points([0.0, 0.5, 0.9, 1.0, 2.5])
    assert pts.separation_count() == 3
    assert pts.min_gap() == pytest.approx(0.1)
    assert pts.max_gap() == pytest.approx(1.5)
    assert pts.shifted(1.0)[0] == 1.0
    assert PointSet.integers(-2, 2) == PointSet([-2, -1, 0, 1, 2])
    assert PointSet.uniform(0.0, 1.0, 3) == PointSet([0.0, 0.5, 1.0])


def test_localized_matrix_checks():
    """Test shape and finiteness checks and the transpose."""
    with pytest.raises(ValueError):
        LocalizedMatrix([0.0, 1.0], [0.0], np.ones((2, 2)))
    with pytest.raises(ValueError):
        LocalizedMatrix([0.0], [0.0], [[np.nan]])
    A = LocalizedMatrix([0.0, 1.0], [0.0, 2.0, 3.0], np.arange(6.0).reshape(2, 3))
    assert A.T.row_set == A.col_set
    assert A.T.T == A
    with pytest.raises(ValueError):
        A.entries[0, 0] = 1.0
    product = A @ A.T
    assert product.shape == (2, 2)
    assert product.row_set == A.row_set
    np.testing.assert_allclose((A - A).entries, 0.0)
    np.testing.assert_allclose((2.0 * A).entries, 2.0 * A.entries)


def test_jaffard_norm_examples():
    """Test the Jaffard norm on direct examples."""
    identity = LocalizedMatrix.identity([0.0, 1.0, 2.0])
    assert jaffard_norm(identity, 2.0) == 1.0

    entries = np.zeros((3, 3))
    entries[0, 2] = 0.5
    single = LocalizedMatrix([0.0, 1.0, 2.0], [0.0, 1.0, 2.0], entries)
    assert jaffard_norm(single, 2.0) == pytest.approx(4.5)

    empty = LocalizedMatrix([], [], np.zeros((0, 0)))
    assert jaffard_norm(empty, 2.0) == 0.0
    with pytest.raises(ValueError):
        jaffard_norm(identity, -1.0)


def test_jaffard_norm_brute_force(rng):
    """Test the Jaffard norm against a loop over all entries."""
    rows, cols = np.sort(rng.uniform(0, 5, 5)), np.sort(rng.uniform(0, 5, 5))
    A = LocalizedMatrix(rows, cols, rng.standard_normal((5, 5)))
    expected = max(
        (1.0 + abs(rows[i] - cols[j])) ** 3 * abs(A.entries[i, j])
        for i in range(5)
        for j in range(5)
    )
    assert jaffard_norm(A, 3.0) == pytest.approx(expected, rel=1e-14)
    assert jaffard_norm(A, 3.0) >= jaffard_norm(A, 1.0) >= np.max(np.abs(A.entries))


def test_operator_norm_examples(rng):
    """Test operator norms on closed form examples."""
    assert operator_norm(LocalizedMatrix.from_array(np.diag([2.0, 3.0])), 2) == (
        pytest.approx(3.0)
    )
    upper = LocalizedMatrix.from_array([[1.0, 1.0], [0.0, 1.0]])
    assert operator_norm(upper, np.inf) == 2.0
    assert operator_norm(upper, 1) == 2.0
    with pytest.raises(ValueError):
        operator_norm(upper, 3)

    A = LocalizedMatrix.from_array(rng.standard_normal((6, 6)))
    largest = np.sqrt(np.linalg.eigvalsh(A.entries.T @ A.entries)[-1])
    assert operator_norm(A, 2) == pytest.approx(largest, abs=1e-8)
    assert operator_norm(A, 2) ** 2 <= (
        operator_norm(A, 1) * operator_norm(A, np.inf) * (1 + 1e-12)
    )


def test_norm_report(rng):
    """Test that the report collects consistent norms."""
    A = decaying_spd(rng, 12)
    report = norm_report(A, 2.0)
    assert report.op_l1 == pytest.approx(np.max(np.sum(np.abs(A.entries), axis=0)))
    assert report.op_linf == pytest.approx(np.max(np.sum(np.abs(A.entries), axis=1)))
    assert report.op_l2 == pytest.approx(np.linalg.norm(A.entries, 2), rel=1e-6)
    assert report.jaffard >= np.max(np.abs(A.entries))
    value, residual, converged = spectral_norm(LocalizedMatrix.from_array([[0.0]]))
    assert (value, converged) == (0.0, True)


def test_inverse_closed_forms():
    """Test the series inverse on closed form examples."""
    inverse, diagnostics = norm_controlled_inverse(
        LocalizedMatrix.from_array(2.0 * np.eye(3))
    )
    np.testing.assert_allclose(inverse.entries, 0.5 * np.eye(3))
    assert diagnostics.terms == 1
    assert diagnostics.ratio == pytest.approx(0.0)

    inverse, _ = norm_controlled_inverse(
        LocalizedMatrix.from_array([[2.0, 1.0], [1.0, 2.0]])
    )
    np.testing.assert_allclose(
        inverse.entries, np.array([[2.0, -1.0], [-1.0, 2.0]]) / 3.0, atol=1e-12
    )


def test_inverse_singular():
    """Test that a singular matrix is rejected."""
    with pytest.raises(NotInvertibleError):
        norm_controlled_inverse(LocalizedMatrix.from_array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(ValueError):
        norm_controlled_inverse(LocalizedMatrix.from_array(np.ones((2, 3))))


def test_inverse_banded():
    """Test the inverse of a banded matrix against a direct solve."""
    A = tridiagonal(20)
    inverse, diagnostics = norm_controlled_inverse(A, beta=3.0)
    np.testing.assert_allclose(
        inverse.entries, np.linalg.solve(A.entries, np.eye(20)), atol=1e-12
    )
    assert np.max(np.abs((A @ inverse).entries - np.eye(20))) < 1e-10
    assert diagnostics.jaffard <= diagnostics.bound
    assert diagnostics.differential_constant >= 1.0
    assert inverse.row_set == A.col_set


@pytest.mark.parametrize("seed", range(50))
def test_inverse_random_spd(seed):
    """Test inverses and bounds of random decaying SPD matrices."""
    generator = np.random.default_rng(seed)
    A = decaying_spd(generator, int(generator.integers(10, 61)), beta=3.0)
    inverse, diagnostics = norm_controlled_inverse(A, beta=3.0)
    direct = np.linalg.inv(A.entries)
    assert np.max(np.abs(inverse.entries - direct)) < 1e-9
    assert diagnostics.jaffard <= diagnostics.bound
    assert 0.0 <= diagnostics.ratio < 1.0


def test_inverse_max_terms():
    """Test that a term cap leaves a residual."""
    A = tridiagonal(10, diagonal=2.5)
    _, capped = norm_controlled_inverse(A, max_terms=2)
    assert capped.terms <= 2
    _, full = norm_controlled_inverse(A)
    assert full.residual <= capped.residual


def test_differential_norm_examples(rng):
    """Test the weak differential norm ratio."""
    identity = LocalizedMatrix.identity([0.0, 1.0, 2.0])
    ratio, holds = check_differential_norm(identity, identity, 2.0, 0.0)
    assert ratio <= 0.5
    assert holds

    entries = np.zeros((3, 3))
    entries[0, 1] = 1.0
    nilpotent = LocalizedMatrix.from_array(entries)
    assert check_differential_norm(nilpotent, nilpotent, 2.0, 0.5)[0] == 0.0

    A, B = decaying_spd(rng, 15), decaying_spd(rng, 15)
    ratio, holds = check_differential_norm(A, B, 3.0, 0.5)
    assert holds
    assert ratio <= algebra_constant(A.col_set, 3.0)
    with pytest.raises(ValueError):
        check_differential_norm(A, B, 3.0, 1.0)


def test_banded_sparsification():
    """Test that band sparsification keeps the near diagonal entries."""
    size = 30
    pts = np.arange(size, dtype=float)
    distances = np.abs(pts[:, None] - pts[None, :])
    A = LocalizedMatrix(pts, pts, (1.0 + distances) ** -20.0)
    banded = A.banded(20.0, cutoff=1e-14)
    np.testing.assert_array_equal(np.diag(banded.entries), np.ones(size))
    assert banded.entries[0, -1] == 0.0
    assert np.count_nonzero(banded.entries) < size * size


def test_pseudo_inverse(rng):
    """Test least squares solutions."""
    v = rng.standard_normal(4)
    np.testing.assert_allclose(pseudo_inverse_apply(np.eye(4), v), v)
    np.testing.assert_allclose(
        pseudo_inverse_apply(np.array([[1.0], [1.0]]), [1.0, 3.0]), [2.0]
    )

    S = rng.standard_normal((40, 20))
    v = rng.standard_normal(40)
    x = pseudo_inverse_apply(LocalizedMatrix.from_array(S), v)
    assert np.max(np.abs(S.T @ (S @ x - v))) < 1e-10

    solver = PseudoInverse(S)
    np.testing.assert_allclose(solver.apply(S), np.eye(20), atol=1e-12)
    assert solver.smallest_singular_value > 0


def test_pseudo_inverse_rank_deficient():
    """Test that rank deficiency is reported with the singular value."""
    S = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    with pytest.raises(LinearizationError) as error:
        PseudoInverse(S)
    assert error.value.smallest_singular_value < 1e-10
