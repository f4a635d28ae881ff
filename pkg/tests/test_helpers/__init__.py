# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Test helpers."""

import numpy as np
import pytest

from nonlinear_sampling.algebra import LocalizedMatrix, PointSet
from nonlinear_sampling.kernels import GaussianKernel, Kernel
from nonlinear_sampling.solvers import NonlinearMap

with_norm_orders = pytest.mark.parametrize("p", [1, 2, np.inf])
"""Decorator running a test for the l1, l2 and sup norms."""


def decaying_spd(rng, size, beta=3.0):
    """Random symmetric positive definite matrix with polynomial decay.

    Entries are ``u (1 + |i - j|)^(-beta)`` off the diagonal and the
    diagonal dominates the row sums.
    """
    points = np.arange(size, dtype=float)
    distances = np.abs(points[:, None] - points[None, :])
    entries = rng.uniform(-1.0, 1.0, (size, size)) * (1.0 + distances) ** (-beta)
    entries = 0.5 * (entries + entries.T)
    np.fill_diagonal(entries, 0.0)
    diagonal = np.sum(np.abs(entries), axis=1) + rng.uniform(0.5, 1.5, size)
    entries[np.diag_indices(size)] = diagonal
    return LocalizedMatrix(points, points, entries)


def tridiagonal(size, diagonal=3.0, off=-1.0):
    """Tridiagonal matrix on the integers ``0, ..., size - 1``."""
    entries = (
        np.diag(np.full(size, diagonal))
        + np.diag(np.full(size - 1, off), 1)
        + np.diag(np.full(size - 1, off), -1)
    )
    return LocalizedMatrix.from_array(entries)


def cubic_map(A, beta):
    """Map ``x -> A x + beta x^3`` with its gradient."""
    return NonlinearMap(
        lambda x: A.entries @ x + beta * x**3,
        lambda x: A.entries + np.diag(3.0 * beta * x**2),
        A.col_set,
    )


def points(values):
    """Point set shortcut."""
    return PointSet(values)


class HaarKernel(Kernel):
    """Haar wavelet on [0, 1)."""

    family = "haar"

    def __init__(self):
        """Constructor."""
        super(HaarKernel, self).__init__(0.5, 0.5, (0.0, 0.5, 1.0))

    def value(self, t):
        """Kernel value."""
        t = np.asarray(t, dtype=float)
        return np.select([(t >= 0.0) & (t < 0.5), (t >= 0.5) & (t < 1.0)], [1.0, -1.0])

    def gradient(self, t):
        """First derivative, zero away from the jumps."""
        return np.zeros(np.shape(t))

    hessian = gradient


class FlatGaussianKernel(GaussianKernel):
    """Gaussian whose derivative transform is declared to vanish."""

    def gradient_fourier(self, xi, rule=None):
        """Zero transform."""
        return np.zeros(np.shape(xi), dtype=complex)
