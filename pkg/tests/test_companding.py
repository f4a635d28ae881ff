# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Companded sampling tests."""

import math

import numpy as np
import pytest
from scipy.interpolate import CubicSpline
from test_helpers import HaarKernel

from nonlinear_sampling.algebra import PointSet
from nonlinear_sampling.companding import (
    GeneratorFamily,
    SamplingModel,
    companding_map,
    forward_sample,
    gap,
    intercorrelation,
    modified_companding_map,
    modified_reconstruction_matrix,
    reconstruct_hybrid,
    reconstruct_modified_van_cittert,
    reconstruct_van_cittert,
    reconstruction_matrix,
    riesz_bounds,
    sampling_map,
    sampling_stability,
    stability_constant,
    theoretical_step_range,
)
from nonlinear_sampling.errors import SamplingNotStabilizableError
from nonlinear_sampling.kernels import (
    BoxKernel,
    QuadratureRule,
    custom_companding,
    inner_product,
    make_cardinal_splines,
    make_gaussian_generator,
)
from nonlinear_sampling.solvers import estimate_monotonicity


def spline_model(companding, count=21, boxes=40, self_sampling=False):
    """Cardinal splines on uniform knots of [-1, 1] sampled by boxes."""
    generator = GeneratorFamily(make_cardinal_splines(np.linspace(-1.0, 1.0, count)))
    if self_sampling:
        sampler = generator
    else:
        width = 2.0 / boxes
        sampler = GeneratorFamily(
            [
                BoxKernel(-1.0 + i * width, -1.0 + (i + 1) * width, 1.0 / width)
                for i in range(boxes)
            ]
        )
    return SamplingModel(
        generator, sampler, companding, QuadratureRule(domain=(-1.0, 1.0))
    )


def mild_companding():
    """``F(t) = t + sin(t) / 5`` with ``F'`` in [0.8, 1.2]."""
    return custom_companding(
        lambda t: t + 0.2 * np.sin(t),
        lambda t: 1.0 + 0.2 * np.cos(t),
        lambda t: -0.2 * np.sin(t),
    )


def test_generator_family():
    """Test the family container."""
    family = GeneratorFamily.shifts(BoxKernel(0.0, 1.0), [0.0, 2.0, 4.0])
    assert len(family) == 3
    assert family.centers == PointSet([0.5, 2.5, 4.5])
    np.testing.assert_array_equal(family.supports[1], [2.0, 3.0])
    np.testing.assert_array_equal(family.values([0.5, 2.5]), [[1, 0, 0], [0, 1, 0]])
    assert family.decay_constant(beta=2.0) == pytest.approx(2.25, rel=1e-2)
    with pytest.raises(ValueError):
        GeneratorFamily([])
    with pytest.raises(ValueError):
        GeneratorFamily([BoxKernel(0.0, 1.0)], centers=[0.0, 1.0])


def test_intercorrelation_disjoint_and_self(rule):
    """Test disjoint supports and the symmetric case."""
    boxes = GeneratorFamily([BoxKernel(0.0, 1.0), BoxKernel(2.0, 3.0, 2.0)])
    matrix = intercorrelation(boxes, boxes, rule)
    np.testing.assert_allclose(matrix.entries, np.diag([1.0, 4.0]), atol=1e-14)
    assert matrix.entries[0, 1] == 0.0

    splines = GeneratorFamily(make_cardinal_splines(np.arange(8.0)))
    gram = intercorrelation(splines, splines, rule)
    np.testing.assert_allclose(gram.entries, gram.entries.T, atol=1e-14)
    assert np.linalg.eigvalsh(gram.entries)[0] > 0.0
    # cardinal splines sum to one
    np.testing.assert_allclose(
        gram.entries.sum(axis=1),
        [inner_product(1.0, spline, rule) for spline in splines],
        atol=1e-12,
    )


def test_intercorrelation_matches_piecewise_polynomials(rule):
    """Test spline Gram entries against exact piecewise integration."""
    knots = np.array([0.0, 0.3, 0.5, 1.0, 1.2, 1.7])
    family = GeneratorFamily(make_cardinal_splines(knots))
    gram = intercorrelation(family, family, rule)

    def cardinal(index):
        unit = np.zeros(knots.size)
        unit[index] = 1.0
        return CubicSpline(knots, unit, bc_type="natural")

    for i, j in ((0, 0), (1, 3), (2, 5), (4, 4)):
        first, second = cardinal(i), cardinal(j)
        total = 0.0
        for piece, width in enumerate(np.diff(knots)):
            product = np.polyint(np.polymul(first.c[:, piece], second.c[:, piece]))
            total += np.polyval(product, width)
        assert gram.entries[i, j] == pytest.approx(total, abs=1e-13)


def test_gap_of_self_sampling():
    """Test that a space has gap zero to itself."""
    model = spline_model(mild_companding(), self_sampling=True)
    assert gap(model) <= 1e-10
    assert not model.gap_report.degenerate


def test_gap_of_orthogonal_spaces(rule):
    """Test that orthogonal spaces have the degenerate gap one."""
    model = SamplingModel(
        GeneratorFamily([BoxKernel(0.0, 1.0)]),
        GeneratorFamily([HaarKernel()]),
        mild_companding(),
        rule,
    )
    assert gap(model) == 1.0
    assert model.gap_report.degenerate
    with pytest.raises(SamplingNotStabilizableError):
        reconstruction_matrix(model)


def test_single_function_families(rule, identity):
    """Test the scalar formulas of the gap and the reconstruction matrix."""
    phi = make_gaussian_generator()
    psi = BoxKernel(-0.5, 0.5)
    model = SamplingModel(
        GeneratorFamily([phi]), GeneratorFamily([psi]), identity, rule
    )
    phi_phi = inner_product(phi, phi, rule)
    psi_psi = inner_product(psi, psi, rule)
    psi_phi = inner_product(psi, phi, rule)
    cosine = psi_phi**2 / (psi_psi * phi_phi)
    assert gap(model) == pytest.approx(math.sqrt(1.0 - cosine), abs=1e-8)
    assert reconstruction_matrix(model).entries[0, 0] == pytest.approx(
        phi_phi / psi_phi, rel=1e-10
    )


def test_reconstruction_identity(companding_case):
    """Test the oblique projection identity ``R A_PsiPhi = A_PhiPhi``."""
    model = companding_case.model
    R = reconstruction_matrix(model)
    assert R.shape == (len(model.generator), len(model.sampler))
    np.testing.assert_allclose(
        (R @ model.cross_sampler_generator).entries,
        model.gram_generator.entries,
        atol=1e-9,
    )
    np.testing.assert_array_equal(
        model.cross_generator_sampler.entries, model.cross_sampler_generator.entries.T
    )
    assert 0.0 < gap(model) < 1.0
    modified = modified_reconstruction_matrix(model)
    np.testing.assert_allclose(
        (model.gram_generator @ modified).entries, R.entries, atol=1e-12
    )
    assert min(model.smallest_eigenvalues()) > 0.0


def test_forward_sample(companding_case, identity):
    """Test the forward map and its linear collapse."""
    model = companding_case.model
    np.testing.assert_array_equal(forward_sample(model, np.zeros(40)), np.zeros(80))
    with pytest.raises(ValueError):
        forward_sample(model, np.zeros(3))

    linear = SamplingModel(model.generator, model.sampler, identity, model.quadrature)
    c = companding_case.coefficients
    np.testing.assert_allclose(
        forward_sample(linear, c),
        model.cross_sampler_generator.entries @ c,
        atol=1e-10,
    )
    np.testing.assert_allclose(
        forward_sample(model.refined(), c), companding_case.samples, atol=1e-10
    )


def test_companding_map_gradient(companding_case, identity, rng):
    """Test gradients of the preconditioned map."""
    model = companding_case.model
    g = companding_map(model)
    np.testing.assert_allclose(
        g.gradient(np.zeros(40)).entries,
        0.5 * math.pi * model.gram_generator.entries,
        atol=1e-9,
    )
    linear = SamplingModel(model.generator, model.sampler, identity, model.quadrature)
    np.testing.assert_allclose(
        companding_map(linear).gradient(np.zeros(40)).entries,
        model.gram_generator.entries,
        atol=1e-9,
    )
    for _ in range(3):
        x = rng.uniform(-0.5, 0.5, 40)
        assert g.check_gradient(x) < 1e-5
    assert sampling_map(model).check_gradient(rng.uniform(-0.5, 0.5, 40)) < 1e-5


def test_companding_map_is_monotone_near_the_origin(companding_case):
    """Test that the symmetrized gradient is positive definite."""
    model = companding_case.model
    points = [np.zeros(40), 0.05 * companding_case.coefficients]
    report = estimate_monotonicity(companding_map(model), points)
    assert report.monotone


def test_van_cittert_zero_data(companding_case):
    """Test that zero samples are solved by the initial guess."""
    trace = reconstruct_van_cittert(companding_case.model, np.zeros(80), 0.3)
    assert trace.steps == 0
    assert trace.converged


def test_van_cittert_reduces_error(companding_case):
    """Test the sine companded reconstruction from zero."""
    trace = reconstruct_van_cittert(
        companding_case.model,
        companding_case.samples,
        0.3,
        tol=0.0,
        max_iter=50,
        reference=companding_case.coefficients,
    )
    errors = trace.errors[np.inf]
    assert len(errors) == 51
    assert errors[50] < errors[10] < errors[0]
    assert 0.0 < trace.rate < 1.0


@pytest.mark.parametrize("modified", [False, True])
def test_hybrid_reconstruction(companding_case, modified):
    """Test that both preconditioners lead the hybrid solver to the coefficients."""
    trace = reconstruct_hybrid(
        companding_case.model,
        companding_case.samples,
        0.3,
        max_iter=3000,
        modified=modified,
        radius=companding_case.radius,
        reference=companding_case.coefficients,
    )
    assert trace.converged
    assert trace.switch_index < trace.steps
    np.testing.assert_allclose(trace.solution, companding_case.coefficients, atol=1e-8)
    if modified:
        assert trace.steps <= 15


def test_modified_companding_map(companding_case):
    """Test that the modified map linearizes to a multiple of the identity."""
    model = companding_case.model
    g = modified_companding_map(model)
    count = len(model.generator)
    np.testing.assert_allclose(
        g.gradient(np.zeros(count)).entries, 0.5 * np.pi * np.eye(count), atol=1e-6
    )
    target = model.modified_reconstruction.entries @ companding_case.samples
    np.testing.assert_allclose(g(companding_case.coefficients), target, atol=1e-12)


def test_linear_pipeline_matches_least_squares(identity, rng):
    """Test that the linear pipeline returns the exact coefficients."""
    model = spline_model(identity)
    c = rng.uniform(-1.0, 1.0, 21)
    y = forward_sample(model, c)
    alpha = 1.0 / np.linalg.eigvalsh(model.gram_generator.entries)[-1]
    trace = reconstruct_hybrid(model, y, alpha, switch_ratio=0.5)
    np.testing.assert_allclose(trace.solution, c, atol=1e-9)


def test_modified_van_cittert_self_sampling(identity, rng):
    """Test one step convergence for self sampling without companding."""
    model = spline_model(identity, self_sampling=True)
    c = rng.uniform(-1.0, 1.0, 21)
    trace = reconstruct_modified_van_cittert(model, forward_sample(model, c), 1.0)
    assert trace.steps == 1
    assert trace.rate_bound == 0.0
    np.testing.assert_allclose(trace.solution, c, atol=1e-10)


def test_modified_van_cittert_rate(rng):
    """Test the contraction ratio against its bound for mild companding."""
    model = spline_model(mild_companding())
    c = rng.uniform(-1.0, 1.0, 21)
    trace = reconstruct_modified_van_cittert(
        model, forward_sample(model, c), 1.0, reference=c
    )
    assert trace.converged
    assert not trace.warnings
    assert trace.rate_bound == pytest.approx(0.2 / math.sqrt(1.0 - gap(model) ** 2))
    assert trace.rate <= trace.rate_bound + 0.05


def test_modified_van_cittert_warns(companding_case):
    """Test the warning when the companding condition fails."""
    with pytest.warns(RuntimeWarning):
        trace = reconstruct_modified_van_cittert(
            companding_case.model, companding_case.samples, 4.0 / math.pi, max_iter=2
        )
    assert trace.warnings


def test_theoretical_step_range(identity, companding_case):
    """Test the monotonicity constants of the preconditioned map."""
    model = spline_model(identity)
    m0, bound = theoretical_step_range(model, 1.0)
    lower, upper = riesz_bounds(model.gram_generator)
    assert m0 == pytest.approx(lower)
    assert bound == pytest.approx(upper / math.sqrt(1.0 - gap(model) ** 2))
    assert 0.0 < m0 <= bound
    assert theoretical_step_range(companding_case.model, 4.0 / math.pi) is None


def test_stability(identity, rng):
    """Test the stability sandwich and the noise amplification."""
    model = spline_model(identity)
    pairs = [(rng.uniform(-1, 1, 21), rng.uniform(-1, 1, 21)) for _ in range(5)]
    lower, upper = sampling_stability(model, pairs)
    assert 0.0 < lower <= upper
    with pytest.raises(ValueError):
        sampling_stability(model, [(np.ones(21), np.ones(21))])
    assert stability_constant(0.0, 0.5) == pytest.approx(2.0)
    assert stability_constant(0.6, 0.8) == np.inf
