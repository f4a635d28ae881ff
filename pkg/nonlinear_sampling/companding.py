# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Reconstruction of signals from companded average samples.

A signal ``h = sum_lambda c(lambda) phi_lambda`` in the space spanned by a
generator family is distorted pointwise by a companding function ``F``
and then averaged against a sampler family, giving the samples
``<F(h), psi_gamma>``. The coefficients are recovered by solving the
preconditioned equation ``R f(c) = R y`` with the reconstruction matrix
``R = A_PhiPhi (A_PhiPsi A_PsiPsi^{-1} A_PsiPhi)^{-1} A_PhiPsi A_PsiPsi^{-1}``.
"""

import logging
from collections import namedtuple

import numpy as np
from scipy import linalg
from werkzeug.utils import cached_property

from .algebra import LocalizedMatrix, PointSet, vector_norm
from .config import NLSAMPLING_SINGULAR_THRESHOLD
from .errors import SamplingNotStabilizableError
from .kernels import mu_of_companding
from .solvers import NonlinearMap, hybrid_solve, van_cittert_solve

logger = logging.getLogger("nonlinear-sampling")

GapReport = namedtuple("GapReport", ["delta", "mu_min", "degenerate"])
"""Gap between generator and sampler spaces with its eigenvalue."""


class GeneratorFamily(object):
    """Kernels indexed by a point set of centers."""

    def __init__(self, kernels, centers=None, decay_order=None):
        """Constructor.

        :param kernels: list of :class:`~nonlinear_sampling.kernels.Kernel`.
        :param centers: index points, defaults to the kernel centers.
        :param decay_order: declared decay order, defaults to the smallest
            order declared by the kernels.
        """
        self.kernels = list(kernels)
        if not self.kernels:
            raise ValueError("A generator family needs at least one kernel.")
        if centers is None:
            centers = [kernel.center for kernel in self.kernels]
        self.centers = PointSet.coerce(centers)
        if len(self.centers) != len(self.kernels):
            raise ValueError("Kernels and centers must have the same length.")
        if decay_order is None:
            decay_order = min(kernel.decay_order for kernel in self.kernels)
        self.decay_order = float(decay_order)

    @classmethod
    def shifts(cls, kernel, offsets):
        """Family of translates ``kernel(. - offset)``."""
        return cls([kernel.shifted(offset) for offset in offsets])

    def __len__(self):
        """Number of kernels."""
        return len(self.kernels)

    def __iter__(self):
        """Iterate over the kernels."""
        return iter(self.kernels)

    def __getitem__(self, index):
        """Kernel at ``index``."""
        return self.kernels[index]

    @property
    def breakpoints(self):
        """Breakpoints and support ends of all kernels."""
        return np.concatenate([kernel.integration_points for kernel in self.kernels])

    @property
    def supports(self):
        """Array of shape ``(n, 2)`` with the kernel supports."""
        return np.array([kernel.support for kernel in self.kernels])

    def values(self, t):
        """Matrix of kernel values, one column per kernel."""
        t = np.asarray(t, dtype=float)
        return np.column_stack([kernel.value(t) for kernel in self.kernels])

    def gradients(self, t):
        """Matrix of kernel derivatives, one column per kernel."""
        t = np.asarray(t, dtype=float)
        return np.column_stack([kernel.gradient(t) for kernel in self.kernels])

    def decay_constant(self, beta=None, samples=2001):
        """Largest ``|k(t)| (1 + |t - center|)^beta`` out to five radii."""
        beta = self.decay_order if beta is None else beta
        largest = 0.0
        for kernel in self.kernels:
            reach = 5.0 * kernel.support_radius
            offsets = np.linspace(-reach, reach, samples)
            weighted = (
                np.abs(kernel.value(kernel.center + offsets))
                * (1.0 + np.abs(offsets)) ** beta
            )
            largest = max(largest, float(np.max(weighted)))
        return largest


def _overlaps(first, second):
    """Boolean matrix telling which supports intersect."""
    return (first[:, None, 0] < second[None, :, 1]) & (
        second[None, :, 0] < first[:, None, 1]
    )


def _family_nodes(families, rule):
    """Quadrature nodes aligned with the breakpoints of several families."""
    lower = min(family.supports[:, 0].min() for family in families)
    upper = max(family.supports[:, 1].max() for family in families)
    breakpoints = np.concatenate([family.breakpoints for family in families])
    return rule.nodes(breakpoints, (lower, upper))


def intercorrelation(P, Q, rule):
    """Matrix of inner products ``<p_lambda, q_gamma>``.

    Rows are indexed by the centers of ``P`` and columns by those of ``Q``;
    entries of kernels with disjoint supports are zero.
    """
    nodes, weights = _family_nodes((P, Q), rule)
    entries = (weights[:, None] * P.values(nodes)).T @ Q.values(nodes)
    entries[~_overlaps(P.supports, Q.supports)] = 0.0
    return LocalizedMatrix(P.centers, Q.centers, entries)


def riesz_bounds(gram):
    """Square roots of the extreme eigenvalues of a Gram matrix."""
    values = linalg.eigvalsh(gram.entries)
    return float(np.sqrt(max(values[0], 0.0))), float(np.sqrt(values[-1]))


def stability_constant(delta, mu):
    """Noise amplification ``sqrt(1 - d^2) / (sqrt(1 - d^2) - mu)``."""
    root = np.sqrt(1.0 - delta * delta)
    if mu >= root:
        return np.inf
    return float(root / (root - mu))


class SamplingModel(object):
    """Generator, sampler, companding function and quadrature of a pipeline.

    All matrices are assembled lazily on one set of quadrature nodes that
    respects the breakpoints of both families, and cached afterwards.
    """

    def __init__(self, generator, sampler, companding, quadrature):
        """Constructor.

        :param generator: :class:`GeneratorFamily` spanning the signals.
        :param sampler: :class:`GeneratorFamily` of averaging functions.
        :param companding: :class:`~nonlinear_sampling.kernels.CompandingFunction`.
        :param quadrature: :class:`~nonlinear_sampling.kernels.QuadratureRule`
            whose domain is the signal window.
        """
        self.generator = generator
        self.sampler = sampler
        self.companding = companding
        self.quadrature = quadrature

    def refined(self):
        """The same model on a quadrature rule with twice the nodes."""
        return SamplingModel(
            self.generator, self.sampler, self.companding, self.quadrature.refined()
        )

    @cached_property
    def _nodes(self):
        """Quadrature nodes and weights shared by all assemblies."""
        return _family_nodes((self.generator, self.sampler), self.quadrature)

    @cached_property
    def _generator_values(self):
        """Generator values at the nodes."""
        return self.generator.values(self._nodes[0])

    @cached_property
    def _weighted_sampler(self):
        """Sampler values at the nodes times the quadrature weights."""
        nodes, weights = self._nodes
        return weights[:, None] * self.sampler.values(nodes)

    def _assemble(self, left, right, left_values, right_values):
        """Inner product matrix of two families from node values."""
        weights = self._nodes[1]
        entries = (weights[:, None] * left_values).T @ right_values
        entries[~_overlaps(left.supports, right.supports)] = 0.0
        return LocalizedMatrix(left.centers, right.centers, entries)

    @cached_property
    def gram_generator(self):
        """``A_PhiPhi``."""
        values = self._generator_values
        return self._assemble(self.generator, self.generator, values, values)

    @cached_property
    def gram_sampler(self):
        """``A_PsiPsi``."""
        values = self.sampler.values(self._nodes[0])
        return self._assemble(self.sampler, self.sampler, values, values)

    @cached_property
    def cross_sampler_generator(self):
        """``A_PsiPhi``, rows indexed by the sampler centers."""
        values = self.sampler.values(self._nodes[0])
        return self._assemble(
            self.sampler, self.generator, values, self._generator_values
        )

    @property
    def cross_generator_sampler(self):
        """``A_PhiPsi``, the exact transpose of ``A_PsiPhi``."""
        return self.cross_sampler_generator.T

    def smallest_eigenvalues(self):
        """Smallest eigenvalues of ``A_PhiPhi`` and ``A_PsiPsi``."""
        return (
            float(linalg.eigvalsh(self.gram_generator.entries)[0]),
            float(linalg.eigvalsh(self.gram_sampler.entries)[0]),
        )

    @cached_property
    def _sampler_projection(self):
        """``A_PsiPsi^{-1} A_PsiPhi`` and ``A_PhiPsi A_PsiPsi^{-1} A_PsiPhi``."""
        try:
            factor = linalg.cho_factor(self.gram_sampler.entries)
        except linalg.LinAlgError:
            raise SamplingNotStabilizableError(
                "Sampler Gram matrix is not positive definite."
            )
        solved = linalg.cho_solve(factor, self.cross_sampler_generator.entries)
        inner = self.cross_sampler_generator.entries.T @ solved
        return solved, 0.5 * (inner + inner.T)

    @cached_property
    def gap_report(self):
        """:class:`GapReport` from the generalized eigenvalue problem.

        Self-sampling, where all three inner product matrices coincide, has
        gap zero exactly.
        """
        gram = self.gram_generator.entries
        if np.array_equal(gram, self.gram_sampler.entries) and np.array_equal(
            gram, self.cross_sampler_generator.entries
        ):
            return GapReport(0.0, 1.0, False)
        _, inner = self._sampler_projection
        try:
            values = linalg.eigh(inner, gram, eigvals_only=True)
        except linalg.LinAlgError:
            raise SamplingNotStabilizableError(
                "Generator Gram matrix is not positive definite."
            )
        mu_min = float(values[0])
        degenerate = mu_min <= NLSAMPLING_SINGULAR_THRESHOLD * max(values[-1], 1.0)
        delta = 1.0 if degenerate else float(np.sqrt(np.clip(1.0 - mu_min, 0.0, 1.0)))
        if degenerate:
            logger.warning("Gap is degenerate (smallest eigenvalue %.3e).", mu_min)
        return GapReport(delta, mu_min, degenerate)

    @cached_property
    def modified_reconstruction(self):
        """``(A_PhiPsi A_PsiPsi^{-1} A_PsiPhi)^{-1} A_PhiPsi A_PsiPsi^{-1}``."""
        if self.gap_report.degenerate:
            raise SamplingNotStabilizableError("Sampling is not stabilizable.")
        solved, inner = self._sampler_projection
        try:
            entries = linalg.solve(inner, solved.T, assume_a="pos")
        except (linalg.LinAlgError, ValueError):
            raise SamplingNotStabilizableError("Sampling is not stabilizable.")
        return LocalizedMatrix(self.generator.centers, self.sampler.centers, entries)

    @cached_property
    def reconstruction(self):
        """The reconstruction matrix ``R``."""
        return self.gram_generator @ self.modified_reconstruction

    def sample(self, c):
        """Samples ``<F(c^T Phi), Psi>``."""
        signal = self._generator_values @ np.asarray(c, dtype=float)
        return self._weighted_sampler.T @ self.companding(signal)

    def sample_gradient(self, c):
        """Matrix ``<F'(c^T Phi) phi_lambda, psi_gamma>``."""
        signal = self._generator_values @ np.asarray(c, dtype=float)
        slope = self.companding.derivative(signal)
        entries = self._weighted_sampler.T @ (slope[:, None] * self._generator_values)
        return LocalizedMatrix(self.sampler.centers, self.generator.centers, entries)

    def signal(self, c, t):
        """Evaluate ``c^T Phi`` at ``t``."""
        return self.generator.values(t) @ np.asarray(c, dtype=float)


def gap(model):
    """Gap between the generator and sampler spaces, clamped to [0, 1]."""
    return model.gap_report.delta


def reconstruction_matrix(model):
    """Reconstruction matrix ``R`` of the model.

    :raises SamplingNotStabilizableError: for a degenerate gap or a
        singular inner matrix.
    """
    return model.reconstruction


def modified_reconstruction_matrix(model):
    """Modified reconstruction matrix ``R~`` with ``R = A_PhiPhi R~``."""
    return model.modified_reconstruction


def forward_sample(model, c):
    """Samples of the companded signal with coefficients ``c``."""
    c = np.asarray(c, dtype=float)
    if c.size != len(model.generator):
        raise ValueError("Coefficient vector does not match the generator.")
    return model.sample(c)


def sampling_map(model):
    """The sampling map ``c -> <F(c^T Phi), Psi>`` without preconditioning."""
    return NonlinearMap(
        model.sample,
        model.sample_gradient,
        model.generator.centers,
        model.sampler.centers,
    )


def _preconditioned_map(model, matrix):
    """The map ``c -> M <F(c^T Phi), Psi>``."""
    return NonlinearMap(
        lambda c: matrix.entries @ model.sample(c),
        lambda c: matrix @ model.sample_gradient(c),
        model.generator.centers,
    )


def companding_map(model):
    """The preconditioned map ``g = R f`` and its gradient."""
    return _preconditioned_map(model, reconstruction_matrix(model))


def modified_companding_map(model):
    """The map ``c -> R~ f(c)`` iterated by the modified Van-Cittert method."""
    return _preconditioned_map(model, modified_reconstruction_matrix(model))


def reconstruct_van_cittert(model, y, alpha, tol=None, max_iter=None, **options):
    """Van-Cittert iteration on ``R f(c) = R y``.

    Extra keyword arguments (``x0``, ``reference``, ``observe``,
    ``report``, ``keep_iterates``) are passed to
    :func:`~nonlinear_sampling.solvers.van_cittert_solve`.
    """
    target = reconstruction_matrix(model).entries @ np.asarray(y, dtype=float)
    return van_cittert_solve(
        companding_map(model),
        target,
        alpha=alpha,
        **_limits(tol, max_iter, options),
    )


def reconstruct_hybrid(
    model,
    y,
    alpha,
    switch_ratio=None,
    tol=None,
    max_iter=None,
    modified=False,
    **options,
):
    """Van-Cittert followed by quasi-Newton on ``R f(c) = R y``.

    With ``modified`` the equation is preconditioned by the modified
    reconstruction matrix ``R~`` instead, which changes the Van-Cittert
    steps and the switch point but not the quasi-Newton steps. Extra
    keyword arguments (``radius``, ``growth`` and those of
    :func:`reconstruct_van_cittert`) go to
    :func:`~nonlinear_sampling.solvers.hybrid_solve`.
    """
    if switch_ratio is not None:
        options["switch_ratio"] = switch_ratio
    matrix = model.modified_reconstruction if modified else reconstruction_matrix(model)
    target = matrix.entries @ np.asarray(y, dtype=float)
    return hybrid_solve(
        _preconditioned_map(model, matrix),
        target,
        alpha=alpha,
        **_limits(tol, max_iter, options),
    )


def _limits(tol, max_iter, options):
    """Merge optional stopping parameters into solver options."""
    if tol is not None:
        options["tol"] = tol
    if max_iter is not None:
        options["max_iter"] = max_iter
    return options


def reconstruct_modified_van_cittert(
    model, y, m, tol=None, max_iter=None, amplitude_interval=None, **options
):
    """Iterate ``x_{n+1} = x_n - m R~ (<Psi, F(x_n^T Phi)> - y)``.

    ``R~`` is the modified reconstruction matrix. The contraction bound
    ``mu / sqrt(1 - delta^2)`` is stored as ``rate_bound`` of the trace and
    a warning is attached when ``mu < sqrt(1 - delta^2)`` fails, ``mu``
    being evaluated over ``amplitude_interval`` (the companding function's
    declared interval by default).
    """
    interval = amplitude_interval or model.companding.interval
    mu = mu_of_companding(model.companding, m, interval)
    delta = gap(model)
    root = np.sqrt(1.0 - delta * delta)
    matrix = model.modified_reconstruction
    target = matrix.entries @ np.asarray(y, dtype=float)
    trace = van_cittert_solve(
        _preconditioned_map(model, matrix),
        target,
        alpha=m,
        **_limits(tol, max_iter, options),
    )
    trace.rate_bound = mu / root if root > 0 else np.inf
    if not mu < root:
        trace.warn(
            "Companding condition mu={0:.3f} < sqrt(1-delta^2)={1:.3f} fails.".format(
                mu, root
            )
        )
    return trace


def theoretical_step_range(model, m, amplitude_interval=None):
    """Monotonicity constant and gradient bound of ``g = R f``.

    Returns ``(m0, L)`` with ``m0 = A1 (1 - mu - mu d / sqrt(1 - d^2)) / m``
    and ``L = B1 (1 + mu) / (m sqrt(1 - d^2))`` where ``A1, B1`` are the
    Riesz bounds of the generator; returns ``None`` when
    ``mu < sqrt(1 - d^2) / (d + sqrt(1 - d^2))`` fails.
    """
    interval = amplitude_interval or model.companding.interval
    mu = mu_of_companding(model.companding, m, interval)
    delta = gap(model)
    root = np.sqrt(1.0 - delta * delta)
    if root == 0.0 or not mu < root / (delta + root):
        return None
    lower, upper = riesz_bounds(model.gram_generator)
    m0 = lower * (1.0 - mu - mu * delta / root) / m
    bound = upper * (1.0 + mu) / (m * root)
    return m0, bound


def sampling_stability(model, pairs):
    """Empirical constants of ``C1 |c1 - c2| <= |S(c1) - S(c2)| <= C2 |c1 - c2|``.

    Norms are sup norms; pairs with equal coefficients are skipped.
    """
    ratios = []
    for first, second in pairs:
        distance = vector_norm(np.subtract(first, second), np.inf)
        if distance == 0.0:
            continue
        change = vector_norm(model.sample(first) - model.sample(second), np.inf)
        ratios.append(change / distance)
    if not ratios:
        raise ValueError("At least one pair of distinct coefficients is needed.")
    return min(ratios), max(ratios)
