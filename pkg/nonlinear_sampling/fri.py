# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Signals with finite rate of innovation.

A signal ``h(t) = sum_lambda (c0 + c)(lambda) phi(t - lambda - sigma(lambda))``
is identified from its companded samples ``<F(h), psi_gamma>`` by a
Van-Cittert iteration on the map linearized at ``(Lambda0, c0)``. In a
perturbed shift-invariant space the approximations ``Lambda0`` and ``c0``
are found blindly with dual filters built from bracket products.
"""

import logging
import warnings
from collections import namedtuple

import numpy as np
from werkzeug.utils import cached_property

from .algebra import LocalizedMatrix, PointSet, PseudoInverse, operator_norm
from .companding import GeneratorFamily
from .config import (
    NLSAMPLING_ALIAS_RANGE,
    NLSAMPLING_DEFAULT_SEED,
    NLSAMPLING_FILTER_TOL,
    NLSAMPLING_FREQUENCY_GRID,
    NLSAMPLING_IDENTIFY_ALPHA,
    NLSAMPLING_LOCALITY_CONSTANT,
    NLSAMPLING_LOCALITY_RADII,
    NLSAMPLING_RANK_TOL,
    NLSAMPLING_SOLVER_MAX_ITER,
    NLSAMPLING_SOLVER_TOL,
)
from .errors import (
    ConfigurationError,
    LinearizationError,
    OutOfRegimeError,
    RankConditionError,
)
from .kernels import QuadratureRule, identity_companding
from .solvers import NonlinearMap, SolverTrace, van_cittert_solve

logger = logging.getLogger("nonlinear-sampling")

STABILITY_RATIO = 1e-8
"""Smallest admissible ratio of the extreme singular values of ``S``."""

THRESHOLD_AMBIGUITY = 1e-6
"""Distance to the support threshold below which an entry is ambiguous."""

RESIDUAL_RATIO = 1e-6
"""Largest relative sample residual accepted from blind recovery."""


class FriSignal(object):
    """Weighted translates ``sum c(lambda) phi(t - lambda)`` on a window."""

    def __init__(self, impulse, positions, amplitudes, window):
        """Constructor.

        :param impulse: :class:`~nonlinear_sampling.kernels.Kernel` centered
            at the origin.
        :param positions: innovation positions.
        :param amplitudes: one amplitude per position.
        :param window: interval ``(a, b)`` carrying the samples.
        """
        self.impulse = impulse
        self.positions = PointSet.coerce(positions)
        self.amplitudes = np.array(amplitudes, dtype=float).reshape(-1)
        if self.amplitudes.size != len(self.positions):
            raise ValueError("Positions and amplitudes must have the same length.")
        self.window = (float(window[0]), float(window[1]))
        if not self.window[0] < self.window[1]:
            raise ValueError("Window must be a non-empty interval.")

    def __len__(self):
        """Number of innovations."""
        return len(self.positions)

    def __repr__(self):
        """Short representation."""
        return "FriSignal({0} innovations on {1})".format(len(self), self.window)

    @property
    def breakpoints(self):
        """Breakpoints of all translates of the impulse."""
        points = self.impulse.integration_points
        return (self.positions.points[:, None] + points[None, :]).ravel()

    def evaluate(self, t):
        """Signal values at ``t``."""
        t = np.asarray(t, dtype=float)
        offsets = t[..., None] - self.positions.points
        return self.impulse.value(offsets) @ self.amplitudes

    __call__ = evaluate

    def perturbed(self, sigma, c):
        """Signal with positions ``lambda + sigma`` and amplitudes ``c0 + c``."""
        return FriSignal(
            self.impulse,
            self.positions.points + np.asarray(sigma, dtype=float),
            self.amplitudes + np.asarray(c, dtype=float),
            self.window,
        )


class _Assembly(object):
    """Quadrature of ``F(h)`` against a sampler family around a base signal."""

    def __init__(self, base, sampler, companding, rule):
        """Quadrature nodes on the window and weighted sampler values."""
        self.base = base
        self.sampler = sampler
        self.companding = companding
        breakpoints = np.concatenate((sampler.breakpoints, base.breakpoints))
        nodes, weights = rule.nodes(breakpoints, base.window)
        self.nodes = nodes
        self.weighted = weights[:, None] * sampler.values(nodes)

    def _split(self, x):
        """Shift and amplitude halves of a stacked vector."""
        x = np.asarray(x, dtype=float)
        count = len(self.base)
        if x.size != 2 * count:
            raise ValueError("Expected {0} unknowns.".format(2 * count))
        return x[:count], x[count:]

    def _offsets(self, sigma):
        """Matrix ``t - lambda - sigma`` over nodes and innovations."""
        positions = self.base.positions.points + sigma
        return self.nodes[:, None] - positions[None, :]

    def samples(self, x):
        """Samples ``<F(h), psi_gamma>`` of the signal perturbed by ``x``."""
        sigma, c = self._split(x)
        amplitudes = self.base.amplitudes + c
        signal = self.base.impulse.value(self._offsets(sigma)) @ amplitudes
        return self.weighted.T @ self.companding(signal)

    def jacobian(self, x):
        """Derivative of :meth:`samples`, shift block first."""
        sigma, c = self._split(x)
        amplitudes = self.base.amplitudes + c
        offsets = self._offsets(sigma)
        values = self.base.impulse.value(offsets)
        slope = self.companding.derivative(values @ amplitudes)[:, None]
        shift_block = -(slope * self.base.impulse.gradient(offsets)) * amplitudes
        return np.hstack(
            (self.weighted.T @ shift_block, self.weighted.T @ (slope * values))
        )


def perturbed_samples(base, sampler, F, rule):
    """Callable ``(sigma, c) -> <F(h) chi_window, psi_gamma>`` around ``base``.

    The argument is the stacked vector of shifts followed by amplitude
    corrections.
    """
    return _Assembly(base, sampler, F, rule).samples


def sample_signal(signal, sampler, F, rule):
    """Samples ``<F(h) chi_window, psi_gamma>`` of a signal."""
    return perturbed_samples(signal, sampler, F, rule)(np.zeros(2 * len(signal)))


def _unknowns(base):
    """Index set of the stacked unknowns ``(sigma, c)``."""
    return PointSet.integers(0, 2 * len(base) - 1)


class Linearization(
    namedtuple("Linearization", ["matrix", "lower_bound", "upper_bound", "base"])
):
    """Linearized sampling matrix ``S`` at ``(Lambda0, c0)``.

    ``lower_bound`` and ``upper_bound`` are the extreme singular values of
    ``S``.
    """

    __slots__ = ()

    @property
    def stable(self):
        """Whether ``S`` has numerically full column rank."""
        return self.lower_bound > STABILITY_RATIO * self.upper_bound

    @property
    def pseudo_inverse(self):
        """Least squares solver for ``S``.

        :raises LinearizationError: when ``S`` is not stable.
        """
        return PseudoInverse(self.matrix, threshold=STABILITY_RATIO**2)


def linearize(signal_base, sampler, F, rule):
    """Linearization of the sampling process at ``signal_base``.

    Row ``gamma`` holds ``-c0(lambda) <F'(h0) phi'(. - lambda), psi_gamma>``
    followed by ``<F'(h0) phi(. - lambda), psi_gamma>``.
    """
    assembly = _Assembly(signal_base, sampler, F, rule)
    entries = assembly.jacobian(np.zeros(2 * len(signal_base)))
    if entries.size:
        values = np.linalg.svd(entries, compute_uv=False)
        lower = float(values[-1]) if entries.shape[0] >= entries.shape[1] else 0.0
        upper = float(values[0])
    else:
        lower = upper = 0.0
    logger.debug("Linearization singular values in [%.3e, %.3e].", lower, upper)
    return Linearization(
        LocalizedMatrix(sampler.centers, _unknowns(signal_base), entries),
        lower,
        upper,
        signal_base,
    )


def identification_map(lin, sampler, F, rule):
    """Map ``(sigma, c) -> (S^T S)^{-1} S^T <F(h) - F(h0), Psi>``.

    :raises LinearizationError: when the linearization is not stable.
    """
    if not lin.stable:
        raise LinearizationError(
            "Linearization not stable: singular values in [{0:.3e}, {1:.3e}].".format(
                lin.lower_bound, lin.upper_bound
            ),
            smallest_singular_value=lin.lower_bound,
        )
    assembly = _Assembly(lin.base, sampler, F, rule)
    solver = lin.pseudo_inverse
    origin = assembly.samples(np.zeros(2 * len(lin.base)))
    unknowns = _unknowns(lin.base)
    return NonlinearMap(
        lambda x: solver.apply(assembly.samples(x) - origin),
        lambda x: LocalizedMatrix(
            unknowns, unknowns, solver.apply(assembly.jacobian(x))
        ),
        unknowns,
    )


def identification_target(lin, sampler, F, rule, y):
    """Right hand side ``z0 = (S^T S)^{-1} S^T (y - <F(h0), Psi>)``."""
    assembly = _Assembly(lin.base, sampler, F, rule)
    origin = assembly.samples(np.zeros(2 * len(lin.base)))
    return lin.pseudo_inverse.apply(np.asarray(y, dtype=float) - origin)


def identify(
    lin,
    sampler,
    F,
    rule,
    y,
    alpha=NLSAMPLING_IDENTIFY_ALPHA,
    tol=NLSAMPLING_SOLVER_TOL,
    max_iter=NLSAMPLING_SOLVER_MAX_ITER,
    delta0=None,
    reference=None,
    observe=None,
    keep_iterates=False,
):
    """Identify shifts and amplitude corrections from samples ``y``.

    Runs ``x_{n+1} = x_n - alpha (f(x_n) - z0)`` from zero where ``f`` is
    the :func:`identification_map`.

    :param delta0: locality radius of the perturbations; a target beyond
        it attaches a warning and iterates leaving ``10 delta0`` raise.
    :param reference: stacked true ``(sigma, c)`` enabling error columns.
    :param observe: callable of the stacked iterate recorded per iteration.
    :returns: ``(sigma, c, trace)``.
    :raises DivergenceError: when the iterates leave the locality regime.
    """
    count = len(lin.base)
    if count == 0:
        trace = SolverTrace("van_cittert", keep_iterates)
        trace.record(np.empty(0), 0.0)
        trace.converged = True
        return np.empty(0), np.empty(0), trace
    f = identification_map(lin, sampler, F, rule)
    target = identification_target(lin, sampler, F, rule, y)
    radius = None
    if delta0 is not None:
        radius = 10.0 * delta0
        if np.max(np.abs(target)) > delta0:
            warnings.warn(
                "Initial target {0:.3e} exceeds the locality radius {1:g}.".format(
                    np.max(np.abs(target)), delta0
                ),
                RuntimeWarning,
                stacklevel=2,
            )
    trace = van_cittert_solve(
        f,
        target,
        alpha=alpha,
        tol=tol,
        max_iter=max_iter,
        reference=reference,
        observe=observe,
        keep_iterates=keep_iterates,
        radius=radius,
    )
    return trace.solution[:count], trace.solution[count:], trace


def calibrate_locality(
    lin,
    sampler,
    F,
    rule,
    radii=NLSAMPLING_LOCALITY_RADII,
    seed=NLSAMPLING_DEFAULT_SEED,
    draws=4,
    constant=NLSAMPLING_LOCALITY_CONSTANT,
):
    """Largest radius with ``||grad f(sigma, c) - I|| <= constant`` in sup norm.

    Perturbations of sup norm equal to each radius are drawn at random;
    radii are tried in increasing order until one fails. Returns ``0.0``
    when even the smallest radius fails.
    """
    f = identification_map(lin, sampler, F, rule)
    identity = np.eye(f.dimension)
    generator = np.random.default_rng(seed)
    accepted = 0.0
    for radius in sorted(radii):
        worst = 0.0
        for _ in range(draws):
            direction = generator.uniform(-1.0, 1.0, f.dimension)
            direction /= np.max(np.abs(direction))
            deviation = f.gradient(radius * direction).entries - identity
            worst = max(worst, operator_norm(deviation, np.inf))
        logger.debug("Locality radius %g: deviation %.3e.", radius, worst)
        if worst > constant:
            break
        accepted = float(radius)
    return accepted


def ell_infinity_oslash(c):
    """``sup |c(k)| + 1 / |c(k)|`` over the nonzero entries."""
    c = np.abs(np.asarray(c, dtype=float)).reshape(-1)
    c = c[c > 0.0]
    if not c.size:
        return 0.0
    return float(np.max(c + 1.0 / c))


class BlindConfig(object):
    """Samplers and bounds of blind recovery in a perturbed shift-invariant space."""

    FILTER_MODES = ("bracket", "joint")

    def __init__(
        self,
        samplers,
        amplitude_bound,
        perturbation_bound,
        grid_size=NLSAMPLING_FREQUENCY_GRID,
        alias_range=NLSAMPLING_ALIAS_RANGE,
        filter_mode="bracket",
        filter_tol=NLSAMPLING_FILTER_TOL,
        rule=None,
    ):
        """Constructor.

        :param samplers: kernels ``psi_1, ..., psi_M``.
        :param amplitude_bound: bound ``L >= 1`` of the amplitude norm.
        :param perturbation_bound: bound of the shift perturbations.
        :param grid_size: number of frequencies, a power of two of at
            least 256.
        :param alias_range: number of ``2 pi`` translates on each side.
        :param filter_mode: ``bracket`` for the filters
            ``conj([phi, psi_m]) / R``, ``joint`` for filters that also
            cancel first order shift errors.
        :param filter_tol: taps below this magnitude are truncated.
        :param rule: quadrature rule for transforms and samples.
        """
        self.samplers = list(samplers)
        if not self.samplers:
            raise ConfigurationError("At least one sampler is needed.")
        if amplitude_bound < 1.0:
            raise ConfigurationError("Amplitude bound must be at least 1.")
        grid_size = int(grid_size)
        if grid_size < 256 or grid_size & (grid_size - 1):
            raise ConfigurationError(
                "Grid size must be a power of two of at least 256."
            )
        if filter_mode not in self.FILTER_MODES:
            raise ConfigurationError("Unknown filter mode {0}.".format(filter_mode))
        self.amplitude_bound = float(amplitude_bound)
        self.perturbation_bound = float(perturbation_bound)
        self.grid_size = grid_size
        self.alias_range = int(alias_range)
        self.filter_mode = filter_mode
        self.filter_tol = float(filter_tol)
        self.rule = rule or QuadratureRule()

    @property
    def threshold(self):
        """Support threshold ``1 / (2 L)``."""
        return 0.5 / self.amplitude_bound

    @cached_property
    def frequencies(self):
        """Frequency grid ``2 pi k / N`` folded into ``[-pi, pi)``."""
        return 2.0 * np.pi * np.fft.fftfreq(self.grid_size)

    @cached_property
    def aliased_frequencies(self):
        """Frequencies ``xi + 2 pi l`` of shape ``(2 l_max + 1, N)``."""
        shifts = 2.0 * np.pi * np.arange(-self.alias_range, self.alias_range + 1)
        return self.frequencies[None, :] + shifts[:, None]

    def sampler_family(self, indices):
        """Translates ``psi_m(. - k)`` ordered by sampler, then by ``k``."""
        kernels = [
            sampler.shifted(float(k)) for sampler in self.samplers for k in indices
        ]
        return GeneratorFamily(kernels, centers=np.arange(len(kernels)))


def bracket_product(f_hat_grid, g_hat_grid):
    """Bracket product ``sum_l f^(xi + 2 pi l) conj(g^(xi + 2 pi l))``.

    Both grids carry the alias index on their first axis; one dimensional
    grids are taken without aliasing.
    """
    f_hat_grid = np.asarray(f_hat_grid)
    g_hat_grid = np.asarray(g_hat_grid)
    if f_hat_grid.shape != g_hat_grid.shape:
        raise ValueError("Bracket product needs grids of the same shape.")
    product = f_hat_grid * np.conj(g_hat_grid)
    if product.ndim == 1:
        return product
    return product.sum(axis=0)


def _bracket_rows(config, phi):
    """Brackets ``[phi'^, psi_m^]`` and ``[phi^, psi_m^]`` of shape ``(M, N)``."""
    frequencies = config.aliased_frequencies
    phi_hat = phi.fourier(frequencies, rule=config.rule)
    gradient_hat = phi.gradient_fourier(frequencies, rule=config.rule)
    gradient_rows, value_rows = [], []
    for sampler in config.samplers:
        psi_hat = sampler.fourier(frequencies, rule=config.rule)
        gradient_rows.append(bracket_product(gradient_hat, psi_hat))
        value_rows.append(bracket_product(phi_hat, psi_hat))
    return np.array(gradient_rows), np.array(value_rows)


RankReport = namedtuple("RankReport", ["min_sigma", "holds"])
"""Smallest second singular value of the bracket matrices and the verdict."""


def _bracket_matrices(gradient_rows, value_rows):
    """Stack of the ``2 x M`` bracket matrices, one per frequency."""
    return np.stack((gradient_rows.T, value_rows.T), axis=1)


def _rank_margin(matrices):
    """Smallest second singular value over the stack."""
    if matrices.shape[2] < 2:
        return 0.0
    values = np.linalg.svd(matrices, compute_uv=False)
    return float(np.min(values[:, 1]))


def check_rank_condition(config, phi):
    """Smallest second singular value of the bracket matrices over the grid.

    The matrix at ``xi`` has the rows ``[phi'^, psi_m^](xi)`` and
    ``[phi^, psi_m^](xi)``; a single sampler never satisfies the condition.

    :returns: :class:`RankReport`.
    """
    if len(config.samplers) < 2:
        return RankReport(0.0, False)
    min_sigma = _rank_margin(_bracket_matrices(*_bracket_rows(config, phi)))
    return RankReport(min_sigma, bool(min_sigma > NLSAMPLING_RANK_TOL))


class DualFilters(namedtuple("DualFilters", ["taps", "radius"])):
    """Filter taps ``r_m(k)`` for ``|k| <= radius``, one row per sampler."""

    __slots__ = ()

    @property
    def offsets(self):
        """Tap positions ``-radius, ..., radius``."""
        return np.arange(-self.radius, self.radius + 1)


def dual_filters(config, phi):
    """Dual filters of the samplers in the space spanned by ``phi``.

    :raises RankConditionError: when the filters cannot be formed.
    """
    gradient_rows, value_rows = _bracket_rows(config, phi)
    if config.filter_mode == "joint":
        matrices = _bracket_matrices(gradient_rows, value_rows)
        min_sigma = _rank_margin(matrices)
        if not min_sigma > NLSAMPLING_RANK_TOL:
            raise RankConditionError(
                "Rank condition fails (smallest value {0:.3e}).".format(min_sigma)
            )
        symbols = np.linalg.pinv(matrices)[:, :, 1].T
    else:
        energy = np.sum(np.abs(value_rows) ** 2, axis=0)
        if np.min(energy) <= NLSAMPLING_RANK_TOL * max(np.max(energy), 1.0):
            raise RankConditionError("Brackets of the samplers vanish together.")
        symbols = np.conj(value_rows) / energy
    coefficients = np.fft.ifft(symbols, axis=1)
    taps = np.real(coefficients)
    half = config.grid_size // 2
    magnitude = np.max(np.abs(taps), axis=0)
    offsets = np.arange(config.grid_size)
    offsets[offsets >= half] -= config.grid_size
    large = np.abs(offsets[magnitude >= config.filter_tol])
    radius = int(large.max()) if large.size else 0
    if radius >= half - 1:
        logger.warning("Dual filters do not decay on a grid of %d.", config.grid_size)
        radius = half - 1
    window = np.arange(-radius, radius + 1)
    return DualFilters(taps[:, window % config.grid_size], radius)


def blind_samples(config, signal, indices):
    """Samples ``<h, psi_m(. - k)>`` stacked as an array of shape ``(M, K)``."""
    indices = np.asarray(indices)
    family = config.sampler_family(indices)
    values = sample_signal(
        _windowed(signal, family), family, identity_companding(), config.rule
    )
    return values.reshape(len(config.samplers), indices.size)


def _windowed(signal, family):
    """The signal on the hull of the sampler supports."""
    supports = family.supports
    return FriSignal(
        signal.impulse,
        signal.positions,
        signal.amplitudes,
        (supports[:, 0].min(), supports[:, 1].max()),
    )


def blind_filter(config, phi, samples, start=0):
    """Filtered amplitudes ``c~(k) = sum_m sum_k' r_m(k - k') y_m(k')``.

    :param samples: array of shape ``(M, K)``; column ``i`` belongs to the
        integer ``start + i``.
    :returns: ``(indices, estimate)`` on the sample range.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[0] != len(config.samplers):
        raise ValueError("One row of samples per sampler is needed.")
    filters = dual_filters(config, phi)
    length = samples.shape[1]
    estimate = np.zeros(length)
    for taps, row in zip(filters.taps, samples):
        full = np.convolve(row, taps)
        estimate += full[filters.radius : filters.radius + length]
    return start + np.arange(length), estimate


CoarseEstimate = namedtuple("CoarseEstimate", ["support", "amplitudes"])
"""Integer support ``Lambda0`` and its amplitudes ``c0``."""


def blind_coarse_estimate(config, phi, samples, start=0):
    """Support and amplitudes where ``|c~(k)| >= 1 / (2 L)``.

    Entries within ``1e-6`` of the threshold raise a ``RuntimeWarning``.

    :raises RankConditionError: when the filters cannot be formed.
    """
    indices, estimate = blind_filter(config, phi, samples, start)
    magnitude = np.abs(estimate)
    if np.any(np.abs(magnitude - config.threshold) < THRESHOLD_AMBIGUITY):
        warnings.warn(
            "Filtered amplitude within {0:g} of the support threshold.".format(
                THRESHOLD_AMBIGUITY
            ),
            RuntimeWarning,
            stacklevel=2,
        )
    keep = magnitude >= config.threshold
    logger.debug("Coarse support has %d points.", int(np.count_nonzero(keep)))
    return CoarseEstimate(PointSet(indices[keep].astype(float)), estimate[keep])


def blind_recover(
    config,
    phi,
    samples,
    start=0,
    alpha=NLSAMPLING_IDENTIFY_ALPHA,
    tol=NLSAMPLING_SOLVER_TOL,
    max_iter=NLSAMPLING_SOLVER_MAX_ITER,
    delta0=None,
):
    """Recover positions and amplitudes from blind samples.

    The coarse estimate is refined by :func:`identify` with the identity
    companding function.

    :returns: ``(positions, amplitudes, trace)``.
    :raises OutOfRegimeError: when the identification does not converge,
        the result misses the samples, a recovered shift reaches ``1/2`` or
        an amplitude leaves ``[1/L, L]``.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    coarse = blind_coarse_estimate(config, phi, samples, start)
    indices = start + np.arange(samples.shape[1])
    family = config.sampler_family(indices)
    base = _windowed(
        FriSignal(phi, coarse.support, coarse.amplitudes, (0.0, 1.0)), family
    )
    F = identity_companding()
    y = samples.ravel()
    lin = linearize(base, family, F, config.rule)
    sigma, c, trace = identify(
        lin,
        family,
        F,
        config.rule,
        y,
        alpha=alpha,
        tol=tol,
        max_iter=max_iter,
        delta0=delta0,
    )
    if not trace.converged:
        raise OutOfRegimeError(
            "Identification did not converge in {0} steps.".format(trace.steps)
        )
    fitted = perturbed_samples(base, family, F, config.rule)(trace.solution)
    residual = np.linalg.norm(fitted - y)
    if residual > RESIDUAL_RATIO * max(np.linalg.norm(y), 1.0):
        raise OutOfRegimeError(
            "Recovered signal misses the samples (residual {0:.3e}).".format(residual)
        )
    amplitudes = base.amplitudes + c
    bound = config.amplitude_bound
    if np.any(np.abs(sigma) >= 0.5) or np.any(
        (np.abs(amplitudes) < 1.0 / bound) | (np.abs(amplitudes) > bound)
    ):
        raise OutOfRegimeError(
            "Recovered parameters left the perturbation regime "
            "(max shift {0:.3f}).".format(np.max(np.abs(sigma), initial=0.0))
        )
    return base.positions.points + sigma, amplitudes, trace
