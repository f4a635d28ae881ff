# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Seeded experiments on companded sampling and innovation identification.

Every runner takes an :class:`ExperimentConfig` and returns a
:class:`TableArtifact`; the same config and seed always give the same
table.
"""

import logging
import warnings
from collections import namedtuple

import numpy as np
from scipy import linalg

from .algebra import PointSet, vector_norm
from .companding import (
    GeneratorFamily,
    SamplingModel,
    forward_sample,
    modified_companding_map,
    reconstruct_hybrid,
    reconstruct_modified_van_cittert,
)
from .config import (
    NLSAMPLING_COMPANDING_ROWS,
    NLSAMPLING_EXPERIMENT_DEFAULTS,
    NLSAMPLING_FRI_CONDITION,
    NLSAMPLING_FRI_CONTRACTION,
    NLSAMPLING_FRI_NOISE_ENVELOPE,
    NLSAMPLING_FRI_ROWS,
    NLSAMPLING_INSTANCE_ATTEMPTS,
    NLSAMPLING_REJECTION_CAP,
    NLSAMPLING_SIGNAL_PEAK,
    NLSAMPLING_SOLVER_TOL,
)
from .errors import ConfigurationError
from .fri import (
    BlindConfig,
    FriSignal,
    blind_recover,
    blind_samples,
    identification_map,
    identify,
    linearize,
    perturbed_samples,
    sample_signal,
)
from .kernels import (
    BoxKernel,
    QuadratureRule,
    SquareRootKernel,
    make_cardinal_splines,
    make_gaussian_generator,
)
from .solvers import default_sample_points, estimate_monotonicity
from .utils import resolve_companding

logger = logging.getLogger("nonlinear-sampling")

ExperimentConfig = namedtuple(
    "ExperimentConfig",
    [
        "experiment",
        "seed",
        "companding",
        "alpha",
        "noise_level",
        "max_iter",
        "solver",
        "switch_ratio",
        "knot_count",
        "knot_gap_min",
        "knot_gap_max",
        "interval_start",
        "interval_end",
        "sampler_count",
        "sampler_height",
        "source_count",
        "source_gap_min",
        "source_gap_max",
        "window_end",
        "output",
    ],
)
"""Loaded experiment configuration, see
:class:`~nonlinear_sampling.serializers.schemas.ExperimentConfigSchema`."""


def setting(config, name):
    """Config value, or the experiment default when it is unset."""
    value = getattr(config, name)
    if value is None:
        return NLSAMPLING_EXPERIMENT_DEFAULTS[config.experiment][name]
    return value


Plot = namedtuple("Plot", ["x", "ys", "log"])
"""Line plot of table columns ``ys`` against column ``x``."""


class TableArtifact(object):
    """Named table with a header, numeric rows and optional plots."""

    def __init__(self, name, title, header, rows, plots=(), attachments=()):
        """Constructor.

        :param name: file stem of the written artifacts.
        :param title: human readable caption.
        :param header: column labels.
        :param rows: sequences of numbers, one per row.
        :param plots: :class:`Plot` declarations for the SVG figure.
        :param attachments: further artifacts written alongside.
        """
        self.name = name
        self.title = title
        self.header = list(header)
        self.rows = [tuple(row) for row in rows]
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError("Row length does not match the header.")
        self.plots = list(plots)
        self.attachments = list(attachments)

    def __len__(self):
        """Number of rows."""
        return len(self.rows)

    def __repr__(self):
        """Short representation."""
        return "TableArtifact({0!r}, {1} rows)".format(self.name, len(self))

    def column(self, label):
        """Values of one column as a float array."""
        index = self.header.index(label)
        return np.array([row[index] for row in self.rows], dtype=float)


def random_knots(
    rng, count, gap_min, gap_max, start, end, cap=NLSAMPLING_REJECTION_CAP
):
    """Knots in ``[start, end]`` with consecutive gaps in ``[gap_min, gap_max]``.

    Gaps are drawn until their sum fits into the interval, then the knots
    are offset uniformly inside it.

    :raises ConfigurationError: when ``cap`` attempts fail.
    """
    length = end - start
    for _ in range(cap):
        gaps = rng.uniform(gap_min, gap_max, count - 1)
        total = gaps.sum()
        if total <= length:
            offset = rng.uniform(0.0, length - total)
            return PointSet(start + offset + np.concatenate(([0.0], np.cumsum(gaps))))
    raise ConfigurationError("No knots found after {0} attempts.".format(cap))


def random_sources(
    rng, count, gap_min, gap_max, first, last, cap=NLSAMPLING_REJECTION_CAP
):
    """Positions from ``first`` to ``last`` with gaps in ``[gap_min, gap_max]``.

    :raises ConfigurationError: when ``cap`` attempts fail.
    """
    if count == 1:
        return PointSet([first])
    length = last - first
    for _ in range(cap):
        gaps = rng.uniform(gap_min, gap_max, count - 2)
        final = length - gaps.sum()
        if gap_min <= final <= gap_max:
            gaps = np.append(gaps, final)
            return PointSet(first + np.concatenate(([0.0], np.cumsum(gaps))))
    raise ConfigurationError("No positions found after {0} attempts.".format(cap))


def noise_pattern(count):
    """Piecewise noise weights: 1 on the outer pieces, 2 on two inner ones.

    The pattern is laid out for 80 samples and stretched to ``count``.
    """
    scaled = np.arange(1, count + 1) * 80.0 / count
    weights = np.zeros(count)
    weights[((scaled >= 1) & (scaled < 16)) | ((scaled >= 72) & (scaled <= 80))] = 1.0
    weights[((scaled >= 24) & (scaled < 40)) | ((scaled >= 48) & (scaled < 64))] = 2.0
    return weights


class CompandingInstance(
    namedtuple(
        "CompandingInstance", ["model", "coefficients", "samples", "peak", "report"]
    )
):
    """Sampling model, true spline coefficients and exact samples.

    ``peak`` is the largest magnitude of the signal and ``report`` the
    :class:`~nonlinear_sampling.solvers.MonotonicityReport` of the
    preconditioned map at the origin, the coefficients and random sample points.
    """

    __slots__ = ()

    @property
    def radius(self):
        """End of the monotone interval of the companding function."""
        return min(abs(bound) for bound in self.model.companding.interval)


SIGNAL_GRID = 2001
"""Points on which the peak of a generated signal is measured."""


def companding_instance(config, rng, cap=NLSAMPLING_INSTANCE_ATTEMPTS):
    """Random cardinal spline signal sampled by box averagers.

    Coefficients are drawn in ``[-1/2, 1/2]`` and scaled so that the signal
    peaks at ``NLSAMPLING_SIGNAL_PEAK`` times the end of the monotone
    interval of the companding function. Draws whose preconditioned map is
    not monotone at the sample points are rejected.

    :raises ConfigurationError: when ``cap`` draws are rejected.
    """
    start, end = config.interval_start, config.interval_end
    companding = resolve_companding(config.companding)
    width = (end - start) / config.sampler_count
    sampler = GeneratorFamily(
        [
            BoxKernel(start + i * width, start + (i + 1) * width, config.sampler_height)
            for i in range(config.sampler_count)
        ]
    )
    grid = np.linspace(start, end, SIGNAL_GRID)
    bound = min(abs(value) for value in companding.interval)
    for _ in range(cap):
        knots = random_knots(
            rng,
            config.knot_count,
            config.knot_gap_min,
            config.knot_gap_max,
            start,
            end,
        )
        model = SamplingModel(
            GeneratorFamily(make_cardinal_splines(knots)),
            sampler,
            companding,
            QuadratureRule(domain=(start, end)),
        )
        coefficients = rng.uniform(-0.5, 0.5, config.knot_count)
        peak = NLSAMPLING_SIGNAL_PEAK * bound
        coefficients *= peak / np.max(np.abs(model.signal(coefficients, grid)))
        f = modified_companding_map(model)
        points = default_sample_points(
            f, amplitude=np.max(np.abs(coefficients)), estimate=coefficients
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            report = estimate_monotonicity(f, points)
        if report.monotone:
            samples = forward_sample(model, coefficients)
            return CompandingInstance(model, coefficients, samples, peak, report)
        logger.debug("Rejected spline instance with m0 %.3e.", report.m0_estimate)
    raise ConfigurationError("No monotone instance after {0} draws.".format(cap))


def reconstruct(config, instance, y, **options):
    """Coefficients from samples ``y`` with the configured solver.

    Both solvers precondition with the modified reconstruction matrix and
    stop when an iterate leaves the monotone interval.
    """
    model = instance.model
    alpha = setting(config, "alpha")
    options.setdefault("max_iter", setting(config, "max_iter"))
    options.setdefault("radius", instance.radius)
    if setting(config, "solver") == "hybrid":
        return reconstruct_hybrid(
            model,
            y,
            alpha,
            switch_ratio=config.switch_ratio,
            modified=True,
            **options,
        )
    return reconstruct_modified_van_cittert(
        model,
        y,
        alpha,
        amplitude_interval=(-instance.peak, instance.peak),
        **options,
    )


def _data_error(model, samples):
    """Sup norm of the sample misfit of an iterate."""
    return lambda x: vector_norm(model.sample(x) - samples, np.inf)


def _companding_row(trace, iteration):
    """Table row of an iterate: errors in three norms and the data error."""
    count = trace.solution.size
    return (
        iteration,
        trace.errors[np.inf][iteration],
        trace.errors[2][iteration] / np.sqrt(count),
        trace.errors[1][iteration] / count,
        trace.data_errors[iteration],
    )


COMPANDING_HEADER = (
    "iteration",
    "linf_error",
    "l2_error_normalized",
    "l1_error_normalized",
    "data_error",
)

ERROR_PLOT = Plot("iteration", COMPANDING_HEADER[1:], True)


def run_table1(config):
    """Van-Cittert reconstruction errors from zero initial guess."""
    instance = companding_instance(config, np.random.default_rng(config.seed))
    trace = reconstruct(
        config,
        instance,
        instance.samples,
        tol=0.0,
        reference=instance.coefficients,
        observe=_data_error(instance.model, instance.samples),
    )
    rows = [
        _companding_row(trace, iteration)
        for iteration in NLSAMPLING_COMPANDING_ROWS
        if iteration <= trace.steps
    ]
    logger.info("Van-Cittert rate %.4f after %d steps.", trace.rate, trace.steps)
    return TableArtifact(
        "table1",
        "Reconstruction error via the Van-Cittert iteration",
        COMPANDING_HEADER,
        rows,
        plots=[ERROR_PLOT],
    )


def run_table2(config):
    """Van-Cittert steps followed by quasi-Newton steps."""
    instance = companding_instance(config, np.random.default_rng(config.seed))
    trace = reconstruct(
        config,
        instance,
        instance.samples,
        tol=NLSAMPLING_SOLVER_TOL,
        reference=instance.coefficients,
        observe=_data_error(instance.model, instance.samples),
    )
    switch = trace.steps if trace.switch_index is None else trace.switch_index
    iterations = [5] if trace.steps >= 5 else []
    first = max(switch - 1, 6)
    iterations.extend(range(first, trace.steps + 1))
    logger.info(
        "Hybrid solver switched at %d and stopped at %d.",
        switch,
        trace.steps,
    )
    return TableArtifact(
        "table2",
        "Reconstruction error via Van-Cittert and quasi-Newton iterations",
        COMPANDING_HEADER,
        [_companding_row(trace, iteration) for iteration in iterations],
        plots=[ERROR_PLOT],
    )


def quiet_interval(config, weights):
    """Noise-free stretch nearest the middle of the interval, minus a margin.

    The stretch is the longest run of samples with zero noise weight that
    contains, or lies closest to, the middle of the signal interval; it is
    shortened by the largest knot gap on both ends. Returns ``None`` when
    every sample carries noise.
    """
    start, end = config.interval_start, config.interval_end
    count = weights.size
    width = (end - start) / count
    quiet = np.flatnonzero(weights == 0.0)
    if not quiet.size:
        return None
    middle = count // 2
    index = int(quiet[np.argmin(np.abs(quiet - middle))])
    first = last = index
    while first > 0 and weights[first - 1] == 0.0:
        first -= 1
    while last < count - 1 and weights[last + 1] == 0.0:
        last += 1
    margin = config.knot_gap_max
    return start + first * width + margin, start + (last + 1) * width - margin


def run_noise_demo(config):
    """Deviation of the reconstruction under piecewise bounded noise.

    The noise is uniform with weights from :func:`noise_pattern` and peaks
    at the noise level times the largest sample.
    """
    rng = np.random.default_rng(config.seed)
    instance = companding_instance(config, rng)
    model, samples = instance.model, instance.samples
    level = setting(config, "noise_level")
    weights = noise_pattern(samples.size)
    noise = (
        rng.uniform(-0.5 * level, 0.5 * level, samples.size)
        * weights
        * np.max(np.abs(samples))
    )
    clean = reconstruct(config, instance, samples).solution
    noisy = reconstruct(config, instance, samples + noise).solution
    deviation = float(np.max(np.abs(noisy - clean)))
    grid = np.linspace(config.interval_start, config.interval_end, 401)
    original = model.signal(instance.coefficients, grid)
    difference = model.signal(noisy, grid) - model.signal(clean, grid)
    region = quiet_interval(config, weights)
    local = np.nan
    if region is not None:
        inside = (grid >= region[0]) & (grid <= region[1])
        if np.any(inside):
            local = float(np.max(np.abs(difference[inside])))
    logger.info("Noise deviation %.4f, local %.4f.", deviation, local)
    signal = TableArtifact(
        "noise_signal",
        "Original signal and reconstruction difference",
        ("t", "original", "difference"),
        zip(grid, original, difference),
        plots=[Plot("t", ("original", "difference"), False)],
    )
    data = TableArtifact(
        "noise_samples",
        "Samples and piecewise noise",
        ("sample", "value", "noise"),
        zip(range(1, samples.size + 1), samples, noise),
        plots=[Plot("sample", ("value", "noise"), False)],
    )
    rows = [(config.interval_start, config.interval_end, deviation)]
    if region is not None:
        rows.append((region[0], region[1], local))
    return TableArtifact(
        "noise",
        "Reconstruction deviation under piecewise bounded noise",
        ("region_start", "region_end", "deviation"),
        rows,
        attachments=[signal, data],
    )


class FriInstance(
    namedtuple(
        "FriInstance",
        ["signal", "base", "sampler", "companding", "rule", "samples", "noise"],
    )
):
    """True signal, its approximation, samplers, companding and samples."""

    __slots__ = ()

    @property
    def perturbation(self):
        """True shifts followed by the true amplitude corrections."""
        return np.concatenate(
            (
                self.signal.positions.points - self.base.positions.points,
                self.signal.amplitudes - self.base.amplitudes,
            )
        )

    @property
    def data(self):
        """Samples with the noise added."""
        return self.samples + self.noise


def _draw_fri_instance(config, rng, level):
    """One random pulse train with its samples and noise."""
    window = (0.0, config.window_end)
    positions = random_sources(
        rng,
        config.source_count,
        config.source_gap_min,
        config.source_gap_max,
        window[0] + 0.5,
        window[1] - 0.5,
    )
    signs = rng.choice((-1.0, 1.0), config.source_count)
    amplitudes = signs * rng.uniform(0.1, 1.0, config.source_count)
    impulse = make_gaussian_generator()
    signal = FriSignal(impulse, positions, amplitudes, window)
    base = FriSignal(
        impulse,
        np.floor(10.0 * positions.points) / 10.0,
        np.floor(10.0 * amplitudes) / 10.0,
        window,
    )
    count = int(round(2.0 * config.window_end)) + 1
    sampler = GeneratorFamily(
        [SquareRootKernel().shifted(j / 2.0 - 1.0) for j in range(1, count + 1)]
    )
    companding = resolve_companding(config.companding)
    rule = QuadratureRule(domain=window)
    samples = sample_signal(signal, sampler, companding, rule)
    noise = np.zeros(samples.size)
    if level > 0.0:
        epsilon = rng.uniform(-1.0, 1.0, samples.size)
        noise = level * epsilon * np.max(np.abs(samples))
    return FriInstance(signal, base, sampler, companding, rule, samples, noise)


def fri_admissible(instance, alpha):
    """Whether identification of an instance is stable, local and contractive.

    The linearization must have a singular value ratio of at least
    ``NLSAMPLING_FRI_CONDITION``; the step ``I - alpha grad f`` must have
    spectral radius at most ``NLSAMPLING_FRI_CONTRACTION`` halfway to and
    at the true perturbation, and at the noisy limit predicted to first
    order, whose drift must stay inside ``NLSAMPLING_FRI_NOISE_ENVELOPE``.
    """
    lin = linearize(instance.base, instance.sampler, instance.companding, instance.rule)
    if not lin.lower_bound >= NLSAMPLING_FRI_CONDITION * lin.upper_bound > 0.0:
        return False
    f = identification_map(lin, instance.sampler, instance.companding, instance.rule)
    identity = np.eye(f.dimension)
    truth = instance.perturbation
    points = [0.5 * truth, truth]
    if np.any(instance.noise):
        gradient = f.gradient(truth).entries
        try:
            drift = linalg.solve(gradient, lin.pseudo_inverse.apply(instance.noise))
        except linalg.LinAlgError:
            return False
        count = len(instance.base)
        amplitude_envelope, position_envelope = NLSAMPLING_FRI_NOISE_ENVELOPE
        if (
            np.max(np.abs(drift[count:])) > amplitude_envelope
            or np.max(np.abs(drift[:count])) > position_envelope
        ):
            return False
        points.append(truth + drift)
    for point in points:
        step = identity - alpha * f.gradient(point).entries
        if np.max(np.abs(linalg.eigvals(step))) > NLSAMPLING_FRI_CONTRACTION:
            return False
    return True


def fri_instance(config, rng, cap=NLSAMPLING_INSTANCE_ATTEMPTS):
    """Random Gaussian pulses sampled by shifted square-root samplers.

    Draws are repeated until :func:`fri_admissible` accepts them at the
    configured relaxation factor and noise level.

    :raises ConfigurationError: when ``cap`` draws are rejected.
    """
    level = setting(config, "noise_level")
    alpha = setting(config, "alpha")
    for attempt in range(cap):
        instance = _draw_fri_instance(config, rng, level)
        if fri_admissible(instance, alpha):
            logger.debug("Pulse train accepted after %d rejections.", attempt)
            return instance
    raise ConfigurationError("No admissible pulse train after {0} draws.".format(cap))


FRI_HEADER = ("iteration", "amplitude_error", "position_error", "data_error")

FRI_DELTA0 = 0.1
"""Locality radius of the identification tables."""


def _fri_table(config, name, title):
    """Identification table for the samples of a random pulse train."""
    instance = fri_instance(config, np.random.default_rng(config.seed))
    truth = instance.perturbation
    sampled = perturbed_samples(
        instance.base, instance.sampler, instance.companding, instance.rule
    )
    lin = linearize(instance.base, instance.sampler, instance.companding, instance.rule)
    sigma, c, trace = identify(
        lin,
        instance.sampler,
        instance.companding,
        instance.rule,
        instance.data,
        alpha=setting(config, "alpha"),
        tol=0.0,
        max_iter=setting(config, "max_iter"),
        delta0=FRI_DELTA0,
        observe=lambda x: vector_norm(sampled(x) - instance.samples, np.inf),
        keep_iterates=True,
    )
    count = len(instance.base)
    rows = []
    for iteration in NLSAMPLING_FRI_ROWS:
        if iteration > trace.steps:
            break
        iterate = trace.iterates[iteration]
        rows.append(
            (
                iteration,
                vector_norm(iterate[count:] - truth[count:], np.inf),
                vector_norm(iterate[:count] - truth[:count], np.inf),
                trace.data_errors[iteration],
            )
        )
    grid = np.linspace(instance.signal.window[0], instance.signal.window[1], 2001)
    original = instance.signal(grid)
    curves = TableArtifact(
        name + "_signal",
        "Original signal with approximation and recovery errors",
        ("t", "original", "approximation_error", "recovery_error"),
        zip(
            grid,
            original,
            original - instance.base(grid),
            original - instance.base.perturbed(sigma, c)(grid),
        ),
        plots=[Plot("t", ("original", "approximation_error", "recovery_error"), False)],
    )
    return TableArtifact(
        name,
        title,
        FRI_HEADER,
        rows,
        plots=[Plot("iteration", FRI_HEADER[1:], True)],
        attachments=[curves],
    )


def run_table3(config):
    """Identification of innovation positions and amplitudes from exact samples."""
    return _fri_table(
        config,
        "table3",
        "Local identification of innovation positions and amplitudes",
    )


def run_table4(config):
    """Identification from samples with bounded random noise."""
    return _fri_table(
        config,
        "table4",
        "Local identification in the presence of bounded random noise",
    )


BLIND_PERTURBATION = 0.05
"""Largest shift of the blind demo innovations off the integers."""

BLIND_AMPLITUDE_BOUND = 3.0
"""Amplitude bound ``L`` of the blind demo."""

BLIND_PADDING = 4
"""Sample indices added on each side of the innovations."""


def run_blind_demo(config):
    """Blind recovery of a perturbed shift-invariant Gaussian signal."""
    rng = np.random.default_rng(config.seed)
    count = config.source_count
    active = rng.random(count) < 0.75
    active[0] = True
    shifts = rng.uniform(-BLIND_PERTURBATION, BLIND_PERTURBATION, count)
    signs = rng.choice((-1.0, 1.0), count)
    magnitudes = rng.uniform(1.0 / BLIND_AMPLITUDE_BOUND, BLIND_AMPLITUDE_BOUND, count)
    integers = np.arange(count)[active]
    positions = integers + shifts[active]
    amplitudes = (signs * magnitudes)[active]
    phi = make_gaussian_generator()
    blind = BlindConfig(
        [phi, make_gaussian_generator(order=1)],
        BLIND_AMPLITUDE_BOUND,
        BLIND_PERTURBATION,
        filter_mode="joint",
    )
    indices = np.arange(-BLIND_PADDING, count + BLIND_PADDING)
    truth = FriSignal(phi, positions, amplitudes, (indices[0], indices[-1]))
    samples = blind_samples(blind, truth, indices)
    recovered, recovered_amplitudes, trace = blind_recover(
        blind,
        phi,
        samples,
        start=indices[0],
        alpha=setting(config, "alpha"),
        max_iter=setting(config, "max_iter"),
        delta0=0.25,
    )
    found = {int(k): i for i, k in enumerate(np.rint(recovered))}
    rows = []
    for k, position, amplitude in zip(integers, positions, amplitudes):
        index = found.get(int(k))
        guess = recovered[index] if index is not None else np.nan
        weight = recovered_amplitudes[index] if index is not None else np.nan
        rows.append((position, guess, amplitude, weight, abs(guess - position)))
    logger.info("Blind recovery used %d identification steps.", trace.steps)
    return TableArtifact(
        "blind",
        "Blind recovery in a perturbed shift-invariant space",
        (
            "true_position",
            "recovered_position",
            "true_amplitude",
            "recovered_amplitude",
            "position_error",
        ),
        rows,
    )
