# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Solvers for strictly monotone nonlinear equations ``f(x) = y``.

A map is strictly monotone when ``c^T grad f(x) c >= m0 c^T c`` for some
``m0 > 0`` and all ``x``. For such maps the Van-Cittert iteration
``x_{n+1} = x_n - alpha (f(x_n) - y)`` converges exponentially whenever
``0 < alpha < m0 / (L + L^2)`` with ``L`` bounding the gradient, and the
quasi-Newton iteration converges quadratically near the solution.
"""

import logging
import warnings
from collections import namedtuple

import numpy as np
from scipy import linalg

from .algebra import (
    LocalizedMatrix,
    PointSet,
    PseudoInverse,
    norm_controlled_inverse,
    operator_norm,
    vector_norm,
)
from .config import (
    NLSAMPLING_NEWTON_GROWTH,
    NLSAMPLING_RATE_BURN_IN,
    NLSAMPLING_SAMPLE_POINTS,
    NLSAMPLING_SINGULAR_THRESHOLD,
    NLSAMPLING_SOLVER_MAX_ITER,
    NLSAMPLING_SOLVER_TOL,
    NLSAMPLING_SWITCH_RATIO,
)
from .errors import (
    BoundsUnavailableError,
    DivergenceError,
    LinearizationError,
    SingularGradientError,
)

logger = logging.getLogger("nonlinear-sampling")


class NonlinearMap(object):
    """Map ``x -> f(x)`` together with its gradient oracle."""

    def __init__(self, evaluate, gradient, domain_set, range_set=None):
        """Constructor.

        :param evaluate: callable returning ``f(x)`` as an array.
        :param gradient: callable returning ``grad f(x)`` as a
            :class:`~nonlinear_sampling.algebra.LocalizedMatrix` or array.
        :param domain_set: point set indexing the unknowns.
        :param range_set: point set indexing the values, defaults to the
            domain set.
        :raises ValueError: when ``f(0)`` does not vanish.
        """
        self.domain_set = PointSet.coerce(domain_set)
        self.range_set = (
            self.domain_set if range_set is None else PointSet.coerce(range_set)
        )
        self._evaluate = evaluate
        self._gradient = gradient
        origin = self.evaluate(np.zeros(len(self.domain_set)))
        if origin.size and np.max(np.abs(origin)) > 1e-10:
            raise ValueError("A nonlinear map must vanish at the origin.")

    @classmethod
    def from_matrix(cls, matrix, domain_set=None, range_set=None):
        """Linear map ``x -> A x``."""
        if not isinstance(matrix, LocalizedMatrix):
            matrix = LocalizedMatrix.from_array(matrix, range_set, domain_set)
        return cls(
            lambda x: matrix.entries @ x,
            lambda x: matrix,
            matrix.col_set,
            matrix.row_set,
        )

    @property
    def dimension(self):
        """Number of unknowns."""
        return len(self.domain_set)

    def evaluate(self, x):
        """Value ``f(x)``."""
        return np.asarray(self._evaluate(np.asarray(x, dtype=float)), dtype=float)

    __call__ = evaluate

    def gradient(self, x):
        """Gradient at ``x`` as a localized matrix."""
        value = self._gradient(np.asarray(x, dtype=float))
        if isinstance(value, LocalizedMatrix):
            return value
        return LocalizedMatrix(self.range_set, self.domain_set, value)

    def check_gradient(self, x, step=1e-6):
        """Relative deviation of the gradient from central differences."""
        x = np.asarray(x, dtype=float)
        analytic = self.gradient(x).entries
        numeric = np.empty_like(analytic)
        for column in range(x.size):
            offset = np.zeros_like(x)
            offset[column] = step
            difference = self.evaluate(x + offset) - self.evaluate(x - offset)
            numeric[:, column] = difference / (2.0 * step)
        scale = max(np.max(np.abs(analytic)), np.finfo(float).tiny)
        return float(np.max(np.abs(analytic - numeric)) / scale)


class MonotonicityReport(
    namedtuple("MonotonicityReport", ["m0_estimate", "L_estimate", "sample_points"])
):
    """Monotonicity constant and gradient bound estimated at points."""

    __slots__ = ()

    @property
    def monotone(self):
        """Whether the estimate certifies strict monotonicity."""
        return self.m0_estimate > 0.0


def default_sample_points(f, amplitude=1.0, estimate=None, count=None, seed=0):
    """Origin, an optional preimage estimate and random points in a box."""
    count = NLSAMPLING_SAMPLE_POINTS if count is None else count
    rng = np.random.default_rng(seed)
    points = [np.zeros(f.dimension)]
    if estimate is not None:
        points.append(np.asarray(estimate, dtype=float))
    points.extend(rng.uniform(-amplitude, amplitude, f.dimension) for _ in range(count))
    return points


def estimate_monotonicity(f, points):
    """Estimate ``m0`` and ``L`` from gradients at the sample points.

    ``m0`` is the smallest eigenvalue of the symmetric part of any sampled
    gradient and ``L`` the largest l2 operator norm.
    """
    points = [np.asarray(point, dtype=float) for point in points]
    if not points:
        raise ValueError("At least one sample point is required.")
    m0, bound = np.inf, 0.0
    for point in points:
        gradient = f.gradient(point).entries
        symmetric = 0.5 * (gradient + gradient.T)
        m0 = min(m0, float(linalg.eigvalsh(symmetric)[0]))
        bound = max(bound, operator_norm(gradient, 2))
    report = MonotonicityReport(m0, max(bound, m0), points)
    if not report.monotone:
        message = "Map is not strictly monotone at the points (m0={0:.3e}).".format(m0)
        logger.warning(message)
        warnings.warn(message, RuntimeWarning)
    return report


def max_step(m0, L):
    """Largest relaxation factor ``m0 / (L + L^2)`` covered by the rate bound."""
    return m0 / (L + L * L)


def theoretical_rate(alpha, m0, L):
    """Contraction ratio ``(1 - a + a^2 L + a^2 L^2) / (1 - a + a m0)``."""
    return (1.0 - alpha + alpha**2 * (L + L * L)) / (1.0 - alpha + alpha * m0)


class SolverTrace(object):
    """Per-iteration record of an iterative solve.

    Index 0 refers to the initial guess. Errors against a reference
    solution are recorded in the l1, l2 and sup norms when a reference is
    known; the residual is always the sup norm of ``f(x_n) - y``.
    """

    def __init__(self, method, keep_iterates=False, burn_in=NLSAMPLING_RATE_BURN_IN):
        """Constructor.

        :param method: solver name.
        :param keep_iterates: retain every iterate, not only the last one.
        :param burn_in: iterations skipped by the rate estimate.
        """
        self.method = method
        self.keep_iterates = keep_iterates
        self.burn_in = burn_in
        self.iterates = []
        self.errors = {1: [], 2: [], np.inf: []}
        self.residuals = []
        self.data_errors = []
        self.warnings = []
        self.steps = 0
        self.converged = False
        self.switch_index = None
        self.rate_bound = None
        self.solution = None

    def __len__(self):
        """Number of recorded iterates, the initial guess included."""
        return len(self.residuals)

    def __repr__(self):
        """Short representation."""
        return "SolverTrace({0}, steps={1}, converged={2})".format(
            self.method, self.steps, self.converged
        )

    def record(self, x, residual, reference=None, observe=None):
        """Append iterate ``x`` with its residual."""
        x = np.array(x, dtype=float)
        self.solution = x
        if self.keep_iterates:
            self.iterates.append(x)
        self.residuals.append(float(residual))
        if reference is not None:
            difference = x - reference
            for order, values in self.errors.items():
                values.append(vector_norm(difference, order))
        if observe is not None:
            self.data_errors.append(float(observe(x)))

    def warn(self, message):
        """Attach a warning to the trace and emit it."""
        self.warnings.append(message)
        logger.warning(message)
        warnings.warn(message, RuntimeWarning, stacklevel=3)

    @property
    def error_sequence(self):
        """Sup-norm errors when a reference was given, else residuals."""
        errors = self.errors[np.inf]
        return np.asarray(errors if errors else self.residuals)

    @property
    def rate(self):
        """Median ratio of successive errors after the burn-in."""
        errors = self.error_sequence[self.burn_in :]
        if errors.size < 2:
            return np.nan
        previous, following = errors[:-1], errors[1:]
        usable = previous > 0.0
        if not np.any(usable):
            return np.nan
        return float(np.median(following[usable] / previous[usable]))

    def _tail_pairs(self, threshold):
        """Pairs ``(e_n, e_{n+1})`` of positive errors with ``e_n < threshold``."""
        errors = self.error_sequence
        previous, following = errors[:-1], errors[1:]
        usable = (previous > 0.0) & (following > 0.0) & (previous < threshold)
        return previous[usable], following[usable]

    def tail_order(self, threshold=1e-2):
        """Slope of the least squares fit of ``log e_{n+1}`` on ``log e_n``."""
        previous, following = self._tail_pairs(threshold)
        if previous.size < 2:
            return np.nan
        return float(np.polyfit(np.log(previous), np.log(following), 1)[0])

    def quadratic_constant(self, count=3):
        """Largest ``e_{n+1} / e_n^2`` over the last ``count`` steps."""
        errors = self.error_sequence
        if errors.size < 2:
            return np.nan
        previous, following = errors[:-1][-count:], errors[1:][-count:]
        usable = previous > 0.0
        if not np.any(usable):
            return 0.0
        return float(np.max(following[usable] / previous[usable] ** 2))


class _Iteration(object):
    """Current state of an iterative solve feeding a :class:`SolverTrace`."""

    def __init__(self, f, y, x0, trace, reference=None, observe=None, radius=None):
        """Evaluate the initial guess and record it."""
        self.f = f
        self.radius = radius
        self.y = np.asarray(y, dtype=float)
        self.trace = trace
        self.reference = None if reference is None else np.asarray(reference, float)
        self.observe = observe
        x0 = np.zeros(f.dimension) if x0 is None else np.asarray(x0, dtype=float)
        self._move(x0)
        trace.record(self.x, self.residual, self.reference, observe)

    def _move(self, x):
        """Evaluate ``f`` at ``x``."""
        if not np.all(np.isfinite(x)):
            raise DivergenceError("Iterate is not finite.", trace=self.trace)
        if self.radius is not None and vector_norm(x, np.inf) > self.radius:
            raise DivergenceError(
                "Iterate left the ball of radius {0:g}.".format(self.radius),
                trace=self.trace,
            )
        difference = self.f.evaluate(x) - self.y
        if not np.all(np.isfinite(difference)):
            raise DivergenceError("Residual is not finite.", trace=self.trace)
        self.x = x
        self.difference = difference
        self.residual = vector_norm(difference, np.inf)

    def step(self, x):
        """Accept the next iterate."""
        self._move(x)
        self.trace.steps += 1
        self.trace.record(self.x, self.residual, self.reference, self.observe)

    def finish(self, tol):
        """Mark convergence and log the outcome."""
        trace = self.trace
        trace.converged = self.residual <= tol
        logger.info(
            "%s stopped after %d steps, residual %.3e, rate %.3f.",
            trace.method,
            trace.steps,
            self.residual,
            trace.rate,
        )
        return trace


def _check_step(alpha, report, trace):
    """Attach warnings when ``alpha`` is not covered by the rate bound."""
    if report is None:
        return
    if not report.monotone:
        trace.warn("Map is not strictly monotone; Van-Cittert may not converge.")
    elif alpha > max_step(report.m0_estimate, report.L_estimate):
        trace.warn(
            "Relaxation factor {0:g} exceeds m0/(L+L^2)={1:.3e}.".format(
                alpha, max_step(report.m0_estimate, report.L_estimate)
            )
        )


def van_cittert_solve(
    f,
    y,
    x0=None,
    alpha=1.0,
    tol=NLSAMPLING_SOLVER_TOL,
    max_iter=NLSAMPLING_SOLVER_MAX_ITER,
    reference=None,
    report=None,
    observe=None,
    keep_iterates=False,
    radius=None,
):
    """Van-Cittert iteration ``x_n = x_{n-1} - alpha (f(x_{n-1}) - y)``.

    :param report: optional :class:`MonotonicityReport`; a relaxation
        factor above ``m0 / (L + L^2)`` attaches a warning to the trace.
    :param reference: known solution; enables the error columns.
    :param observe: callable recorded per iterate into ``data_errors``.
    :param radius: sup-norm radius the iterates must stay in.
    :raises DivergenceError: when an iterate stops being finite or leaves
        the ball of the given radius.
    """
    if alpha <= 0:
        raise ValueError("Relaxation factor must be positive.")
    trace = SolverTrace("van_cittert", keep_iterates)
    _check_step(alpha, report, trace)
    state = _Iteration(f, y, x0, trace, reference, observe, radius)
    while trace.steps < max_iter and state.residual > tol:
        state.step(state.x - alpha * state.difference)
    return state.finish(tol)


def _newton_direction(f, state, threshold=NLSAMPLING_SINGULAR_THRESHOLD):
    """Solve ``grad f(x) d = f(x) - y``."""
    gradient = f.gradient(state.x).entries
    rows, cols = gradient.shape
    if rows != cols:
        try:
            return PseudoInverse(gradient, threshold).apply(state.difference)
        except LinearizationError:
            singular = True
    else:
        values = linalg.svdvals(gradient)
        singular = values[0] == 0.0 or values[-1] <= threshold * values[0]
        if not singular:
            return linalg.solve(gradient, state.difference)
    raise SingularGradientError(
        "Gradient is singular at iteration {0}.".format(state.trace.steps),
        iteration=state.trace.steps,
        trace=state.trace,
    )


def _newton_steps(f, state, tol, max_iter, growth):
    """Quasi-Newton steps until ``tol`` or ``max_iter``.

    Residuals at or below ``NLSAMPLING_SOLVER_TOL`` are not checked.

    :raises DivergenceError: when a step multiplies the residual by more
        than ``growth``.
    """
    trace = state.trace
    floor = max(tol, NLSAMPLING_SOLVER_TOL)
    while trace.steps < max_iter and state.residual > tol:
        previous = state.residual
        state.step(state.x - _newton_direction(f, state))
        if state.residual > floor and state.residual > growth * previous:
            raise DivergenceError(
                "Quasi-Newton residual grew from {0:.3e} to {1:.3e}.".format(
                    previous, state.residual
                ),
                trace=trace,
            )


def quasi_newton_solve(
    f,
    y,
    x0=None,
    tol=NLSAMPLING_SOLVER_TOL,
    max_iter=NLSAMPLING_SOLVER_MAX_ITER,
    reference=None,
    observe=None,
    keep_iterates=False,
    radius=None,
    growth=None,
):
    """Quasi-Newton iteration ``x_{n+1} = x_n - grad f(x_n)^{-1} (f(x_n) - y)``.

    :param radius: sup-norm radius the iterates must stay in.
    :param growth: largest accepted ratio of successive residuals, no
        check when ``None``.
    :raises SingularGradientError: when a gradient cannot be inverted.
    :raises DivergenceError: when an iterate leaves the ball or the
        residual grows.
    """
    trace = SolverTrace("quasi_newton", keep_iterates)
    state = _Iteration(f, y, x0, trace, reference, observe, radius)
    _newton_steps(f, state, tol, max_iter, np.inf if growth is None else growth)
    return state.finish(tol)


def hybrid_solve(
    f,
    y,
    x0=None,
    alpha=1.0,
    switch_ratio=NLSAMPLING_SWITCH_RATIO,
    tol=NLSAMPLING_SOLVER_TOL,
    max_iter=NLSAMPLING_SOLVER_MAX_ITER,
    reference=None,
    report=None,
    observe=None,
    keep_iterates=False,
    radius=None,
    growth=NLSAMPLING_NEWTON_GROWTH,
):
    """Van-Cittert until the relative residual drops below ``switch_ratio``.

    The remaining iterations are quasi-Newton steps; ``switch_index`` of
    the trace is the index of the first iterate handed to quasi-Newton.

    :param radius: sup-norm radius the iterates must stay in.
    :param growth: largest accepted ratio of successive quasi-Newton
        residuals.
    :raises DivergenceError: when an iterate leaves the ball or a
        quasi-Newton step lets the residual grow.
    """
    if alpha <= 0:
        raise ValueError("Relaxation factor must be positive.")
    trace = SolverTrace("hybrid", keep_iterates)
    _check_step(alpha, report, trace)
    state = _Iteration(f, y, x0, trace, reference, observe, radius)
    scale = vector_norm(y, np.inf) or 1.0
    while (
        trace.steps < max_iter
        and state.residual > tol
        and state.residual / scale >= switch_ratio
    ):
        state.step(state.x - alpha * state.difference)
    trace.switch_index = trace.steps
    logger.debug("Hybrid solver switches to quasi-Newton at %d.", trace.steps)
    _newton_steps(f, state, tol, max_iter, growth)
    return state.finish(tol)


def _inverse_gradient_norm(f, report, p):
    """Surrogate for the supremum of ``||grad f^{-1}||`` in ``B(l^p)``."""
    if p == 2:
        return 1.0 / report.m0_estimate
    norms = []
    for point in report.sample_points:
        inverse, _ = norm_controlled_inverse(f.gradient(point))
        norms.append(operator_norm(inverse, p))
    return max(norms)


def _gradient_norm(f, report, p):
    """Surrogate for the supremum of ``||grad f||`` in ``B(l^p)``."""
    if p == 2:
        return report.L_estimate
    return max(operator_norm(f.gradient(point), p) for point in report.sample_points)


def condition_number(f, report, p=2):
    """Condition number ``sup ||grad f|| sup ||grad f^{-1}||`` of the map."""
    p = _order(p)
    if not report.monotone:
        raise BoundsUnavailableError("Bounds unavailable for a non-monotone map.")
    return _gradient_norm(f, report, p) * _inverse_gradient_norm(f, report, p)


def _order(p):
    """Normalize a norm order."""
    if p in ("inf", np.inf):
        return np.inf
    if p in (1, 2):
        return int(p)
    raise ValueError("Norm order must be 1, 2 or inf, got {0!r}.".format(p))


def error_estimate(f, report, y, epsilon, p=2):
    """Absolute and relative error bounds for data perturbed by ``epsilon``.

    ``||x_eps - x|| <= sup ||grad f^{-1}|| ||eps||`` and
    ``||x_eps - x|| / ||x|| <= kappa ||eps|| / ||y||`` with the condition
    number ``kappa`` of :func:`condition_number`. Suprema are taken over
    the sample points of ``report``.

    :raises BoundsUnavailableError: when ``report`` is not monotone.
    """
    p = _order(p)
    if not report.monotone:
        raise BoundsUnavailableError("Bounds unavailable for a non-monotone map.")
    noise = vector_norm(epsilon, p)
    if noise == 0.0:
        return 0.0, 0.0
    inverse = _inverse_gradient_norm(f, report, p)
    absolute = inverse * noise
    data = vector_norm(y, p)
    if data == 0.0:
        return absolute, np.inf
    return absolute, _gradient_norm(f, report, p) * inverse * noise / data
