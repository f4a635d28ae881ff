# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Generator and sampler kernels, companding functions and quadrature.

All inner products of the library are computed by :class:`QuadratureRule`,
a composite Gauss-Legendre rule whose panels are aligned with the
breakpoints of the functions being integrated (spline knots, box edges,
corners of piecewise linear kernels).
"""

import math

import numpy as np
from numpy.polynomial.hermite import hermval
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import BSpline, CubicSpline
from scipy.optimize import minimize_scalar
from werkzeug.utils import cached_property

from .algebra import PointSet
from .config import (
    NLSAMPLING_GAUSSIAN_CUTOFF,
    NLSAMPLING_MU_GRID_SIZE,
    NLSAMPLING_NODES_PER_PANEL,
    NLSAMPLING_PANEL_WIDTH,
)
from .errors import KernelError

GAUSSIAN_EXPONENT = 4.0 * (math.pi / 2.0) ** (2.0 / 3.0)
"""Exponent of the Gaussian generator ``exp(-4 (pi/2)^(2/3) t^2)``."""


class QuadratureRule(object):
    """Composite Gauss-Legendre rule on a real interval."""

    def __init__(
        self,
        panel_width=NLSAMPLING_PANEL_WIDTH,
        nodes_per_panel=NLSAMPLING_NODES_PER_PANEL,
        domain=(-np.inf, np.inf),
    ):
        """Constructor.

        :param panel_width: maximal panel width.
        :param nodes_per_panel: Gauss-Legendre nodes on each panel.
        :param domain: interval outside of which integrands are cut off.
        """
        if panel_width <= 0 or nodes_per_panel < 1:
            raise ValueError("Panel width and node count must be positive.")
        self.panel_width = float(panel_width)
        self.nodes_per_panel = int(nodes_per_panel)
        self.domain = (float(domain[0]), float(domain[1]))

    def __repr__(self):
        """Short representation."""
        return "QuadratureRule(width={0}, nodes={1}, domain={2})".format(
            self.panel_width, self.nodes_per_panel, self.domain
        )

    @cached_property
    def reference(self):
        """Nodes and weights on [-1, 1]."""
        return leggauss(self.nodes_per_panel)

    def refined(self):
        """Rule with twice as many nodes per panel."""
        return QuadratureRule(
            self.panel_width, 2 * self.nodes_per_panel, domain=self.domain
        )

    def clip(self, interval):
        """Intersect ``interval`` with the domain."""
        return max(interval[0], self.domain[0]), min(interval[1], self.domain[1])

    def nodes(self, breakpoints=(), interval=None):
        """Quadrature nodes and weights.

        :param breakpoints: points where the integrand may lose smoothness;
            panels never straddle them.
        :param interval: integration interval, intersected with the domain.
        :returns: ``(nodes, weights)`` as flat arrays.
        """
        lower, upper = self.clip(self.domain if interval is None else interval)
        if not (np.isfinite(lower) and np.isfinite(upper)):
            raise ValueError("Integration interval must be finite.")
        if upper <= lower:
            return np.empty(0), np.empty(0)
        cuts = np.asarray(breakpoints, dtype=float).reshape(-1)
        cuts = cuts[(cuts > lower) & (cuts < upper)]
        cuts = np.unique(np.concatenate(([lower, upper], cuts)))
        edges = [cuts[:1]]
        for left, right in zip(cuts[:-1], cuts[1:]):
            count = max(1, int(math.ceil((right - left) / self.panel_width - 1e-9)))
            edges.append(np.linspace(left, right, count + 1)[1:])
        edges = np.concatenate(edges)
        middle = 0.5 * (edges[1:] + edges[:-1])[:, None]
        half = 0.5 * (edges[1:] - edges[:-1])[:, None]
        reference_nodes, reference_weights = self.reference
        nodes = middle + half * reference_nodes[None, :]
        weights = half * reference_weights[None, :]
        return nodes.ravel(), weights.ravel()

    def integrate(self, function, breakpoints=(), interval=None):
        """Integral of a vectorized function."""
        nodes, weights = self.nodes(breakpoints, interval)
        if not nodes.size:
            return 0.0
        return float(weights @ function(nodes))


class Kernel(object):
    """Generator or sampling function of one real variable.

    Subclasses implement :meth:`value`, :meth:`gradient` and
    :meth:`hessian` for arrays of any shape.
    """

    family = None
    decay_order = 2.0

    def __init__(self, center, support_radius, breakpoints=()):
        """Constructor.

        :param center: reference position of the kernel.
        :param support_radius: the kernel vanishes (below 1e-15) farther
            than this from the center.
        :param breakpoints: points where the kernel is not smooth.
        """
        self.center = float(center)
        self.support_radius = float(support_radius)
        self.breakpoints = np.asarray(breakpoints, dtype=float).reshape(-1)

    def __repr__(self):
        """Short representation."""
        return "{0}(center={1:g})".format(self.__class__.__name__, self.center)

    def __call__(self, t):
        """Alias of :meth:`value`."""
        return self.value(t)

    @property
    def support(self):
        """Interval outside of which the kernel vanishes."""
        return (
            self.center - self.support_radius,
            self.center + self.support_radius,
        )

    @property
    def integration_points(self):
        """Breakpoints together with the support ends."""
        return np.concatenate((self.breakpoints, self.support))

    def value(self, t):
        """Kernel value."""
        raise NotImplementedError()

    def gradient(self, t):
        """First derivative."""
        raise NotImplementedError()

    def hessian(self, t):
        """Second derivative."""
        raise NotImplementedError()

    def fourier(self, xi, rule=None):
        """Fourier transform ``int exp(-i x xi) k(x) dx``.

        Computed by quadrature over the support unless a subclass knows a
        closed form.
        """
        rule = rule or QuadratureRule()
        xi = np.asarray(xi, dtype=float)
        nodes, weights = rule.nodes(self.integration_points, self.support)
        samples = weights * self.value(nodes)
        flat = xi.reshape(-1)
        result = np.empty(flat.size, dtype=complex)
        for start in range(0, flat.size, 2048):
            chunk = flat[start : start + 2048]
            result[start : start + 2048] = (
                np.exp(-1j * chunk[:, None] * nodes[None, :]) @ samples
            )
        return result.reshape(xi.shape)

    def gradient_fourier(self, xi, rule=None):
        """Fourier transform of the first derivative."""
        xi = np.asarray(xi, dtype=float)
        return 1j * xi * self.fourier(xi, rule=rule)

    def shifted(self, offset):
        """The kernel translated by ``offset``."""
        return ShiftedKernel(self, offset)


class ShiftedKernel(Kernel):
    """Translate ``k(. - offset)`` of another kernel."""

    def __init__(self, kernel, offset):
        """Constructor."""
        super(ShiftedKernel, self).__init__(
            kernel.center + offset,
            kernel.support_radius,
            kernel.breakpoints + offset,
        )
        self.kernel = kernel
        self.offset = float(offset)
        self.family = kernel.family
        self.decay_order = kernel.decay_order

    def value(self, t):
        """Kernel value."""
        return self.kernel.value(np.asarray(t, dtype=float) - self.offset)

    def gradient(self, t):
        """First derivative."""
        return self.kernel.gradient(np.asarray(t, dtype=float) - self.offset)

    def hessian(self, t):
        """Second derivative."""
        return self.kernel.hessian(np.asarray(t, dtype=float) - self.offset)

    def fourier(self, xi, rule=None):
        """Modulated transform of the parent kernel."""
        xi = np.asarray(xi, dtype=float)
        return np.exp(-1j * self.offset * xi) * self.kernel.fourier(xi, rule=rule)

    def gradient_fourier(self, xi, rule=None):
        """Modulated transform of the parent kernel's derivative."""
        xi = np.asarray(xi, dtype=float)
        phase = np.exp(-1j * self.offset * xi)
        return phase * self.kernel.gradient_fourier(xi, rule=rule)


class GaussianKernel(Kernel):
    """Derivative of order ``order`` of ``exp(-a (t - center)^2)``.

    Derivatives are ``(-sqrt(a))^n H_n(sqrt(a) s) exp(-a s^2)`` with the
    physicists' Hermite polynomials ``H_n``.
    """

    family = "gaussian"
    decay_order = 4.0

    def __init__(
        self,
        exponent=GAUSSIAN_EXPONENT,
        order=0,
        center=0.0,
        cutoff=NLSAMPLING_GAUSSIAN_CUTOFF,
    ):
        """Constructor.

        :param exponent: the constant ``a``.
        :param order: derivative order, 0 for the Gaussian itself.
        :param cutoff: value below which the kernel is treated as zero.
        """
        if exponent <= 0 or order < 0:
            raise KernelError("Gaussian needs a positive exponent.")
        self.exponent = float(exponent)
        self.order = int(order)
        self.cutoff = float(cutoff)
        super(GaussianKernel, self).__init__(center, self._radius())

    def _derivative(self, t, order):
        """Derivative of the given order at ``t``."""
        return self._profile(np.asarray(t, dtype=float) - self.center, order)

    def _profile(self, s, order):
        """Derivative of the given order at offset ``s`` from the center."""
        root = math.sqrt(self.exponent)
        coefficients = np.zeros(order + 1)
        coefficients[order] = 1.0
        return (
            (-root) ** order
            * hermval(root * s, coefficients)
            * np.exp(-self.exponent * s * s)
        )

    def _radius(self):
        """Distance beyond which the magnitude stays below the cutoff."""
        base = math.sqrt(math.log(1.0 / self.cutoff) / self.exponent)
        if self.order == 0:
            return base
        grid = np.linspace(0.0, 4.0 * base + 4.0, 20001)
        large = np.nonzero(np.abs(self._profile(grid, self.order)) >= self.cutoff)
        return float(grid[large[0][-1] + 1]) if large[0].size else base

    def value(self, t):
        """Kernel value."""
        return self._derivative(t, self.order)

    def gradient(self, t):
        """First derivative."""
        return self._derivative(t, self.order + 1)

    def hessian(self, t):
        """Second derivative."""
        return self._derivative(t, self.order + 2)

    def fourier(self, xi, rule=None):
        """Closed form ``(i xi)^n sqrt(pi/a) exp(-xi^2 / 4a)``."""
        xi = np.asarray(xi, dtype=float)
        base = math.sqrt(math.pi / self.exponent) * np.exp(
            -xi * xi / (4.0 * self.exponent)
        )
        return (1j * xi) ** self.order * np.exp(-1j * self.center * xi) * base

    def gradient_fourier(self, xi, rule=None):
        """Closed form transform of the next derivative."""
        return GaussianKernel(
            self.exponent, self.order + 1, self.center, self.cutoff
        ).fourier(xi)

    def derivative(self):
        """Gaussian kernel of the next derivative order."""
        return GaussianKernel(self.exponent, self.order + 1, self.center, self.cutoff)


class CardinalSplineKernel(Kernel):
    """Natural cubic spline equal to one at one knot and zero at the others."""

    family = "cardinal_cubic_spline"
    decay_order = 3.0

    def __init__(self, knots, index):
        """Constructor.

        :param knots: :class:`~nonlinear_sampling.algebra.PointSet` of knots.
        :param index: position of the knot where the spline equals one.
        """
        knots = PointSet.coerce(knots)
        points = knots.points
        center = points[index]
        radius = max(center - points[0], points[-1] - center)
        super(CardinalSplineKernel, self).__init__(center, radius, points)
        self.knots = knots
        self.index = int(index)
        unit = np.zeros(points.size)
        unit[index] = 1.0
        self._spline = CubicSpline(points, unit, bc_type="natural")

    def _evaluate(self, t, nu):
        """Spline derivative of order ``nu``, zero off the knot hull."""
        t = np.asarray(t, dtype=float)
        points = self.knots.points
        inside = (t >= points[0]) & (t <= points[-1])
        clipped = np.clip(t, points[0], points[-1])
        return np.where(inside, self._spline(clipped, nu), 0.0)

    def value(self, t):
        """Kernel value."""
        return self._evaluate(t, 0)

    def gradient(self, t):
        """First derivative."""
        return self._evaluate(t, 1)

    def hessian(self, t):
        """Second derivative."""
        return self._evaluate(t, 2)


class BoxKernel(Kernel):
    """Box averager ``height * indicator of [left, right)``."""

    family = "box_average"
    decay_order = 8.0

    def __init__(self, left, right, height=1.0):
        """Constructor."""
        if right <= left:
            raise KernelError("Box needs left < right.")
        self.left, self.right, self.height = float(left), float(right), float(height)
        super(BoxKernel, self).__init__(
            0.5 * (left + right), 0.5 * (right - left), (left, right)
        )

    def value(self, t):
        """Kernel value."""
        t = np.asarray(t, dtype=float)
        return np.where((t >= self.left) & (t < self.right), self.height, 0.0)

    def gradient(self, t):
        """First derivative, zero away from the edges."""
        return np.zeros(np.shape(t))

    hessian = gradient

    def fourier(self, xi, rule=None):
        """Closed form ``h (exp(-i l xi) - exp(-i r xi)) / (i xi)``."""
        xi = np.asarray(xi, dtype=float)
        width = self.right - self.left
        # h * width * exp(-i c xi) * sinc(width xi / 2)
        return (
            self.height
            * width
            * np.exp(-1j * self.center * xi)
            * np.sinc(width * xi / (2.0 * math.pi))
        )


class SquareRootKernel(Kernel):
    """Square-root sampling kernel on [0, 1].

    ``max(1/4 - |2t - 1/4|, 0)`` on [0, 1/4], ``4t - 1`` on [1/4, 1/2] and
    ``1`` on [1/2, 1].
    """

    family = "square_root"
    decay_order = 8.0

    def __init__(self):
        """Constructor."""
        super(SquareRootKernel, self).__init__(0.5, 0.5, (0.0, 0.125, 0.25, 0.5, 1.0))

    def value(self, t):
        """Kernel value."""
        t = np.asarray(t, dtype=float)
        return np.select(
            [t < 0.0, t <= 0.25, t <= 0.5, t <= 1.0],
            [0.0, np.maximum(0.25 - np.abs(2.0 * t - 0.25), 0.0), 4.0 * t - 1.0, 1.0],
            default=0.0,
        )

    def gradient(self, t):
        """First derivative, away from the corners."""
        t = np.asarray(t, dtype=float)
        return np.select(
            [t < 0.0, t < 0.125, t < 0.25, t < 0.5],
            [0.0, 2.0, -2.0, 4.0],
            default=0.0,
        )

    def hessian(self, t):
        """Second derivative, zero away from the corners."""
        return np.zeros(np.shape(t))


class BSplineKernel(Kernel):
    """Centered cubic B-spline supported on [center - 2, center + 2]."""

    family = "bspline3"
    decay_order = 8.0

    def __init__(self, center=0.0):
        """Constructor."""
        knots = center + np.arange(-2.0, 3.0)
        super(BSplineKernel, self).__init__(center, 2.0, knots)
        self._spline = BSpline.basis_element(knots, extrapolate=False)

    def _evaluate(self, spline, t):
        """Spline value, zero off the support."""
        return np.nan_to_num(spline(np.asarray(t, dtype=float)), nan=0.0)

    def value(self, t):
        """Kernel value."""
        return self._evaluate(self._spline, t)

    def gradient(self, t):
        """First derivative."""
        return self._evaluate(self._spline.derivative(1), t)

    def hessian(self, t):
        """Second derivative."""
        return self._evaluate(self._spline.derivative(2), t)

    def fourier(self, xi, rule=None):
        """Closed form ``sinc(xi / 2)^4``."""
        xi = np.asarray(xi, dtype=float)
        return np.exp(-1j * self.center * xi) * np.sinc(xi / (2.0 * math.pi)) ** 4


def make_cardinal_splines(knots):
    """Cardinal natural cubic splines on a set of knots.

    :raises KernelError: with fewer than four knots.
    """
    knots = PointSet.coerce(knots)
    if len(knots) < 4:
        raise KernelError("Cardinal splines need at least 4 knots.")
    return [CardinalSplineKernel(knots, index) for index in range(len(knots))]


def make_square_root_kernel():
    """The square-root sampling kernel."""
    return SquareRootKernel()


def make_gaussian_generator(order=0):
    """Gaussian generator ``exp(-4 (pi/2)^(2/3) t^2)`` or one of its derivatives."""
    return GaussianKernel(GAUSSIAN_EXPONENT, order=order)


def inner_product(f, g, rule):
    """Integral of ``f g`` over the support of ``g`` within the rule's domain.

    :param f: a :class:`Kernel`, a vectorized callable or a constant.
    :param g: a :class:`Kernel`.
    :param rule: :class:`QuadratureRule`.
    """
    lower, upper = g.support
    breakpoints = [g.breakpoints]
    if isinstance(f, Kernel):
        lower, upper = max(lower, f.support[0]), min(upper, f.support[1])
        breakpoints.append(f.breakpoints)
        function = f.value
    elif callable(f):
        function = f
    else:
        constant = float(f)

        def function(t):
            return np.full(np.shape(t), constant)

    lower, upper = rule.clip((lower, upper))
    if upper <= lower:
        return 0.0
    return rule.integrate(
        lambda t: function(t) * g.value(t),
        np.concatenate(breakpoints),
        (lower, upper),
    )


class CompandingFunction(object):
    """Instantaneous companding ``F`` with its first two derivatives."""

    def __init__(
        self, tag, function, derivative, second_derivative, interval=(-1.0, 1.0)
    ):
        """Constructor.

        :param tag: ``identity``, ``sine`` or ``custom``.
        :param function: vectorized ``F``; must vanish at 0.
        :param derivative: vectorized ``F'``.
        :param second_derivative: vectorized ``F''``.
        :param interval: amplitude interval the declared bounds refer to.
        """
        if abs(float(function(np.zeros(1))[0])) > 1e-15:
            raise ValueError("Companding function must vanish at 0.")
        self.tag = tag
        self._function = function
        self._derivative = derivative
        self._second_derivative = second_derivative
        self.interval = (float(interval[0]), float(interval[1]))

    def __repr__(self):
        """Short representation."""
        return "CompandingFunction({0!r})".format(self.tag)

    def __call__(self, t):
        """Evaluate ``F``."""
        return self._function(np.asarray(t, dtype=float))

    def derivative(self, t):
        """Evaluate ``F'``."""
        return self._derivative(np.asarray(t, dtype=float))

    def second_derivative(self, t):
        """Evaluate ``F''``."""
        return self._second_derivative(np.asarray(t, dtype=float))

    def bounds(self, interval=None, size=NLSAMPLING_MU_GRID_SIZE):
        """Sup norms of ``F'`` and ``F''`` on a grid over ``interval``."""
        lower, upper = interval or self.interval
        grid = np.linspace(lower, upper, size)
        return (
            float(np.max(np.abs(self.derivative(grid)))),
            float(np.max(np.abs(self.second_derivative(grid)))),
        )

    @cached_property
    def derivative_bound(self):
        """Sup norm of ``F'`` over the declared interval."""
        return self.bounds()[0]

    @cached_property
    def second_derivative_bound(self):
        """Sup norm of ``F''`` over the declared interval."""
        return self.bounds()[1]


def identity_companding(interval=(-1.0, 1.0)):
    """``F(t) = t``."""
    return CompandingFunction(
        "identity",
        lambda t: np.array(t, dtype=float),
        lambda t: np.ones(np.shape(t)),
        lambda t: np.zeros(np.shape(t)),
        interval,
    )


def sine_companding(interval=(-1.0, 1.0)):
    """``F(t) = sin(pi t / 2)``."""
    half_pi = 0.5 * math.pi
    return CompandingFunction(
        "sine",
        lambda t: np.sin(half_pi * t),
        lambda t: half_pi * np.cos(half_pi * t),
        lambda t: -(half_pi**2) * np.sin(half_pi * t),
        interval,
    )


def custom_companding(function, derivative, second_derivative, interval=(-1.0, 1.0)):
    """Companding function from user supplied callables."""
    return CompandingFunction(
        "custom", function, derivative, second_derivative, interval
    )


def mu_of_companding(F, m, amplitude_interval, size=NLSAMPLING_MU_GRID_SIZE):
    """Supremum of ``|1 - m F'(t)|`` over an amplitude interval.

    The grid maximum is refined by a bounded scalar search between the
    neighbours of the maximizing grid point.
    """
    lower, upper = float(amplitude_interval[0]), float(amplitude_interval[1])
    if not (np.isfinite(lower) and np.isfinite(upper)) or upper < lower:
        raise ValueError("Amplitude interval must be finite.")

    def distance(t):
        return np.abs(1.0 - m * F.derivative(t))

    grid = np.linspace(lower, upper, size)
    values = distance(grid)
    best = int(np.argmax(values))
    left, right = grid[max(best - 1, 0)], grid[min(best + 1, size - 1)]
    if right <= left:
        return float(values[best])
    refined = minimize_scalar(
        lambda t: -float(distance(np.array([t]))[0]),
        bounds=(left, right),
        method="bounded",
    )
    return float(max(values[best], -refined.fun))
