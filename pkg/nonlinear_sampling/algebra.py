# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Localized matrices indexed by point sets.

Matrices are finite truncations of infinite matrices with polynomial
off-diagonal decay. Rows and columns are indexed by :class:`PointSet`
instances, so the distance between the index points of an entry is always
available to the Jaffard norm, the supremum of
``(1 + |lambda - lambda'|)^beta |a(lambda, lambda')|`` over all entries.

The module also provides the series construction of the inverse that
keeps the decay under control, and a least squares solver used by the
identification of innovation positions.
"""

import logging
from collections import namedtuple

import numpy as np
from scipy import linalg
from scipy.special import gammaln, xlogy
from werkzeug.utils import cached_property

from .config import (
    NLSAMPLING_BAND_CUTOFF,
    NLSAMPLING_JAFFARD_BETA,
    NLSAMPLING_POWER_ITERATION_MAX_ITER,
    NLSAMPLING_POWER_ITERATION_TOL,
    NLSAMPLING_SERIES_MAX_TERMS,
    NLSAMPLING_SERIES_TOL,
    NLSAMPLING_SINGULAR_THRESHOLD,
)
from .errors import LinearizationError, NotInvertibleError

logger = logging.getLogger("nonlinear-sampling")

NormReport = namedtuple(
    "NormReport",
    ["jaffard", "op_l1", "op_l2", "op_linf", "l2_residual", "l2_converged"],
)
"""Norms of a localized matrix; ``op_l2`` comes from the power iteration."""

InverseDiagnostics = namedtuple(
    "InverseDiagnostics",
    [
        "ratio",
        "terms",
        "jaffard",
        "bound",
        "algebra_constant",
        "differential_constant",
        "residual",
    ],
)
"""Outcome of :func:`norm_controlled_inverse`.

``ratio`` is the contraction ratio of the series, ``terms`` the number of
series terms summed, ``jaffard`` the Jaffard norm of the computed inverse
and ``bound`` the a-priori bound it is compared against.
"""

_NORM_ORDERS = {1: 1, 2: 2, np.inf: np.inf, "inf": np.inf}


def _norm_order(p):
    """Normalize an operator norm order to 1, 2 or ``numpy.inf``."""
    try:
        return _NORM_ORDERS[p]
    except (KeyError, TypeError):
        raise ValueError("Norm order must be 1, 2 or inf, got {0!r}.".format(p))


def vector_norm(x, p=np.inf):
    """The l^p norm of a vector for p in {1, 2, inf}."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, ord=_norm_order(p)))


class PointSet(object):
    """Finite strictly increasing set of real positions."""

    dimension = 1

    def __init__(self, points):
        """Constructor.

        :param points: iterable of reals, strictly increasing.
        """
        points = np.array(points, dtype=float).reshape(-1)
        if not np.all(np.isfinite(points)):
            raise ValueError("Points must be finite.")
        if points.size > 1 and np.any(np.diff(points) <= 0):
            raise ValueError("Points must be strictly increasing.")
        points.setflags(write=False)
        self._points = points

    @classmethod
    def uniform(cls, start, stop, count):
        """Equispaced points from ``start`` to ``stop`` inclusive."""
        return cls(np.linspace(start, stop, count))

    @classmethod
    def integers(cls, start, stop):
        """The integers ``start, ..., stop`` inclusive."""
        return cls(np.arange(int(start), int(stop) + 1, dtype=float))

    @classmethod
    def coerce(cls, value):
        """Return ``value`` as a point set."""
        if isinstance(value, cls):
            return value
        return cls(value)

    @property
    def points(self):
        """Read-only array of positions."""
        return self._points

    def __len__(self):
        """Number of points."""
        return self._points.size

    def __iter__(self):
        """Iterate over positions as floats."""
        return iter(self._points.tolist())

    def __getitem__(self, index):
        """Position at ``index``."""
        return float(self._points[index])

    def __eq__(self, other):
        """Point sets are equal when their positions are."""
        if not isinstance(other, PointSet):
            return NotImplemented
        return np.array_equal(self._points, other._points)

    def __ne__(self, other):
        """Negation of :meth:`__eq__`."""
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __repr__(self):
        """Short representation."""
        return "PointSet({0} points)".format(len(self))

    def separation_count(self):
        """Largest number of points in a half-open interval of unit length."""
        if not len(self):
            return 0
        ends = np.searchsorted(self._points, self._points + 1.0, side="left")
        return int(np.max(ends - np.arange(len(self))))

    def min_gap(self):
        """Smallest distance between consecutive points."""
        if len(self) < 2:
            return np.inf
        return float(np.min(np.diff(self._points)))

    def max_gap(self):
        """Largest distance between consecutive points."""
        if len(self) < 2:
            return 0.0
        return float(np.max(np.diff(self._points)))

    def shifted(self, offset):
        """Point set translated by ``offset``."""
        return PointSet(self._points + offset)

    def distances(self, other):
        """Matrix of distances ``|self[i] - other[j]|``."""
        return np.abs(self._points[:, None] - other.points[None, :])


class LocalizedMatrix(object):
    """Dense real matrix with rows and columns indexed by point sets."""

    def __init__(self, row_set, col_set, entries):
        """Constructor.

        :param row_set: :class:`PointSet` (or positions) indexing the rows.
        :param col_set: :class:`PointSet` (or positions) indexing the columns.
        :param entries: array of shape ``(len(row_set), len(col_set))``.
        """
        self.row_set = PointSet.coerce(row_set)
        self.col_set = PointSet.coerce(col_set)
        entries = np.array(entries, dtype=float)
        shape = (len(self.row_set), len(self.col_set))
        if entries.size == 0:
            entries = entries.reshape(shape)
        if entries.shape != shape:
            raise ValueError(
                "Entries of shape {0} do not match index sets {1}.".format(
                    entries.shape, shape
                )
            )
        if not np.all(np.isfinite(entries)):
            raise ValueError("Matrix entries must be finite.")
        entries.setflags(write=False)
        self.entries = entries

    @classmethod
    def from_array(cls, entries, row_set=None, col_set=None):
        """Wrap an array, indexing by ``0, 1, ...`` when sets are omitted."""
        entries = np.atleast_2d(np.asarray(entries, dtype=float))
        if row_set is None:
            row_set = np.arange(entries.shape[0], dtype=float)
        if col_set is None:
            col_set = np.arange(entries.shape[1], dtype=float)
        return cls(row_set, col_set, entries)

    @classmethod
    def identity(cls, points):
        """Identity matrix on a point set."""
        points = PointSet.coerce(points)
        return cls(points, points, np.eye(len(points)))

    @property
    def shape(self):
        """Shape of the entry array."""
        return self.entries.shape

    @property
    def T(self):
        """Transpose, with row and column sets swapped."""
        return LocalizedMatrix(self.col_set, self.row_set, self.entries.T)

    @cached_property
    def distances(self):
        """Distances between the row and column index points."""
        return self.row_set.distances(self.col_set)

    def __matmul__(self, other):
        """Matrix product with a localized matrix or an array."""
        if isinstance(other, LocalizedMatrix):
            if len(self.col_set) != len(other.row_set):
                raise ValueError("Matrices are not conformable.")
            return LocalizedMatrix(
                self.row_set, other.col_set, self.entries @ other.entries
            )
        return self.entries @ np.asarray(other, dtype=float)

    def __add__(self, other):
        """Entrywise sum of matrices on the same index sets."""
        return LocalizedMatrix(
            self.row_set, self.col_set, self.entries + _entries_of(other)
        )

    def __sub__(self, other):
        """Entrywise difference of matrices on the same index sets."""
        return LocalizedMatrix(
            self.row_set, self.col_set, self.entries - _entries_of(other)
        )

    def __mul__(self, scalar):
        """Scalar multiple."""
        return LocalizedMatrix(self.row_set, self.col_set, self.entries * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        """Negated matrix."""
        return self * -1.0

    def __eq__(self, other):
        """Equal index sets and identical entries."""
        if not isinstance(other, LocalizedMatrix):
            return NotImplemented
        return (
            self.row_set == other.row_set
            and self.col_set == other.col_set
            and np.array_equal(self.entries, other.entries)
        )

    def __ne__(self, other):
        """Negation of :meth:`__eq__`."""
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def __repr__(self):
        """Short representation."""
        return "LocalizedMatrix({0}x{1})".format(*self.shape)

    def jaffard_norm(self, beta):
        """Shortcut for :func:`jaffard_norm`."""
        return jaffard_norm(self, beta)

    def operator_norm(self, p):
        """Shortcut for :func:`operator_norm`."""
        return operator_norm(self, p)

    def norm_report(self, beta):
        """Shortcut for :func:`norm_report`."""
        return norm_report(self, beta)

    def banded(self, beta, cutoff=NLSAMPLING_BAND_CUTOFF):
        """Drop entries that the decay bound places below ``cutoff``.

        An entry at distance ``d`` is at most ``J (1 + d)^{-beta}`` in size
        where ``J`` is the Jaffard norm; entries whose bound is below the
        cutoff are set to zero.
        """
        norm = self.jaffard_norm(beta)
        keep = norm * (1.0 + self.distances) ** (-float(beta)) >= cutoff
        return LocalizedMatrix(
            self.row_set, self.col_set, np.where(keep, self.entries, 0.0)
        )


def _entries_of(value):
    """Entry array of a localized matrix or array."""
    if isinstance(value, LocalizedMatrix):
        return value.entries
    return np.asarray(value, dtype=float)


def jaffard_norm(A, beta):
    """Supremum of ``(1 + |lambda - lambda'|)^beta |a(lambda, lambda')|``."""
    if beta < 0:
        raise ValueError("Decay order beta must be nonnegative.")
    if A.entries.size == 0:
        return 0.0
    weights = (1.0 + A.distances) ** float(beta)
    return float(np.max(weights * np.abs(A.entries)))


def _power_run(entries, start, tol, max_iter):
    """Power iteration on ``A^T A`` from one start vector."""
    vector = start / np.linalg.norm(start)
    value, residual = 0.0, np.inf
    for _ in range(max_iter):
        image = entries.T @ (entries @ vector)
        value = float(vector @ image)
        residual = float(np.linalg.norm(image - value * vector))
        if residual <= tol * value or value == 0.0:
            return value, residual, True
        vector = image / np.linalg.norm(image)
    return value, residual, False


def spectral_norm(A, tol=NLSAMPLING_POWER_ITERATION_TOL, max_iter=None, seed=0):
    """Largest singular value by power iteration.

    The iteration starts from the all-ones vector and is restarted once
    from a seeded random vector; the larger Rayleigh quotient is kept.

    :returns: ``(value, residual, converged)`` where ``residual`` is the
        relative Rayleigh residual of the kept run.
    """
    if max_iter is None:
        max_iter = NLSAMPLING_POWER_ITERATION_MAX_ITER
    entries = _entries_of(A)
    if entries.size == 0 or not np.any(entries):
        return 0.0, 0.0, True
    rng = np.random.default_rng(seed)
    starts = (np.ones(entries.shape[1]), rng.standard_normal(entries.shape[1]))
    best = None
    for start in starts:
        run = _power_run(entries, start, tol, max_iter)
        if best is None or run[0] > best[0]:
            best = run
    value, residual, converged = best
    if not converged:
        logger.warning("Power iteration did not converge in %d steps.", max_iter)
    relative = residual / value if value > 0 else 0.0
    return float(np.sqrt(max(value, 0.0))), relative, converged


def operator_norm(A, p):
    """Operator norm on l^p for p in {1, 2, inf}.

    p = 1 and p = inf are the exact maximal column and row sums; p = 2 is
    the power iteration estimate of :func:`spectral_norm`.
    """
    p = _norm_order(p)
    entries = _entries_of(A)
    if entries.size == 0:
        return 0.0
    if p == 1:
        return float(np.max(np.sum(np.abs(entries), axis=0)))
    if p == np.inf:
        return float(np.max(np.sum(np.abs(entries), axis=1)))
    return spectral_norm(entries)[0]


def norm_report(A, beta):
    """Collect the Jaffard norm and the three operator norms of ``A``."""
    value, residual, converged = spectral_norm(A)
    return NormReport(
        jaffard=jaffard_norm(A, beta),
        op_l1=operator_norm(A, 1),
        op_l2=value,
        op_linf=operator_norm(A, np.inf),
        l2_residual=residual,
        l2_converged=converged,
    )


def algebra_constant(middle, beta, anchors=None):
    """Constant making the Jaffard norm submultiplicative.

    For products summed over the index set ``middle``,
    ``||XY|| <= C ||X|| ||Y||`` holds with
    ``C = 2^(beta+1) sup_x sum_q (1 + |x - q|)^(-beta)``, the supremum
    running over the outer index points ``anchors``.
    """
    middle = PointSet.coerce(middle)
    anchors = middle if anchors is None else PointSet.coerce(anchors)
    if not len(middle) or not len(anchors):
        return 2.0 ** (beta + 1.0)
    sums = np.sum((1.0 + anchors.distances(middle)) ** (-float(beta)), axis=1)
    return float(2.0 ** (beta + 1.0) * np.max(sums))


def _log_power_series(log_base, ratio):
    """Logarithm of an upper bound of ``sum_{n>=1} r^n K^(1 + log2 n)``.

    With ``k = log2 K`` and ``a = -log r`` the sum equals
    ``K sum n^k e^(-a n)``; the unimodal summand is bounded by its integral
    plus its maximum.
    """
    k = log_base / np.log(2.0)
    a = -np.log(ratio)
    integral = gammaln(k + 1.0) - (k + 1.0) * np.log(a)
    peak = xlogy(k, k / a) - k
    return log_base + np.logaddexp(integral, peak)


def norm_controlled_inverse(
    A,
    max_terms=NLSAMPLING_SERIES_MAX_TERMS,
    beta=NLSAMPLING_JAFFARD_BETA,
    tol=NLSAMPLING_SERIES_TOL,
):
    """Invert ``A`` through the series that controls its Jaffard norm.

    With ``B = I - A^T A / ||A||_2^2`` the inverse is
    ``||A||_2^{-2} sum_n B^n A^T``. The series is summed in product form,
    ``sum_{n < 2^K} B^n = prod_{k < K} (I + B^{2^k})``, which needs ``K``
    squarings for ``2^K`` terms, and is truncated once ``B^{2^K}`` drops
    below ``tol`` or ``max_terms`` terms are summed. At most three
    Newton-Schulz steps ``X <- X (2I - AX)`` then polish the result while
    the identity residual improves.

    :returns: ``(inverse, diagnostics)`` with the inverse indexed by
        ``(A.col_set, A.row_set)`` and :class:`InverseDiagnostics`.
    :raises NotInvertibleError: when the contraction ratio reaches one.
    """
    entries = A.entries
    if entries.shape[0] != entries.shape[1]:
        raise ValueError("Only square matrices can be inverted.")
    size = entries.shape[0]
    if size == 0:
        empty = LocalizedMatrix(A.col_set, A.row_set, entries.T)
        return empty, InverseDiagnostics(0.0, 0, 0.0, 0.0, 1.0, 1.0, 0.0)

    singular_values = linalg.svdvals(entries)
    largest, smallest = singular_values[0], singular_values[-1]
    if largest == 0.0 or smallest <= NLSAMPLING_SINGULAR_THRESHOLD * largest:
        raise NotInvertibleError("Matrix is not boundedly invertible.")
    ratio = 1.0 - (smallest / largest) ** 2
    if ratio >= 1.0:
        raise NotInvertibleError("Matrix is not boundedly invertible.")

    scale = largest**2
    identity = np.eye(size)
    step = identity - entries.T @ entries / scale
    constant = algebra_constant(A.col_set, beta, _union(A.row_set, A.col_set))

    partial = identity.copy()
    power = step.copy()
    terms = 1
    differential = 1.0
    power_norm = constant * _jaffard_entries(power, A.col_set, beta)
    while terms * 2 <= max_terms and np.max(np.abs(power)) >= tol:
        partial = partial + power @ partial
        terms *= 2
        square = power @ power
        square_norm = constant * _jaffard_entries(square, A.col_set, beta)
        spectral = ratio ** (terms // 2)
        if power_norm > 0.0 and spectral > 0.0:
            differential = max(differential, square_norm / (power_norm * spectral))
        power, power_norm = square, square_norm

    inverse = partial @ entries.T / scale
    residual = np.max(np.abs(entries @ inverse - identity))
    for _ in range(3):
        candidate = inverse @ (2.0 * identity - entries @ inverse)
        candidate_residual = np.max(np.abs(entries @ candidate - identity))
        if not candidate_residual < residual:
            break
        inverse, residual = candidate, candidate_residual

    result = LocalizedMatrix(A.col_set, A.row_set, inverse)
    bound = _inverse_bound(A, step, ratio, beta, constant, differential, scale)
    diagnostics = InverseDiagnostics(
        ratio=ratio,
        terms=terms,
        jaffard=result.jaffard_norm(beta),
        bound=bound,
        algebra_constant=constant,
        differential_constant=differential,
        residual=float(residual),
    )
    logger.debug(
        "Inverted %dx%d matrix with %d series terms, ratio %.3e.",
        size,
        size,
        terms,
        ratio,
    )
    return result, diagnostics


def _union(first, second):
    """Sorted union of two point sets."""
    return PointSet(np.union1d(first.points, second.points))


def _jaffard_entries(entries, points, beta):
    """Jaffard norm of a square array indexed by ``points`` on both sides."""
    return jaffard_norm(LocalizedMatrix(points, points, entries), beta)


def _inverse_bound(A, step, ratio, beta, constant, differential, scale):
    """Evaluate the a-priori bound on the Jaffard norm of the inverse.

    The bound is
    ``||A^T|| ||A||_2^{-2} (1 + sum_{n>=1} r^n (D N(B) / r)^(1 + log2 n))``
    where ``N`` is the submultiplicative rescaling of the Jaffard norm and
    ``D`` the measured constant of the weak differential condition.
    """
    transposed = A.T.jaffard_norm(beta)
    if ratio == 0.0:
        return transposed / scale
    step_norm = constant * _jaffard_entries(step, A.col_set, beta)
    log_base = np.log(max(differential * step_norm / ratio, 1.0))
    with np.errstate(over="ignore"):
        tail = np.exp(_log_power_series(log_base, ratio))
    return float(transposed / scale * (1.0 + tail))


def check_differential_norm(A, B, beta, theta, c0=None):
    """Smallest constant of the weak differential norm inequality.

    Computes ``ratio`` such that
    ``||AB|| = ratio (||A|| ||B||^theta ||B||_2^(1-theta)
    + ||B|| ||A||^theta ||A||_2^(1-theta))`` in Jaffard norms of order
    ``beta``.

    :param c0: constant to compare against; defaults to the algebra
        constant of the summation index set.
    :returns: ``(ratio, holds)``.
    """
    if not 0.0 <= theta < 1.0:
        raise ValueError("theta must lie in [0, 1).")
    product = A @ B
    norm_a, norm_b = jaffard_norm(A, beta), jaffard_norm(B, beta)
    spectral_a, spectral_b = operator_norm(A, 2), operator_norm(B, 2)
    denominator = norm_a * norm_b**theta * spectral_b ** (
        1.0 - theta
    ) + norm_b * norm_a**theta * spectral_a ** (1.0 - theta)
    numerator = jaffard_norm(product, beta)
    if numerator == 0.0:
        ratio = 0.0
    elif denominator == 0.0:
        ratio = np.inf
    else:
        ratio = numerator / denominator
    if c0 is None:
        c0 = algebra_constant(A.col_set, beta, _union(A.row_set, B.col_set))
    return float(ratio), bool(ratio <= c0)


class PseudoInverse(object):
    """Least squares solver ``v -> (S^T S)^{-1} S^T v`` for a fixed ``S``.

    ``S`` is factored once by a column-pivoted QR decomposition.
    """

    def __init__(self, S, threshold=NLSAMPLING_SINGULAR_THRESHOLD):
        """Constructor.

        :param S: :class:`LocalizedMatrix` or array with full column rank.
        :raises LinearizationError: when ``S^T S`` is numerically singular.
        """
        entries = _entries_of(S)
        rows, cols = entries.shape
        if cols == 0:
            raise LinearizationError(
                "Linearization not stable: no unknowns.", smallest_singular_value=0.0
            )
        self.singular_values = linalg.svdvals(entries)
        largest = self.singular_values[0]
        smallest = self.singular_values[-1] if rows >= cols else 0.0
        if largest == 0.0 or smallest**2 <= threshold * largest**2:
            raise LinearizationError(
                "Linearization not stable: smallest singular value {0:.3e}.".format(
                    smallest
                ),
                smallest_singular_value=float(smallest),
            )
        self.shape = entries.shape
        self._q, self._r, self._permutation = linalg.qr(
            entries, mode="economic", pivoting=True
        )

    @property
    def smallest_singular_value(self):
        """Smallest singular value of ``S``."""
        return float(self.singular_values[-1])

    @property
    def largest_singular_value(self):
        """Largest singular value of ``S``."""
        return float(self.singular_values[0])

    def apply(self, values):
        """Least squares solution for a vector or each column of a matrix."""
        values = _entries_of(values)
        solution = linalg.solve_triangular(self._r, self._q.T @ values)
        result = np.empty_like(solution)
        result[self._permutation] = solution
        return result


def pseudo_inverse_apply(S, v):
    """Return ``(S^T S)^{-1} S^T v`` without forming the inverse."""
    return PseudoInverse(S).apply(v)
