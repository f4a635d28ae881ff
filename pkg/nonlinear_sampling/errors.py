# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Errors for nonlinear sampling computations."""


class NonlinearSamplingError(Exception):
    """Base class for nonlinear-sampling errors."""


class ConfigurationError(NonlinearSamplingError, ValueError):
    """Unknown registry tag or invalid experiment configuration."""


class KernelError(NonlinearSamplingError, ValueError):
    """Kernel family cannot be built from the given parameters."""


class NotInvertibleError(NonlinearSamplingError):
    """Matrix is not boundedly invertible."""


class LinearizationError(NonlinearSamplingError):
    """Linearization is not stable (rank deficient)."""

    def __init__(self, message, smallest_singular_value=None):
        """Constructor.

        :param message: human readable reason.
        :param smallest_singular_value: smallest singular value found.
        """
        super(LinearizationError, self).__init__(message)
        self.smallest_singular_value = smallest_singular_value


class SamplingNotStabilizableError(NonlinearSamplingError):
    """Reconstruction matrix cannot be formed for the sampling model."""


class BoundsUnavailableError(NonlinearSamplingError):
    """Error bounds need a strictly monotone map."""


class RankConditionError(NonlinearSamplingError):
    """Samplers do not satisfy the bracket rank condition."""


class OutOfRegimeError(NonlinearSamplingError):
    """Recovered parameters left the perturbation regime."""


class SolverError(NonlinearSamplingError):
    """Base class for iterative solver failures."""

    def __init__(self, message, trace=None):
        """Constructor.

        :param message: human readable reason.
        :param trace: the :class:`~nonlinear_sampling.solvers.SolverTrace`
            recorded up to the failure.
        """
        super(SolverError, self).__init__(message)
        self.trace = trace


class DivergenceError(SolverError):
    """Iterates left the admissible region or became non-finite."""


class SingularGradientError(SolverError):
    """Gradient could not be inverted during a quasi-Newton step."""

    def __init__(self, message, iteration, trace=None):
        """Constructor.

        :param iteration: index of the iterate with the singular gradient.
        """
        super(SingularGradientError, self).__init__(message, trace=trace)
        self.iteration = iteration
