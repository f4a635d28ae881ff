# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Localized nonlinear functional equations and nonlinear sampling.

The package solves ``f(x) = y`` for strictly monotone maps with localized
gradients by Van-Cittert and quasi-Newton iterations, and applies the
solvers to reconstruction from companded average samples and to the
identification of signals with finite rate of innovation.

>>> from nonlinear_sampling import PointSet
>>> len(PointSet.integers(0, 4))
5
"""

from .algebra import (
    LocalizedMatrix,
    PointSet,
    PseudoInverse,
    jaffard_norm,
    norm_controlled_inverse,
    operator_norm,
    pseudo_inverse_apply,
)
from .companding import (
    GeneratorFamily,
    SamplingModel,
    companding_map,
    forward_sample,
    gap,
    modified_companding_map,
    reconstruct_modified_van_cittert,
    reconstruct_van_cittert,
    reconstruction_matrix,
)
from .fri import (
    BlindConfig,
    FriSignal,
    blind_coarse_estimate,
    blind_recover,
    bracket_product,
    check_rank_condition,
    identification_map,
    identify,
    linearize,
)
from .kernels import (
    CompandingFunction,
    QuadratureRule,
    make_cardinal_splines,
    make_gaussian_generator,
    make_square_root_kernel,
)
from .solvers import (
    NonlinearMap,
    SolverTrace,
    error_estimate,
    estimate_monotonicity,
    hybrid_solve,
    quasi_newton_solve,
    van_cittert_solve,
)
from .version import __version__

__all__ = (
    "__version__",
    "BlindConfig",
    "CompandingFunction",
    "FriSignal",
    "GeneratorFamily",
    "LocalizedMatrix",
    "NonlinearMap",
    "PointSet",
    "PseudoInverse",
    "QuadratureRule",
    "SamplingModel",
    "SolverTrace",
    "blind_coarse_estimate",
    "blind_recover",
    "bracket_product",
    "check_rank_condition",
    "companding_map",
    "error_estimate",
    "estimate_monotonicity",
    "forward_sample",
    "gap",
    "hybrid_solve",
    "identification_map",
    "identify",
    "jaffard_norm",
    "linearize",
    "make_cardinal_splines",
    "make_gaussian_generator",
    "make_square_root_kernel",
    "modified_companding_map",
    "norm_controlled_inverse",
    "operator_norm",
    "pseudo_inverse_apply",
    "quasi_newton_solve",
    "reconstruct_modified_van_cittert",
    "reconstruct_van_cittert",
    "reconstruction_matrix",
    "van_cittert_solve",
)
