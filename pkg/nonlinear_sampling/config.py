# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Default configuration for nonlinear-sampling.

Every setting is a module-level constant prefixed with ``NLSAMPLING_``.
Library functions take these values as keyword defaults, and the
experiment runner reads them when a config file leaves a field unset.
"""

from collections import namedtuple

CompandingType = namedtuple("CompandingType", ["name", "label", "factory"])
"""Registered companding function: tag, label and factory import string."""

ExperimentType = namedtuple("ExperimentType", ["name", "command", "label", "runner"])
"""Registered experiment: config tag, CLI subcommand, label and runner."""

NLSAMPLING_COMPANDING_FUNCTIONS = [
    CompandingType(
        "identity",
        "Identity",
        "nonlinear_sampling.kernels:identity_companding",
    ),
    CompandingType(
        "sine",
        "Sine companding sin(pi t / 2)",
        "nonlinear_sampling.kernels:sine_companding",
    ),
]
"""Companding functions selectable by tag."""

NLSAMPLING_EXPERIMENTS = [
    ExperimentType(
        "companding_table1",
        "table1",
        "Van-Cittert reconstruction from companded averages",
        "nonlinear_sampling.experiments:run_table1",
    ),
    ExperimentType(
        "companding_table2",
        "table2",
        "Van-Cittert followed by quasi-Newton",
        "nonlinear_sampling.experiments:run_table2",
    ),
    ExperimentType(
        "companding_noise",
        "noise",
        "Reconstruction under piecewise bounded noise",
        "nonlinear_sampling.experiments:run_noise_demo",
    ),
    ExperimentType(
        "fri_table3",
        "table3",
        "Local identification of innovation positions",
        "nonlinear_sampling.experiments:run_table3",
    ),
    ExperimentType(
        "fri_table4",
        "table4",
        "Local identification with bounded random noise",
        "nonlinear_sampling.experiments:run_table4",
    ),
    ExperimentType(
        "blind_demo",
        "blind",
        "Blind recovery in a perturbed shift-invariant space",
        "nonlinear_sampling.experiments:run_blind_demo",
    ),
]
"""Experiments reachable from the command line."""

# Matrix algebra

NLSAMPLING_POWER_ITERATION_TOL = 1e-10
"""Relative tolerance of the power iteration for the l2 operator norm."""

NLSAMPLING_POWER_ITERATION_MAX_ITER = 5000
"""Iteration cap of the power iteration."""

NLSAMPLING_SINGULAR_THRESHOLD = 1e-12
"""Relative singular value below which a matrix counts as singular."""

NLSAMPLING_SERIES_TOL = 1e-14
"""Term norm at which the Neumann series of the inverse is truncated."""

NLSAMPLING_SERIES_MAX_TERMS = 2**60
"""Default cap on the number of Neumann series terms."""

NLSAMPLING_BAND_CUTOFF = 1e-14
"""Relative entry size below which band sparsification drops entries."""

NLSAMPLING_JAFFARD_BETA = 2.0
"""Default decay order for Jaffard norm diagnostics."""

# Quadrature

NLSAMPLING_PANEL_WIDTH = 0.05
"""Maximal width of a composite Gauss-Legendre panel."""

NLSAMPLING_NODES_PER_PANEL = 10
"""Gauss-Legendre nodes per panel."""

NLSAMPLING_GAUSSIAN_CUTOFF = 1e-16
"""Value below which the Gaussian generator is truncated."""

NLSAMPLING_MU_GRID_SIZE = 10000
"""Grid size used when maximizing |1 - m F'(t)|."""

# Solvers

NLSAMPLING_SOLVER_TOL = 1e-12
"""Sup-norm residual at which the iterative solvers stop."""

NLSAMPLING_SOLVER_MAX_ITER = 500
"""Default iteration cap of the iterative solvers."""

NLSAMPLING_SWITCH_RATIO = 0.10
"""Relative residual at which the hybrid solver switches to quasi-Newton."""

NLSAMPLING_COMPANDING_SOLVERS = ("van_cittert", "hybrid")
"""Solvers the spline reconstruction experiments can run."""

NLSAMPLING_RATE_BURN_IN = 5
"""Iterations skipped before the geometric rate is measured."""

NLSAMPLING_SAMPLE_POINTS = 8
"""Random sample points used for the monotonicity estimate."""

NLSAMPLING_NEWTON_GROWTH = 1.0
"""Largest ratio of successive residuals accepted in a quasi-Newton step."""

# Identification and blind recovery

NLSAMPLING_IDENTIFY_ALPHA = 0.5
"""Relaxation factor of the identification iteration."""

NLSAMPLING_LOCALITY_RADII = (0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5)
"""Perturbation sizes tested when calibrating the locality radius."""

NLSAMPLING_LOCALITY_CONSTANT = 1.0 / 3.0
"""Bound on the distance of the identification gradient from the identity."""

NLSAMPLING_FREQUENCY_GRID = 4096
"""Number of frequency points on [-pi, pi) for bracket products."""

NLSAMPLING_ALIAS_RANGE = 8
"""Number of 2 pi aliases summed on each side in bracket products."""

NLSAMPLING_FILTER_TOL = 1e-10
"""Tap size below which dual filters are truncated."""

NLSAMPLING_RANK_TOL = 1e-8
"""Smallest admissible second singular value in the rank condition."""

# Experiments and artifacts

NLSAMPLING_DEFAULT_SEED = 20140101
"""Seed used when neither the config file nor the CLI provides one."""

NLSAMPLING_REJECTION_CAP = 10000
"""Maximal number of rejection sampling attempts for random positions."""

NLSAMPLING_INSTANCE_ATTEMPTS = 200
"""Random instances drawn before an experiment gives up."""

NLSAMPLING_SIGNAL_PEAK = 0.6
"""Peak of generated spline signals relative to the monotone interval."""

NLSAMPLING_FRI_CONDITION = 1e-3
"""Smallest ratio of the extreme singular values of an accepted linearization."""

NLSAMPLING_FRI_CONTRACTION = 0.6
"""Largest spectral radius of the identification step of an accepted instance."""

NLSAMPLING_FRI_NOISE_ENVELOPE = (0.2, 0.2)
"""Largest first order noise drift of accepted amplitudes and positions."""

NLSAMPLING_CSV_DECIMALS = 4
"""Decimals written to the rounded CSV artifact."""

NLSAMPLING_CSV_SIGNIFICANT_DIGITS = 17
"""Significant digits written to the full precision CSV artifact."""

NLSAMPLING_SVG_HASHSALT = "nonlinear-sampling"
"""Salt for SVG element ids, fixed so that figures are reproducible."""

NLSAMPLING_EXPERIMENT_DEFAULTS = {
    "companding_table1": {
        "alpha": 0.3,
        "max_iter": 50,
        "noise_level": 0.0,
        "solver": "van_cittert",
    },
    "companding_table2": {
        "alpha": 0.3,
        "max_iter": 15,
        "noise_level": 0.0,
        "solver": "hybrid",
    },
    "companding_noise": {
        "alpha": 0.3,
        "max_iter": 200,
        "noise_level": 0.025,
        "solver": "van_cittert",
    },
    "fri_table3": {
        "alpha": 0.5,
        "max_iter": 30,
        "noise_level": 0.0,
    },
    "fri_table4": {
        "alpha": 0.5,
        "max_iter": 30,
        "noise_level": 0.05,
    },
    "blind_demo": {
        "alpha": 0.5,
        "max_iter": 200,
        "noise_level": 0.0,
    },
}
"""Per experiment settings used when the config and the command line omit them.

The spline reconstruction experiments also name their solver.
"""

NLSAMPLING_COMPANDING_ROWS = (5, 10, 15, 20, 30, 40, 50)
"""Iterations reported by the Van-Cittert reconstruction table."""

NLSAMPLING_FRI_ROWS = (1, 5, 10, 15, 20, 25, 30)
"""Iterations reported by the identification tables."""
