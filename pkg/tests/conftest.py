# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Pytest configuration."""

import os
import shutil
import sys
import tempfile

import numpy as np
import pytest

from nonlinear_sampling.experiments import companding_instance, fri_instance
from nonlinear_sampling.fri import BlindConfig, linearize
from nonlinear_sampling.kernels import (
    QuadratureRule,
    identity_companding,
    make_gaussian_generator,
    sine_companding,
)
from nonlinear_sampling.serializers.schemas import ExperimentConfigSchema

# add tests to the sys path
sys.path.append(os.path.dirname(__file__))


@pytest.fixture()
def output_dir():
    """Temporary output directory."""
    path = tempfile.mkdtemp()
    yield path
    shutil.rmtree(path)


@pytest.fixture()
def rng():
    """Seeded random generator."""
    return np.random.default_rng(1234)


@pytest.fixture()
def rule():
    """Default quadrature rule on the real line."""
    return QuadratureRule()


@pytest.fixture()
def identity():
    """Identity companding function."""
    return identity_companding()


@pytest.fixture()
def sine():
    """Sine companding function."""
    return sine_companding()


def load_config(experiment, **values):
    """Experiment config with defaults."""
    return ExperimentConfigSchema().load(dict(values, experiment=experiment))


@pytest.fixture()
def make_config():
    """Factory of validated experiment configs."""
    return load_config


@pytest.fixture(scope="module")
def companding_case():
    """Random cardinal spline signal sampled by 80 box averagers."""
    config = load_config("companding_table1", seed=7)
    return companding_instance(config, np.random.default_rng(config.seed))


@pytest.fixture(scope="module")
def fri_case():
    """Random Gaussian pulse train with its linearization."""
    config = load_config("fri_table3", seed=11)
    instance = fri_instance(config, np.random.default_rng(config.seed))
    lin = linearize(instance.base, instance.sampler, instance.companding, instance.rule)
    return instance, lin


@pytest.fixture()
def gaussian():
    """Gaussian generator."""
    return make_gaussian_generator()


@pytest.fixture()
def blind_config(gaussian):
    """Blind recovery with the Gaussian and its derivative as samplers."""
    return BlindConfig(
        [gaussian, make_gaussian_generator(order=1)],
        amplitude_bound=3.0,
        perturbation_bound=0.05,
    )
