# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Schema tests."""

import numpy as np
import pytest
from marshmallow import ValidationError

from nonlinear_sampling.config import (
    NLSAMPLING_COMPANDING_SOLVERS,
    NLSAMPLING_DEFAULT_SEED,
    NLSAMPLING_EXPERIMENT_DEFAULTS,
    NLSAMPLING_SWITCH_RATIO,
)
from nonlinear_sampling.experiments import ExperimentConfig, TableArtifact, setting
from nonlinear_sampling.serializers.schemas import (
    ExperimentConfigSchema,
    TableArtifactSchema,
)


def test_config_defaults(make_config):
    """Test that unset fields fall back to the defaults."""
    config = make_config("fri_table3")
    assert isinstance(config, ExperimentConfig)
    assert config.seed == NLSAMPLING_DEFAULT_SEED
    assert config.companding == "sine"
    assert config.switch_ratio == NLSAMPLING_SWITCH_RATIO
    assert config.alpha is None
    assert config.output is None
    assert setting(config, "alpha") == 0.5
    assert setting(config, "max_iter") == 30


def test_config_overrides(make_config):
    """Test that explicit values win over the experiment defaults."""
    config = make_config("companding_table2", alpha=0.2, max_iter=7, seed=3)
    assert setting(config, "alpha") == 0.2
    assert setting(config, "max_iter") == 7
    assert setting(config, "noise_level") == 0.0
    assert config.seed == 3


def test_experiment_defaults_complete():
    """Test that every experiment has its defaults and spline runs a solver."""
    for name, values in NLSAMPLING_EXPERIMENT_DEFAULTS.items():
        keys = {"alpha", "max_iter", "noise_level"}
        if name.startswith("companding_"):
            assert values["solver"] in NLSAMPLING_COMPANDING_SOLVERS
            keys.add("solver")
        assert set(values) == keys
    assert NLSAMPLING_EXPERIMENT_DEFAULTS["companding_table2"]["max_iter"] == 15


def test_config_solver(make_config):
    """Test the solver setting of the spline experiments."""
    assert setting(make_config("companding_noise"), "solver") == "van_cittert"
    assert setting(make_config("companding_table2"), "solver") == "hybrid"
    config = make_config("companding_noise", solver="hybrid")
    assert setting(config, "solver") == "hybrid"


@pytest.mark.parametrize(
    "data",
    [
        {},
        {"experiment": "table1"},
        {"experiment": "fri_table3", "colour": "red"},
        {"experiment": "fri_table3", "alpha": 0.0},
        {"experiment": "fri_table3", "alpha": -0.5},
        {"experiment": "fri_table3", "seed": -1},
        {"experiment": "fri_table3", "max_iter": 0},
        {"experiment": "fri_table3", "companding": "cube"},
        {"experiment": "fri_table3", "switch_ratio": 1.5},
        {"experiment": "companding_noise", "solver": "newton"},
        {"experiment": "companding_table1", "knot_gap_min": 0.2},
        {"experiment": "companding_table1", "interval_start": 3.0},
        {"experiment": "companding_table1", "knot_gap_min": -0.1},
    ],
)
def test_config_rejected(data):
    """Test that invalid configs raise validation errors."""
    with pytest.raises(ValidationError):
        ExperimentConfigSchema().load(data)


def test_table_artifact_dump():
    """Test that cells are dumped as plain integers and floats."""
    artifact = TableArtifact(
        "table1",
        "Title",
        ("iteration", "error"),
        [(5, np.float64(0.25)), (np.int64(10), np.nan)],
    )
    data = TableArtifactSchema().dump(artifact)
    assert data["name"] == "table1"
    assert data["header"] == ["iteration", "error"]
    assert data["rows"][0] == [5, 0.25]
    assert type(data["rows"][1][0]) is int
    assert type(data["rows"][1][1]) is float
    assert np.isnan(data["rows"][1][1])


def test_table_artifact():
    """Test columns and row validation of result tables."""
    artifact = TableArtifact("t", "T", ("a", "b"), [(1, 2.0), (3, 4.0)])
    assert len(artifact) == 2
    np.testing.assert_array_equal(artifact.column("b"), [2.0, 4.0])
    with pytest.raises(ValueError):
        TableArtifact("t", "T", ("a", "b"), [(1,)])
