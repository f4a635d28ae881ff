# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Command line tests."""

import json
import os

from click.testing import CliRunner

from nonlinear_sampling.cli import cli
from nonlinear_sampling.errors import OutOfRegimeError


def read(path):
    """File contents as bytes."""
    with open(path, "rb") as stream:
        return stream.read()


def test_commands():
    """Test that every experiment has a subcommand."""
    result = CliRunner().invoke(cli, ["--help"])
    assert result.exit_code == 0
    for command in ("table1", "table2", "table3", "table4", "noise", "blind"):
        assert command in result.output


def test_table3_written(output_dir):
    """Test the written artifacts of a short identification run."""
    result = CliRunner().invoke(cli, ["table3", "--max-iter", "5", "--out", output_dir])
    assert result.exit_code == 0, result.output
    for name in ("table3.csv", "table3.full.csv", "table3.svg"):
        assert os.path.join(output_dir, name) in result.output
        assert os.path.isfile(os.path.join(output_dir, name))
    lines = read(os.path.join(output_dir, "table3.csv")).decode().splitlines()
    assert lines[1] == "iteration,amplitude_error,position_error,data_error"
    assert len(lines) == 4
    assert lines[2].startswith("1,")
    assert lines[3].startswith("5,0.")
    signal = read(os.path.join(output_dir, "table3_signal.csv")).decode().splitlines()
    assert signal[1] == "t,original,approximation_error,recovery_error"
    assert len(signal) == 2003
    assert os.path.isfile(os.path.join(output_dir, "table3_signal.svg"))


def test_deterministic_output(output_dir):
    """Test that the same seed writes identical tables."""
    runner = CliRunner()
    for name in ("first", "second"):
        result = runner.invoke(
            cli,
            [
                "table3",
                "--seed",
                "3",
                "--max-iter",
                "5",
                "--out",
                os.path.join(output_dir, name),
            ],
        )
        assert result.exit_code == 0, result.output
    for name in ("table3.csv", "table3.full.csv"):
        assert read(os.path.join(output_dir, "first", name)) == read(
            os.path.join(output_dir, "second", name)
        )


def test_invalid_options(output_dir):
    """Test that invalid values are reported as usage errors."""
    result = CliRunner().invoke(cli, ["table1", "--alpha", "-1", "--out", output_dir])
    assert result.exit_code == 2
    assert "alpha" in result.output


def test_config_file(output_dir):
    """Test configs read from a file."""
    path = os.path.join(output_dir, "config.json")
    with open(path, "w") as stream:
        json.dump({"experiment": "fri_table4"}, stream)
    result = CliRunner().invoke(cli, ["table3", "--config", path])
    assert result.exit_code == 2

    with open(path, "w") as stream:
        json.dump({"max_iter": 1, "output": output_dir}, stream)
    result = CliRunner().invoke(cli, ["table3", "--config", path])
    assert result.exit_code == 0, result.output
    lines = read(os.path.join(output_dir, "table3.csv")).decode().splitlines()
    assert len(lines) == 3


def test_failure_reported(mocker, output_dir):
    """Test that library errors end the command with a message."""
    mocker.patch(
        "nonlinear_sampling.experiments.run_blind_demo",
        side_effect=OutOfRegimeError("shift reached 1/2"),
    )
    result = CliRunner().invoke(cli, ["blind", "--out", output_dir])
    assert result.exit_code == 1
    assert "blind_demo failed: shift reached 1/2" in result.output


def test_solver_option(output_dir):
    """Test the spline reconstruction solver choice."""
    runner = CliRunner()
    result = runner.invoke(cli, ["table1", "--solver", "newton", "--out", output_dir])
    assert result.exit_code == 2
    result = runner.invoke(
        cli,
        ["table1", "--solver", "hybrid", "--max-iter", "10", "--out", output_dir],
    )
    assert result.exit_code == 0, result.output
    lines = read(os.path.join(output_dir, "table1.csv")).decode().splitlines()
    assert lines[2].startswith("5,")
