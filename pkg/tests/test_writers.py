# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Writer tests."""

import os

import numpy as np

from nonlinear_sampling.experiments import Plot, TableArtifact
from nonlinear_sampling.serializers.writers import (
    format_cell,
    write_artifact,
    write_csv,
    write_full_csv,
    write_svg,
)


def make_artifact(plots=()):
    """Small table with an integer and a float column."""
    return TableArtifact(
        "demo",
        "Demo table",
        ("iteration", "error"),
        [(1, 0.5), (2, 1.0 / 3.0), (3, np.nan)],
        plots=plots,
    )


def test_format_cell():
    """Test cell formatting."""
    assert format_cell(7, ".4f") == "7"
    assert format_cell(0.123456, ".4f") == "0.1235"
    assert format_cell(float("nan"), ".4f") == "nan"


def test_write_csv(output_dir):
    """Test the rounded and the full precision tables."""
    artifact = make_artifact()
    with open(write_csv(artifact, output_dir)) as stream:
        lines = stream.read().splitlines()
    assert lines == [
        "Demo table",
        "iteration,error",
        "1,0.5000",
        "2,0.3333",
        "3,nan",
    ]
    with open(write_full_csv(artifact, output_dir)) as stream:
        lines = stream.read().splitlines()
    assert lines[3] == "2,0.33333333333333331"


def test_write_svg(output_dir):
    """Test that figures are only written for declared plots."""
    assert write_svg(make_artifact(), output_dir) is None
    artifact = make_artifact([Plot("iteration", ("error",), False)])
    first = write_svg(artifact, output_dir)
    with open(first, "rb") as stream:
        content = stream.read()
    assert content.startswith(b"<?xml")
    assert write_svg(artifact, output_dir) == first
    with open(first, "rb") as stream:
        assert stream.read() == content


def test_write_artifact_attachments(output_dir):
    """Test that attachments are written next to the table."""
    attachment = TableArtifact("extra", "Extra", ("a",), [(1,)])
    artifact = TableArtifact("main", "Main", ("a",), [(2,)], attachments=[attachment])
    target = os.path.join(output_dir, "nested")
    paths = write_artifact(artifact, target)
    names = sorted(os.path.basename(path) for path in paths)
    assert names == ["extra.csv", "extra.full.csv", "main.csv", "main.full.csv"]
