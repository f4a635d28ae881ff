# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""CSV and SVG writers for result tables."""

import csv
import logging
import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from ..config import (  # noqa: E402
    NLSAMPLING_CSV_DECIMALS,
    NLSAMPLING_CSV_SIGNIFICANT_DIGITS,
    NLSAMPLING_SVG_HASHSALT,
)
from .schemas import TableArtifactSchema  # noqa: E402

logger = logging.getLogger("nonlinear-sampling")


def format_cell(value, spec):
    """Format one table cell; integers are written as they are."""
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return "nan"
    return format(value, spec)


def write_csv(artifact, directory, suffix=".csv", spec=None):
    """Write ``<name><suffix>`` with a title row, a header row and the rows.

    :returns: path of the written file.
    """
    spec = spec or ".{0}f".format(NLSAMPLING_CSV_DECIMALS)
    data = TableArtifactSchema().dump(artifact)
    path = os.path.join(directory, data["name"] + suffix)
    with open(path, "w", newline="") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow([data["title"]])
        writer.writerow(data["header"])
        for row in data["rows"]:
            writer.writerow([format_cell(value, spec) for value in row])
    return path


def write_full_csv(artifact, directory):
    """Write ``<name>.full.csv`` at full precision."""
    return write_csv(
        artifact,
        directory,
        suffix=".full.csv",
        spec=".{0}g".format(NLSAMPLING_CSV_SIGNIFICANT_DIGITS),
    )


def write_svg(artifact, directory):
    """Plot the declared columns of an artifact into ``<name>.svg``.

    The figure only depends on the table data. Returns ``None`` when the
    artifact declares no plots.
    """
    if not artifact.plots:
        return None
    path = os.path.join(directory, artifact.name + ".svg")
    with matplotlib.rc_context({"svg.hashsalt": NLSAMPLING_SVG_HASHSALT}):
        count = len(artifact.plots)
        figure, axes = plt.subplots(count, 1, figsize=(6.4, 3.2 * count), squeeze=False)
        for plot, ax in zip(artifact.plots, axes[:, 0]):
            x = artifact.column(plot.x)
            for label in plot.ys:
                ax.plot(x, artifact.column(label), label=label)
            if plot.log:
                ax.set_yscale("log")
            ax.set_xlabel(plot.x)
            ax.legend()
        axes[0, 0].set_title(artifact.title)
        figure.tight_layout()
        figure.savefig(path, format="svg", metadata={"Date": None})
        plt.close(figure)
    return path


def write_artifact(artifact, directory):
    """Write the rounded CSV, full CSV and SVG of an artifact and its attachments.

    :returns: list of written paths.
    """
    if not os.path.isdir(directory):
        os.makedirs(directory)
    paths = [write_csv(artifact, directory), write_full_csv(artifact, directory)]
    figure = write_svg(artifact, directory)
    if figure:
        paths.append(figure)
    for attachment in artifact.attachments:
        paths.extend(write_artifact(attachment, directory))
    logger.info("Wrote %s.", ", ".join(paths))
    return paths
