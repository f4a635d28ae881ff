# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Command line interface running the registered experiments."""

import json
import logging

import click
from marshmallow import ValidationError

from .config import NLSAMPLING_COMPANDING_SOLVERS, NLSAMPLING_EXPERIMENTS
from .errors import NonlinearSamplingError
from .serializers.schemas import ExperimentConfigSchema
from .serializers.writers import write_artifact
from .utils import resolve_experiment

logger = logging.getLogger("nonlinear-sampling")


@click.group()
@click.option("--verbose", "-v", count=True, help="Increase logging output.")
def cli(verbose):
    """Reproduce the nonlinear sampling experiments."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def load_config(tag, path=None, **overrides):
    """Merge a JSON config file with command line overrides.

    Overrides set to ``None`` are ignored.

    :raises click.BadParameter: when the config does not validate.
    """
    data = {}
    if path is not None:
        with open(path) as stream:
            data = json.load(stream)
        if not isinstance(data, dict):
            raise click.BadParameter("Config file must hold a JSON object.")
    if data.setdefault("experiment", tag) != tag:
        raise click.BadParameter(
            "Config file is for experiment {0}.".format(data["experiment"])
        )
    data.update((key, value) for key, value in overrides.items() if value is not None)
    try:
        return ExperimentConfigSchema().load(data)
    except ValidationError as error:
        raise click.BadParameter(json.dumps(error.messages, sort_keys=True))


def make_command(entry):
    """Build the subcommand of a registered experiment."""

    @click.option("--seed", type=int, default=None, help="Random seed.")
    @click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="JSON config file.",
    )
    @click.option("--out", type=click.Path(file_okay=False), default=None)
    @click.option("--alpha", type=float, default=None, help="Relaxation factor.")
    @click.option("--noise-level", type=float, default=None, help="Noise level.")
    @click.option("--max-iter", type=int, default=None, help="Iteration cap.")
    @click.option(
        "--solver",
        type=click.Choice(NLSAMPLING_COMPANDING_SOLVERS),
        default=None,
        help="Spline reconstruction solver.",
    )
    def command(seed, config_path, out, alpha, noise_level, max_iter, solver):
        config = load_config(
            entry.name,
            config_path,
            seed=seed,
            alpha=alpha,
            noise_level=noise_level,
            max_iter=max_iter,
            solver=solver,
        )
        runner = resolve_experiment(entry.name).runner
        logger.info("Running %s with seed %d.", entry.name, config.seed)
        try:
            artifact = runner(config)
        except NonlinearSamplingError as error:
            raise click.ClickException(
                "{0} failed: {1} (config {2})".format(
                    entry.name, error, dict(config._asdict())
                )
            )
        for path in write_artifact(artifact, out or config.output or "."):
            click.echo(path)

    command.__doc__ = entry.label + "."
    return click.command(entry.command)(command)


for _entry in NLSAMPLING_EXPERIMENTS:
    cli.add_command(make_command(_entry))
