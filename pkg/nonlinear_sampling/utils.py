# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Registry lookups."""

from werkzeug.utils import import_string

from .config import NLSAMPLING_COMPANDING_FUNCTIONS, NLSAMPLING_EXPERIMENTS
from .errors import ConfigurationError


def _lookup(registry, value, kind, attribute="name"):
    """Find the registry entry whose ``attribute`` equals ``value``."""
    if not isinstance(value, str):
        raise ConfigurationError(
            "Type of value '{0}' is not supported for resolving.".format(value)
        )
    try:
        return next(entry for entry in registry if getattr(entry, attribute) == value)
    except StopIteration:
        raise ConfigurationError("{0} '{1}' is not configured.".format(kind, value))


def resolve_companding(value, registry=None, **kwargs):
    """Build the companding function registered under a tag.

    Keyword arguments are passed to the factory.

    :raises ConfigurationError: for an unknown tag.
    """
    entry = _lookup(
        NLSAMPLING_COMPANDING_FUNCTIONS if registry is None else registry,
        value,
        "Companding function",
    )
    return import_string(entry.factory)(**kwargs)


def resolve_experiment(value, registry=None, by="name"):
    """Resolve an experiment tag, or a CLI command with ``by="command"``.

    Returns the registry entry with its runner imported.

    :raises ConfigurationError: for an unknown experiment.
    """
    entry = _lookup(
        NLSAMPLING_EXPERIMENTS if registry is None else registry,
        value,
        "Experiment",
        by,
    )
    runner = import_string(entry.runner)
    return entry._replace(runner=runner)
