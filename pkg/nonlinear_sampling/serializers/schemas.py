# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Marshmallow schemas for experiment configs and result tables."""

from marshmallow import (
    RAISE,
    Schema,
    ValidationError,
    fields,
    post_load,
    validate,
    validates_schema,
)

from ..config import (
    NLSAMPLING_COMPANDING_FUNCTIONS,
    NLSAMPLING_COMPANDING_SOLVERS,
    NLSAMPLING_DEFAULT_SEED,
    NLSAMPLING_EXPERIMENTS,
    NLSAMPLING_SWITCH_RATIO,
)
from ..experiments import ExperimentConfig


class ExperimentConfigSchema(Schema):
    """Flat experiment configuration; unknown keys are rejected."""

    class Meta:
        """Reject unknown fields."""

        unknown = RAISE

    experiment = fields.String(
        required=True,
        validate=validate.OneOf([entry.name for entry in NLSAMPLING_EXPERIMENTS]),
    )
    seed = fields.Integer(
        load_default=NLSAMPLING_DEFAULT_SEED,
        validate=validate.Range(min=0, max=2**64 - 1),
    )
    companding = fields.String(
        load_default="sine",
        validate=validate.OneOf(
            [entry.name for entry in NLSAMPLING_COMPANDING_FUNCTIONS]
        ),
    )
    alpha = fields.Float(
        load_default=None,
        allow_none=True,
        validate=validate.Range(min=0.0, min_inclusive=False),
    )
    noise_level = fields.Float(
        load_default=None, allow_none=True, validate=validate.Range(min=0.0)
    )
    max_iter = fields.Integer(
        load_default=None, allow_none=True, validate=validate.Range(min=1)
    )
    solver = fields.String(
        load_default=None,
        allow_none=True,
        validate=validate.OneOf(NLSAMPLING_COMPANDING_SOLVERS),
    )
    switch_ratio = fields.Float(
        load_default=NLSAMPLING_SWITCH_RATIO,
        validate=validate.Range(min=0.0, max=1.0, min_inclusive=False),
    )
    knot_count = fields.Integer(load_default=40, validate=validate.Range(min=4))
    knot_gap_min = fields.Float(load_default=0.05)
    knot_gap_max = fields.Float(load_default=0.15)
    interval_start = fields.Float(load_default=-2.0)
    interval_end = fields.Float(load_default=2.0)
    sampler_count = fields.Integer(load_default=80, validate=validate.Range(min=1))
    sampler_height = fields.Float(
        load_default=10.0, validate=validate.Range(min=0.0, min_inclusive=False)
    )
    source_count = fields.Integer(load_default=20, validate=validate.Range(min=1))
    source_gap_min = fields.Float(load_default=0.5)
    source_gap_max = fields.Float(load_default=1.5)
    window_end = fields.Float(load_default=20.0)
    output = fields.String(load_default=None, allow_none=True)

    @validates_schema
    def validate_ranges(self, data, **kwargs):
        """Check that gap bounds and intervals are ordered."""
        for low, high in (
            ("knot_gap_min", "knot_gap_max"),
            ("source_gap_min", "source_gap_max"),
            ("interval_start", "interval_end"),
        ):
            if low in data and high in data and not data[low] < data[high]:
                raise ValidationError("Must be smaller than {0}.".format(high), low)
        if data.get("knot_gap_min", 1.0) <= 0 or data.get("source_gap_min", 1.0) <= 0:
            raise ValidationError("Gaps must be positive.")

    @post_load
    def make_config(self, data, **kwargs):
        """Return the loaded data as an :class:`ExperimentConfig`."""
        return ExperimentConfig(**data)


class TableArtifactSchema(Schema):
    """Result table with plain Python values."""

    name = fields.String(required=True)
    title = fields.String(required=True)
    header = fields.List(fields.String(), required=True)
    rows = fields.Method("dump_rows")

    def dump_rows(self, obj):
        """Dump rows with integers kept and other numbers as floats."""
        return [
            [int(value) if _is_integer(value) else float(value) for value in row]
            for row in obj.rows
        ]


def _is_integer(value):
    """Whether a table cell holds an integer."""
    if isinstance(value, int):
        return True
    return hasattr(value, "dtype") and value.dtype.kind in "iu"
