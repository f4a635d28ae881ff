# -*- coding: utf-8 -*-
#
# This file is part of nonlinear-sampling.
# Copyright (C) 2026 The nonlinear-sampling authors.
#
# nonlinear-sampling is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Version information for nonlinear-sampling.

This file is imported by ``nonlinear_sampling.__init__``,
and parsed by ``setup.cfg``.
"""

__version__ = "0.1.0"
