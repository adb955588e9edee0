# -*- coding: utf-8 -*-
"""
Unlike configuration.py, this file is meant for static, entire project
encompassing settings, like exit codes, the CSV dialect and the
built-in star graph scenario.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging

from .version import __version__

log = logging.getLogger(__name__)

TOOL_NAME = 'sispatch/%s' % __version__

# Exit codes of the command line runner
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_PRECONDITION = 4

# CSV dialect: 17 significant digits round-trip a float64 exactly
CSV_FLOAT_FORMAT = '%.17g'
CSV_SEPARATOR = ','
CSV_LINE_TERMINATOR = '\n'
CSV_NA_REP = 'nan'
CSV_COMMENT = '#'

# Built-in four patch star graph: hub 1, spokes 2..4
STAR_A = (1.0, 2.0, 3.0)
STAR_B = (1.0, 1.0, 1.0)
STAR_BETA = (3.0, 4.0, 1.0, 1.0)
STAR_GAMMA = (1.0, 1.0, 2.0, 7.0)
STAR_N = 100.0
STAR_DS = 1.0
STAR_DI = 1.0
STAR_CLASSIFY_DI = (0.1, 2.0)

# Default dispersal grids, (from, to, points, kind)
R0_GRID = (1e-3, 1e3, 50, 'geometric')
PROFILE_GRID = (1e-2, 1e1, 40, 'geometric')
