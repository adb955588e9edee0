# -*- coding: utf-8 -*-
"""
SIS epidemic patch model analysis: the basic reproduction number and
its dispersal thresholds, the endemic equilibrium, limiting profiles
for slow movement and simulation of the full system.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

from .api import (equilibrium_table, profile_table, r0_table,
                  simulate_table, star_example_bundle, validate_report)
from .asymptotics import (alpha_star, asymptotic_profile, classify_J,
                          dI_to_zero_profiles, find_dI_star_star,
                          h_functions, h_limits, limiting_S_profile,
                          symmetric_lower_bound, threshold_report)
from .configuration import Configuration
from .configuration import Configuration as Config
from .equilibrium import (disease_free_equilibrium, endemic_equilibrium,
                          recover_equilibrium, solve_auxiliary,
                          solve_U_system)
from .exceptions import (NumericalError, PreconditionError,
                         SisPatchException, ValidationError)
from .mthreading import SweepPool
from .patch_graph import (ConnectivityMatrix, build_connectivity,
                          perron_vector, star_graph)
from .reproduction import (EpidemicParameters, find_dI_star, r0, r0_limits,
                           risk_partition)
from .scenario import ScenarioConfig, load_scenario, star_example
from .simulator import sis_field, simulate
from .version import __version__

# Set default logging handler to avoid "No handler found" warnings.
import logging

logging.getLogger(__name__).addHandler(logging.NullHandler())
