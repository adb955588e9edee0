# -*- coding: utf-8 -*-
"""
This class holds configuration objects, which can be thought of
as settings.py but dynamic and changing for whatever caller holds
them. Pass a config object to any analysis function, the sweep pool
or the command line runner, and it just works.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging

log = logging.getLogger(__name__)


class Configuration(object):
    def __init__(self):
        """
        Modify any of these numerical knobs. Every library operation
        takes `config=None` and falls back to a fresh Configuration.
        """
        # spectral bound: shifted power iteration, then inverse iteration
        self.spectral_tol = 1e-12  # relative width of the eigenvalue bracket
        self.spectral_max_iter = 100000
        self.spectral_power_steps = 2000  # before switching to inverse iteration
        self.spectral_shift_floor = 1e-10  # shift - s(A), A scaled to norm 1

        # dense Gaussian elimination
        self.pivot_rtol = 1e-14  # relative to the matrix max-norm
        self.solve_residual_tol = 1e-10  # relative to 1 + |b|

        # explicit Runge-Kutta integration
        self.ode_step = 1e-2
        self.ode_local_tol = 1e-8  # per step, scaled by max(1, |y|)
        self.ode_min_step = 1e-12

        # auxiliary system: relaxation then Newton
        self.relaxation_start = 1e-3  # start at this fraction of alpha
        self.relaxation_tol = 1e-6  # field max-norm handing over to Newton
        self.relaxation_t_max = 2000.0
        self.relaxation_max_ratio = 10.0  # relax at min(d, this), continue above
        self.continuation_factor = 10.0
        self.newton_tol = 1e-12
        self.newton_max_steps = 50
        self.aux_residual_tol = 1e-10
        self.box_slack = 1e-12
        self.denominator_floor = 1e-14

        # recovered equilibrium, scaled by max(1, N)
        self.equilibrium_residual_tol = 1e-9

        # threshold root finding
        self.threshold_rtol = 1e-6
        self.threshold_expansions = 60
        self.root_tol = 1e-13  # relative bracket width for mu_0 and h_j roots

        # J+/J- classification near d_S -> 0
        self.h_dead_band = 1e-10
        self.classify_dS_schedule = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
        self.classify_gap_rtol = 1e-4
        self.classify_decay_ratio = 0.5

        # full ODE simulation
        self.simulation_t_end = 500.0
        self.simulation_stride = 1.0
        self.simulation_converged_tol = 1e-8
        self.negative_slack = 1e-12

        # cross-check R0 against the next-generation matrix when beta >> 0
        self.cross_check = True
        self.cross_check_tol = 1e-8

        # sweeps
        self.number_threads = 4
        self.thread_timeout_seconds = 1

        self.verbose = False  # for debugging
