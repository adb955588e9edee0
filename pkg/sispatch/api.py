# -*- coding: utf-8 -*-
"""
Ignore the unused imports, this file's purpose is to make visible
anything which a user might need to import from sispatch. Every
function here takes a ScenarioConfig and returns what the matching
command line subcommand prints.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from . import settings
from .asymptotics import (classify_J, find_dI_star_star, h_functions,
                          limiting_S_profile, star_h1, star_regime,
                          symmetric_lower_bound, threshold_report)
from .configuration import Configuration
from .equilibrium import endemic_equilibrium
from .exceptions import DegenerateH, NumericalError, SubThreshold
from .mthreading import SweepPool
from .outputformatters import ResultTable, cells, vector_columns
from .patch_graph import perron_vector, star_perron_vector
from .reproduction import (dispersal_spectral_bound,
                           dispersal_spectral_limits, find_dI_star, r0,
                           r0_limits, risk_partition)
from .scenario import (ScenarioConfig, load_scenario, parse_scenario,
                       scenario_from_dict, star_example)
from .simulator import initial_state, simulate
from .utils import config_hash, extend_config, format_patches, make_grid

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidationReport(object):
    n: int
    alpha: np.ndarray
    H_minus: Tuple[int, ...]
    H_plus: Tuple[int, ...]
    ties: Tuple[int, ...]
    assumptions: Dict[str, bool]

    @property
    def ok(self):
        return all(self.assumptions[key] for key in ('A0', 'A1', 'A2'))

    def lines(self):
        out = ['n: %d' % self.n,
               'alpha: %s' % ' '.join('%.17g' % v for v in self.alpha),
               'H-: %s' % format_patches(self.H_minus),
               'H+: %s' % format_patches(self.H_plus)]
        if self.ties:
            out.append('beta = gamma: %s' % format_patches(self.ties))
        for key in sorted(self.assumptions):
            out.append('%s: %s' % (key, 'holds' if self.assumptions[key]
                                   else 'fails'))
        return out


def _config(config, **kwargs):
    config = config or Configuration()
    return extend_config(config, kwargs)


def provenance(scenario, subcommand, options=None):
    """Comment header of every table: tool version, subcommand and the
    hash of the scenario plus the options that shaped the table
    """
    digest = config_hash({'scenario': scenario.document,
                          'options': options or {}})
    return {'tool': settings.TOOL_NAME, 'subcommand': subcommand,
            'config_hash': digest}


def dispersal_values(scenario, grid=None, default=None,
                     parameter='dI'):
    """The values of a `parameter` sweep, d_I or d_S: an explicit
    (from, to, points, kind) grid, else the scenario's sweep block for
    it, else `default`, else the scenario's own value
    """
    if grid is not None:
        return make_grid(*grid)
    sweep = scenario.sweep_for(parameter)
    if sweep is not None:
        return sweep.values()
    if default is not None:
        return make_grid(*default)
    return np.array([getattr(scenario.params, parameter)])


def validate_report(scenario, config=None) -> ValidationReport:
    """Checks the model assumptions: A0 nonnegative rates and positive
    dispersal, A1 irreducible quasi-positive L, A2 a nonnegative start
    with positive total, A3 beta_j != gamma_j on every patch
    """
    config = _config(config)
    params = scenario.params
    alpha = perron_vector(scenario.connectivity, config=config).alpha
    partition = risk_partition(params)
    a0 = bool(np.all(params.beta >= 0) and np.all(params.gamma >= 0)
              and params.dS > 0 and params.dI > 0 and params.N > 0)
    a2 = True
    if scenario.initial is not None and scenario.initial.kind == 'explicit':
        start = np.array(scenario.initial.S + scenario.initial.I)
        a2 = bool(np.all(start >= 0) and start.sum() > 0)
    assumptions = {'A0': a0, 'A1': True, 'A2': a2, 'A3': partition.strict}
    if not partition.strict:
        log.warning('beta = gamma on patches %s, the asymptotic profiles '
                    'are undefined', format_patches(partition.ties))
    return ValidationReport(scenario.n, alpha, partition.H_minus,
                            partition.H_plus, partition.ties, assumptions)


def r0_table(scenario, grid=None, config=None, **kwargs) -> ResultTable:
    """R0 and s(F - V) = s(d_I L + diag(beta - gamma)) per d_I, followed
    by the rows for the limits d_I -> 0 and d_I -> infinity
    """
    config = _config(config, **kwargs)
    L, params = scenario.connectivity, scenario.params
    alpha = perron_vector(L, config=config).alpha
    values = dispersal_values(scenario, grid)
    log.info('R0 sweep over %d values of d_I', len(values))

    def row(dI):
        swept = params.with_dispersal(dI=float(dI))
        s = dispersal_spectral_bound(L, dI, params.growth,
                                     config=config).value
        return [float(dI), r0(L, swept, config), s]

    rows = SweepPool(config).map(row, values)
    limits = r0_limits(L, params, alpha, config)
    small, large = dispersal_spectral_limits(params.growth, alpha)
    rows.append([0.0, limits.limit_zero, small])
    rows.append([math.inf, limits.limit_infinity, large])
    options = {'grid': [float(v) for v in values]}
    return ResultTable(['dI', 'R0', 's_F_minus_V'], rows,
                       provenance(scenario, 'r0', options))


def _profile_row(L, params, alpha, partition, dI, dI_star, config):
    """h values, split and S* at one d_I, status one of ok, subthreshold,
    degenerate or failed
    """
    h = h_functions(L, params.beta, params.gamma, alpha, dI, partition,
                    config)
    empty = [None] * params.n
    if dI >= dI_star:
        return h, '', '', '', 'subthreshold', empty
    try:
        split = classify_J(L, params.beta, params.gamma, alpha, dI,
                           partition, 'auto', config)
    except DegenerateH as e:
        log.warning('%s', e)
        return h, '', '', '', 'degenerate', empty
    except NumericalError as e:
        log.warning('no J+/J- split at d_I = %g: %s', dI, e)
        return h, '', '', '', 'failed', empty
    S_star = limiting_S_profile(split, alpha, None, params.N)
    return (h, format_patches(split.J_plus), format_patches(split.J_minus),
            split.method, 'ok', cells(S_star))


def profile_table(scenario, grid=None, config=None, **kwargs) -> ResultTable:
    """Per d_I: h_j on H+, d_I*, d_I**, the J+/J- split and the limiting
    susceptible profile S* as d_S -> 0
    """
    config = _config(config, **kwargs)
    L, params = scenario.connectivity, scenario.params
    alpha = perron_vector(L, config=config).alpha
    partition = risk_partition(params).require_strict()
    dI_star = find_dI_star(L, params, alpha=alpha, config=config)
    dI_star_star = find_dI_star_star(L, params.beta, params.gamma, alpha,
                                     partition, dI_star, config)
    values = dispersal_values(scenario, grid, settings.PROFILE_GRID)
    log.info('profile sweep over %d values of d_I, d_I* = %g',
             len(values), dI_star)

    def row(dI):
        h, plus, minus, method, status, S_star = _profile_row(
            L, params, alpha, partition, float(dI), dI_star, config)
        return ([float(dI)] + [h[j] for j in partition.H_plus]
                + [dI_star, dI_star_star, plus, minus, method, status]
                + S_star)

    rows = SweepPool(config).map(row, values)
    h_columns = ['h_%d' % (j + 1) for j in partition.H_plus]
    S_columns = vector_columns('S_star', params.n)
    columns = (['dI'] + h_columns
               + ['dI_star', 'dI_star_star', 'J_plus', 'J_minus', 'method',
                  'status'] + S_columns)
    options = {'grid': [float(v) for v in values]}
    return ResultTable(columns, rows, provenance(scenario, 'profile', options),
                       nullable=['dI_star_star'] + S_columns)


def equilibrium_table(scenario, grid=None, config=None,
                      **kwargs) -> ResultTable:
    """The endemic equilibrium per d_S, over `grid` or the scenario's d_S
    sweep block, else one row at the scenario's d_S. d_I stays fixed.
    Raises SubThreshold carrying R0 when there is none.
    """
    config = _config(config, **kwargs)
    L, params = scenario.connectivity, scenario.params
    alpha = perron_vector(L, config=config).alpha
    values = dispersal_values(scenario, grid, parameter='dS')
    log.info('equilibrium over %d values of d_S at d_I = %g', len(values),
             params.dI)

    def row(dS):
        eq = endemic_equilibrium(L, params.with_dispersal(dS=float(dS)),
                                 alpha, config)
        return ([float(dS)] + cells(eq.S) + cells(eq.I)
                + [eq.kappa, eq.residual, eq.total])

    try:
        rows = SweepPool(config).map(row, values)
    except SubThreshold as e:
        if e.r0 is None:
            e.r0 = r0(L, params, config)
        raise
    n = params.n
    columns = (['dS'] + vector_columns('S', n) + vector_columns('I', n)
               + ['kappa', 'residual', 'total'])
    options = {'grid': [float(v) for v in values]}
    return ResultTable(columns, rows,
                       provenance(scenario, 'equilibrium', options))


def simulate_table(scenario, t_end=None, stride=None, initial=None,
                   config=None, **kwargs):
    """Integrates the full system and returns (table, trajectory). The
    start is `initial`, else the scenario's initial block, else a
    perturbed disease-free state.
    """
    config = _config(config, **kwargs)
    L, params = scenario.connectivity, scenario.params
    alpha = perron_vector(L, config=config).alpha
    spec = scenario.initial
    kind = initial or (spec.kind if spec is not None else 'dfe-perturbed')
    S = I = None
    if kind == 'explicit' and spec is not None and spec.kind == 'explicit':
        S, I = spec.S, spec.I
    start = initial_state(kind, alpha, params.N, S=S, I=I)
    trajectory = simulate(L, params, start, t_end=t_end, stride=stride,
                          config=config)

    n = params.n
    columns = (['t'] + vector_columns('S', n) + vector_columns('I', n)
               + ['total'])
    rows = [[float(t)] + cells(s) + cells(i) + [float(total)]
            for t, s, i, total in zip(trajectory.times, trajectory.S,
                                      trajectory.I, trajectory.totals)]
    options = {'t_end': t_end, 'stride': stride, 'initial': kind}
    table = ResultTable(columns, rows,
                        provenance(scenario, 'simulate', options))
    return table, trajectory


def star_example_bundle(config=None, r0_grid=None, profile_grid=None,
                        **kwargs) -> Tuple[List[str], Dict[str, ResultTable]]:
    """Runs every analysis on the built-in four patch star graph and
    returns (report lines, tables by name)
    """
    config = _config(config, **kwargs)
    scenario = star_example()
    L, params = scenario.connectivity, scenario.params
    a, b = scenario.star
    alpha = perron_vector(L, config=config).alpha
    closed = star_perron_vector(a, b)
    partition = risk_partition(params).require_strict()
    n = params.n
    tables = {}

    patches = [[j + 1, float(alpha[j]), float(closed[j])] for j in range(n)]
    tables['alpha'] = ResultTable(['patch', 'alpha', 'alpha_closed_form'],
                                  patches, provenance(scenario, 'alpha'))
    tables['r0'] = r0_table(scenario, r0_grid or settings.R0_GRID, config)
    tables['profile'] = profile_table(scenario,
                                      profile_grid or settings.PROFILE_GRID,
                                      config)

    thresholds = threshold_report(L, params, alpha, config)
    dI_star, dI_star_star = thresholds.dI_star, thresholds.dI_star_star
    regime = star_regime(alpha, params.beta, params.gamma, dI_star_star,
                         dI_star)
    tables['thresholds'] = ResultTable(
        ['dI_star', 'dI_star_star', 'symmetric_lower_bound', 'regime'],
        [[dI_star, dI_star_star, thresholds.symmetric_lower_bound,
          regime or '']],
        provenance(scenario, 'thresholds'),
        nullable=['dI_star_star', 'symmetric_lower_bound'])

    rows = []
    report = ['alpha: %s' % ' '.join('%.17g' % v for v in alpha),
              'd_I*: %.12g' % dI_star,
              'd_I**: %s' % ('none' if dI_star_star is None
                             else '%.12g' % dI_star_star),
              'regime: %s' % (regime or 'undetermined')]
    for dI in settings.STAR_CLASSIFY_DI:
        split = classify_J(L, params.beta, params.gamma, alpha, dI,
                           partition, 'auto', config)
        S_star = limiting_S_profile(split, alpha, None, params.N)
        rows.append([dI, star_h1(a, b, alpha, params.beta, params.gamma, dI),
                     format_patches(split.J_plus),
                     format_patches(split.J_minus), split.method]
                    + cells(S_star))
        report.append('d_I = %g: J+ = %s, J- = %s (%s)'
                      % (dI, format_patches(split.J_plus),
                         format_patches(split.J_minus), split.method))
    tables['classification'] = ResultTable(
        ['dI', 'h_1', 'J_plus', 'J_minus', 'method']
        + vector_columns('S_star', n), rows,
        provenance(scenario, 'classification'))

    tables['equilibrium'] = equilibrium_table(scenario, config=config)
    return report, tables
