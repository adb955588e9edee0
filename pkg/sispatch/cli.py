# -*- coding: utf-8 -*-
"""
Command line runner. One subcommand per analysis:

    sispatch validate --config scenario.json
    sispatch r0 --config scenario.json --grid 1e-3:1e3:50:geometric
    sispatch profile --config scenario.json --out profile.csv
    sispatch equilibrium --config scenario.json
    sispatch simulate --config scenario.json --t-end 200 --initial uniform
    sispatch star-example --out bundle/

Tables go to --out (stdout by default) as CSV; diagnostics go to stderr.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import argparse
import logging
import os
import sys

from . import api, settings
from .configuration import Configuration
from .exceptions import (InvalidParameters, NumericalError,
                         PreconditionError, SubThreshold, ValidationError)
from .scenario import load_scenario
from .simulator import INITIAL_KINDS
from .utils import extend_config, parse_grid

log = logging.getLogger(__name__)

# the Configuration knob --tol sets for each subcommand
TOL_TARGETS = {
    'r0': 'root_tol',
    'profile': 'threshold_rtol',
    'equilibrium': 'aux_residual_tol',
    'simulate': 'simulation_converged_tol',
    'star-example': 'threshold_rtol',
}


def grid_argument(text):
    try:
        return parse_grid(text)
    except InvalidParameters as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser():
    parser = argparse.ArgumentParser(
        prog='sispatch',
        description='SIS patch model analysis: R0, thresholds, endemic '
                    'equilibrium, limiting profiles and simulation.')
    parser.add_argument('--version', action='version',
                        version=settings.TOOL_NAME)
    sub = parser.add_subparsers(dest='command', required=True)

    def add(name, help, config=True):
        p = sub.add_parser(name, help=help)
        if config:
            p.add_argument('--config', required=True, metavar='PATH',
                           help='scenario JSON document')
        p.add_argument('--out', default='-', metavar='PATH',
                       help='output file, stdout by default')
        p.add_argument('--threads', type=int, default=None,
                       help='sweep worker threads')
        p.add_argument('--tol', type=float, default=None,
                       help='main tolerance of the subcommand')
        p.add_argument('--verbose', action='store_true',
                       help='debug logging to stderr')
        return p

    add('validate', 'check the model assumptions')
    add('r0', 'R0 over a d_I grid').add_argument(
        '--grid', type=grid_argument, default=None,
        metavar='FROM:TO:POINTS[:KIND]', help='d_I grid')
    add('profile', 'h_j, thresholds and limiting profiles').add_argument(
        '--grid', type=grid_argument, default=None,
        metavar='FROM:TO:POINTS[:KIND]', help='d_I grid')
    add('equilibrium', 'the endemic equilibrium').add_argument(
        '--grid', type=grid_argument, default=None,
        metavar='FROM:TO:POINTS[:KIND]', help='d_S grid')
    p = add('simulate', 'integrate the full system')
    p.add_argument('--t-end', type=float, default=None)
    p.add_argument('--stride', type=float, default=None)
    p.add_argument('--initial', choices=INITIAL_KINDS, default=None)
    add('star-example', 'full analysis of the built-in star graph',
        config=False)
    return parser


def make_config(args):
    config = Configuration()
    extend_config(config, {'number_threads': args.threads,
                           'verbose': args.verbose or None})
    if args.tol is not None:
        setattr(config, TOL_TARGETS.get(args.command, 'threshold_rtol'),
                args.tol)
    return config


def cmd_validate(args, config):
    report = api.validate_report(load_scenario(args.config), config)
    _emit_text(report.lines(), args.out)
    return settings.EXIT_OK if report.ok else settings.EXIT_VALIDATION


def cmd_r0(args, config):
    table = api.r0_table(load_scenario(args.config), args.grid, config)
    table.write(args.out)
    return settings.EXIT_OK


def cmd_profile(args, config):
    table = api.profile_table(load_scenario(args.config), args.grid, config)
    table.write(args.out)
    return settings.EXIT_OK


def cmd_equilibrium(args, config):
    try:
        table = api.equilibrium_table(load_scenario(args.config), args.grid,
                                      config)
    except SubThreshold as e:
        sys.stderr.write('no endemic equilibrium: R0 = %.12g <= 1\n' % e.r0)
        return settings.EXIT_PRECONDITION
    table.write(args.out)
    return settings.EXIT_OK


def cmd_simulate(args, config):
    table, trajectory = api.simulate_table(
        load_scenario(args.config), args.t_end, args.stride, args.initial,
        config)
    table.write(args.out)
    state = 'converged' if trajectory.converged else 'not converged'
    sys.stderr.write('%s at t = %g, field max-norm %.3g, total %.17g\n'
                     % (state, trajectory.terminal.t, trajectory.field_norm,
                        trajectory.terminal.total))
    return settings.EXIT_OK


def cmd_star_example(args, config):
    report, tables = api.star_example_bundle(config)
    if args.out in (None, '-'):
        lines = ['%s %s' % (settings.CSV_COMMENT, line) for line in report]
        sys.stdout.write('\n'.join(lines) + '\n')
        for name, table in tables.items():
            sys.stdout.write('\n%s table: %s\n' % (settings.CSV_COMMENT, name))
            table.write(None)
        return settings.EXIT_OK
    os.makedirs(args.out, exist_ok=True)
    for name, table in tables.items():
        table.write(os.path.join(args.out, '%s.csv' % name))
    _emit_text(report, os.path.join(args.out, 'report.txt'))
    _emit_text(report, '-')
    return settings.EXIT_OK


COMMANDS = {
    'validate': cmd_validate,
    'r0': cmd_r0,
    'profile': cmd_profile,
    'equilibrium': cmd_equilibrium,
    'simulate': cmd_simulate,
    'star-example': cmd_star_example,
}


def _emit_text(lines, path):
    text = '\n'.join(lines) + '\n'
    if path in (None, '-'):
        sys.stdout.write(text)
    else:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = make_config(args)
    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)
    try:
        return COMMANDS[args.command](args, config)
    except ValidationError as e:
        sys.stderr.write('invalid input: %s\n' % e)
        return settings.EXIT_VALIDATION
    except NumericalError as e:
        sys.stderr.write('numerical failure: %s\n' % e)
        return settings.EXIT_NUMERICAL
    except PreconditionError as e:
        sys.stderr.write('precondition failed: %s\n' % e)
        return settings.EXIT_PRECONDITION
    except OSError as e:
        sys.stderr.write('%s\n' % e)
        return settings.EXIT_VALIDATION


if __name__ == '__main__':
    sys.exit(main())
