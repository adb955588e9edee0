# -*- coding: utf-8 -*-
"""
Scenario documents: one JSON file describes one patch system.

    {
      "connectivity": {"matrix": [[0, 1], [1, 0]]}
                   or {"star": {"a": [1, 2, 3], "b": [1, 1, 1]}},
      "beta": [...], "gamma": [...],
      "dS": 1.0, "dI": 1.0, "N": 100.0,
      "sweep": {"parameter": "dI", "grid": "geometric",
                "from": 0.001, "to": 1000.0, "points": 50},
      "initial": {"kind": "explicit", "S": [...], "I": [...]}
    }

"sweep" (a block or a list of blocks) and "initial" are optional.
Matrix entries are movement rates L[j][k] from patch k into patch j;
the diagonal is ignored.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import json
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import settings
from .exceptions import InvalidParameters, ScenarioError
from .patch_graph import ConnectivityMatrix, build_connectivity, star_graph
from .reproduction import EpidemicParameters
from .simulator import INITIAL_KINDS
from .utils import config_hash, make_grid, normalize_numbers

log = logging.getLogger(__name__)

SWEEP_PARAMETERS = ('dS', 'dI')
GRID_KINDS = ('geometric', 'linear')
KNOWN_KEYS = ('connectivity', 'beta', 'gamma', 'dS', 'dI', 'N', 'sweep',
              'initial')


@dataclass(frozen=True)
class SweepSpec(object):
    parameter: str
    grid: str
    start: float
    stop: float
    points: int

    def values(self):
        return make_grid(self.start, self.stop, self.points, self.grid)


@dataclass(frozen=True)
class InitialSpec(object):
    kind: str
    S: Optional[Tuple[float, ...]] = None
    I: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class ScenarioConfig(object):
    connectivity: ConnectivityMatrix
    params: EpidemicParameters
    sweeps: Tuple[SweepSpec, ...]
    initial: Optional[InitialSpec]
    document: dict
    star: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]] = None

    @property
    def n(self):
        return self.connectivity.n

    @property
    def digest(self):
        return config_hash(self.document)

    def sweep_for(self, parameter):
        for sweep in self.sweeps:
            if sweep.parameter == parameter:
                return sweep
        return None


def _number(doc, key, path, positive=False):
    if key not in doc:
        raise ScenarioError('missing required field', path)
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError('expected a number, got %r' % (value,), path)
    value = float(value)
    if not math.isfinite(value):
        raise ScenarioError('number must be finite', path)
    if positive and value <= 0:
        raise ScenarioError('must be positive, got %g' % value, path)
    return value


def _vector(doc, key, path, n=None):
    if key not in doc:
        raise ScenarioError('missing required field', path)
    value = doc[key]
    if not isinstance(value, list) or not value:
        raise ScenarioError('expected a nonempty array of numbers', path)
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ScenarioError('expected a number, got %r' % (item,),
                                '%s[%d]' % (path, i))
    if n is not None and len(value) != n:
        raise ScenarioError('has %d entries, expected %d'
                            % (len(value), n), path)
    return [float(v) for v in value]


def _connectivity(doc):
    block = doc.get('connectivity')
    if not isinstance(block, dict):
        raise ScenarioError('expected an object with "matrix" or "star"',
                            'connectivity')
    if ('matrix' in block) == ('star' in block):
        raise ScenarioError('give exactly one of "matrix" and "star"',
                            'connectivity')
    if 'star' in block:
        star = block['star']
        if not isinstance(star, dict):
            raise ScenarioError('expected an object with "a" and "b"',
                                'connectivity.star')
        a = _vector(star, 'a', 'connectivity.star.a')
        b = _vector(star, 'b', 'connectivity.star.b', len(a))
        return star_graph(a, b), (tuple(a), tuple(b))

    rows = block['matrix']
    if not isinstance(rows, list) or len(rows) < 2:
        raise ScenarioError('expected a square array of at least two rows',
                            'connectivity.matrix')
    n = len(rows)
    raw = []
    for j, row in enumerate(rows):
        path = 'connectivity.matrix[%d]' % j
        if not isinstance(row, list):
            raise ScenarioError('expected an array', path)
        raw.append(_vector({'row': row}, 'row', path, n))
    return build_connectivity(np.array(raw)), None


def _sweeps(doc):
    if 'sweep' not in doc:
        return ()
    blocks = doc['sweep']
    blocks = blocks if isinstance(blocks, list) else [blocks]
    out = []
    for i, block in enumerate(blocks):
        path = 'sweep' if not isinstance(doc['sweep'], list) else \
            'sweep[%d]' % i
        if not isinstance(block, dict):
            raise ScenarioError('expected an object', path)
        parameter = block.get('parameter')
        if parameter not in SWEEP_PARAMETERS:
            raise ScenarioError('must be one of %s'
                                % ', '.join(SWEEP_PARAMETERS),
                                path + '.parameter')
        grid = block.get('grid', 'geometric')
        if grid not in GRID_KINDS:
            raise ScenarioError('must be one of %s' % ', '.join(GRID_KINDS),
                                path + '.grid')
        start = _number(block, 'from', path + '.from', positive=True)
        stop = _number(block, 'to', path + '.to', positive=True)
        points = block.get('points')
        if isinstance(points, bool) or not isinstance(points, int) \
                or points < 1:
            raise ScenarioError('expected a positive integer',
                                path + '.points')
        out.append(SweepSpec(parameter, grid, start, stop, points))
    return tuple(out)


def _initial(doc, n):
    if 'initial' not in doc:
        return None
    block = doc['initial']
    if not isinstance(block, dict):
        raise ScenarioError('expected an object', 'initial')
    kind = block.get('kind')
    if kind not in INITIAL_KINDS:
        raise ScenarioError('must be one of %s' % ', '.join(INITIAL_KINDS),
                            'initial.kind')
    if kind != 'explicit':
        return InitialSpec(kind)
    S = _vector(block, 'S', 'initial.S', n)
    I = _vector(block, 'I', 'initial.I', n)
    return InitialSpec(kind, tuple(S), tuple(I))


def scenario_from_dict(doc) -> ScenarioConfig:
    """Validates a decoded scenario document and builds the model objects
    """
    if not isinstance(doc, dict):
        raise ScenarioError('top level must be an object', 'document')
    for key in doc:
        if key not in KNOWN_KEYS:
            log.warning('ignoring unknown scenario field %r', key)
    connectivity, star = _connectivity(doc)
    n = connectivity.n
    beta = _vector(doc, 'beta', 'beta', n)
    gamma = _vector(doc, 'gamma', 'gamma', n)
    values = {key: _number(doc, key, key, positive=True)
              for key in ('dS', 'dI', 'N')}
    try:
        params = EpidemicParameters(beta, gamma, **values)
    except InvalidParameters as e:
        raise ScenarioError(str(e), 'parameters')
    return ScenarioConfig(connectivity, params, _sweeps(doc),
                          _initial(doc, n), normalize_numbers(doc), star)


def load_scenario(path) -> ScenarioConfig:
    """Reads and validates the scenario document at `path`
    """
    try:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ScenarioError('can not read scenario: %s' % e.strerror, path)
    return parse_scenario(text)


def parse_scenario(text) -> ScenarioConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(e.msg, 'line %d, column %d' % (e.lineno, e.colno))
    return scenario_from_dict(doc)


def star_example_document():
    """The built-in four patch star graph scenario
    """
    return {
        'connectivity': {'star': {'a': list(settings.STAR_A),
                                  'b': list(settings.STAR_B)}},
        'beta': list(settings.STAR_BETA),
        'gamma': list(settings.STAR_GAMMA),
        'dS': settings.STAR_DS,
        'dI': settings.STAR_DI,
        'N': settings.STAR_N,
    }


def star_example() -> ScenarioConfig:
    return scenario_from_dict(star_example_document())
