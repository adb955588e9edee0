# -*- coding: utf-8 -*-
"""
Holds misc. utility methods which prove to be
useful throughout this library.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import hashlib
import json
import logging
import math

import numpy as np

from .exceptions import InvalidParameters

log = logging.getLogger(__name__)


def extend_config(config, config_items):
    """
    We are handling config value setting like this for a cleaner api.
    Users just need to pass in a named param and we can dynamically
    generate a config object for it. Unknown keys and None are ignored.
    """
    for key, val in list(config_items.items()):
        if val is not None and hasattr(config, key):
            setattr(config, key, val)

    return config


def canonical_json_bytes(obj):
    """Returns a byte encoding of `obj` that does not depend on key order
    or whitespace
    """
    return json.dumps(obj, sort_keys=True, separators=(',', ':'),
                      ensure_ascii=True, allow_nan=False).encode('utf-8')


def normalize_numbers(obj):
    """Returns a copy of a decoded json document with every integer made a
    float, so 1 and 1.0 describe the same scenario
    """
    if isinstance(obj, dict):
        return {key: normalize_numbers(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize_numbers(value) for value in obj]
    if isinstance(obj, int) and not isinstance(obj, bool):
        return float(obj)
    return obj


def config_hash(obj):
    """Returns the sha256 hex digest of the canonical json encoding
    """
    return hashlib.sha256(canonical_json_bytes(obj)).hexdigest()


def positive_part(x):
    """(x)+ = max(x, 0), elementwise
    """
    return np.maximum(np.asarray(x, dtype=float), 0.0)


def as_vector(values, name, n=None):
    """Returns `values` as a finite float vector, optionally of length n
    """
    try:
        v = np.array(values, dtype=float).reshape(-1)
    except (TypeError, ValueError):
        raise InvalidParameters('%s must be a vector of numbers' % name)
    if n is not None and v.size != n:
        raise InvalidParameters('%s has %d entries, expected %d'
                                % (name, v.size, n))
    if not np.all(np.isfinite(v)):
        raise InvalidParameters('%s has non-finite entries' % name)
    return v


def rate_ratios(beta, gamma):
    """beta_j / gamma_j with x/0 = inf for x > 0 and 0/0 = 0
    """
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    out = np.zeros_like(beta)
    pos = gamma > 0
    out[pos] = beta[pos] / gamma[pos]
    out[~pos & (beta > 0)] = math.inf
    return out


def make_grid(start, stop, points, kind='geometric'):
    """Returns a float grid including both ends
    """
    points = int(points)
    if points < 1:
        raise InvalidParameters('grid needs at least one point')
    if points == 1:
        return np.array([float(start)])
    if kind == 'geometric':
        if start <= 0 or stop <= 0:
            raise InvalidParameters('geometric grid needs positive ends')
        return np.geomspace(start, stop, points)
    if kind == 'linear':
        return np.linspace(start, stop, points)
    raise InvalidParameters('unknown grid kind %r' % kind)


def parse_grid(text):
    """Parses "from:to:points:geometric|linear" into a grid tuple
    """
    parts = text.split(':')
    if len(parts) not in (3, 4):
        raise InvalidParameters(
            'grid must look like from:to:points[:geometric|linear], got %r'
            % text)
    kind = parts[3] if len(parts) == 4 else 'geometric'
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InvalidParameters('bad number in grid %r' % text)
    if kind not in ('geometric', 'linear'):
        raise InvalidParameters('unknown grid kind %r' % kind)
    return start, stop, points, kind


def one_based(indices):
    """Patch labels as shown to people
    """
    return [int(j) + 1 for j in indices]


def format_patches(indices):
    return '{%s}' % ','.join(str(j) for j in one_based(sorted(indices)))
