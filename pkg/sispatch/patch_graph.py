# -*- coding: utf-8 -*-
"""
The connectivity matrix L of the patch model, its Perron vector and
the star graph family.

Orientation: L[j, k] (j != k) is the rate of movement from patch k into
patch j. Diagonal entries are minus the column's total outflow, so every
column sums to zero. Many network codes use the transposed convention.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .configuration import Configuration
from .exceptions import (InvalidParameters, NegativeEntry, NoConvergence,
                         NonPositiveDegree, NotIrreducible)
from .numerics import linear_solve, off_diagonal_digraph, spectral_bound
from .utils import as_vector

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConnectivityMatrix(object):
    n: int
    L: np.ndarray

    @property
    def off_diagonal(self):
        return self.L - np.diag(np.diag(self.L))

    def is_symmetric(self, atol=1e-12):
        return bool(np.allclose(self.L, self.L.T, rtol=0.0, atol=atol))


@dataclass(frozen=True)
class PerronData(object):
    alpha: np.ndarray
    residual: float


def unreachable_pair(graph):
    """Returns (source, target) with no directed path from source to
    target, or None when the graph is strongly connected
    """
    nodes = set(graph.nodes)
    downstream = nx.descendants(graph, 0) | {0}
    missing = sorted(nodes - downstream)
    if missing:
        return 0, missing[0]
    upstream = nx.ancestors(graph, 0) | {0}
    missing = sorted(nodes - upstream)
    if missing:
        return missing[0], 0
    return None


def build_connectivity(raw) -> ConnectivityMatrix:
    """Returns the connectivity matrix built from the off-diagonal movement
    rates in `raw`. Any diagonal in `raw` is ignored and replaced by minus
    the column sums of the off-diagonal entries.
    """
    raw = np.array(raw, dtype=float)
    if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
        raise InvalidParameters('connectivity must be a square matrix, got '
                                'shape %r' % (raw.shape,))
    n = raw.shape[0]
    if n < 2:
        raise InvalidParameters('need at least two patches, got %d' % n)
    if not np.all(np.isfinite(raw)):
        raise InvalidParameters('connectivity has non-finite entries')

    off = raw.copy()
    np.fill_diagonal(off, 0.0)
    bad = np.argwhere(off < 0)
    if bad.size:
        j, k = bad[0]
        raise NegativeEntry('movement rate L[%d,%d] = %g is negative'
                            % (j + 1, k + 1, off[j, k]))

    pair = unreachable_pair(off_diagonal_digraph(off))
    if pair is not None:
        src, dst = pair
        raise NotIrreducible('patch %d can not be reached from patch %d'
                             % (dst + 1, src + 1), pair=(src + 1, dst + 1))

    L = off.copy()
    L[np.diag_indices(n)] = -off.sum(axis=0)
    L.setflags(write=False)
    return ConnectivityMatrix(n, L)


def as_connectivity(L) -> ConnectivityMatrix:
    if isinstance(L, ConnectivityMatrix):
        return L
    return build_connectivity(L)


def perron_vector(L, initial=None, config=None) -> PerronData:
    """Returns the positive null vector alpha of L with sum(alpha) = 1.

    The power iteration eigenvector is polished by solving the bordered
    system L alpha = 0, sum(alpha) = 1 with the last equation replaced.
    """
    config = config or Configuration()
    L = as_connectivity(L)
    result = spectral_bound(L.L, initial=initial, config=config)
    scale = max(1.0, float(np.max(np.abs(L.L))))
    if abs(result.value) > 1e-10 * scale:
        raise NoConvergence('spectral bound of L came out %.3g, expected 0'
                            % result.value)

    bordered = np.array(L.L, dtype=float)
    bordered[-1, :] = 1.0
    rhs = np.zeros(L.n)
    rhs[-1] = 1.0
    alpha = linear_solve(bordered, rhs, config)
    if not np.all(alpha > 0):
        log.warning('bordered solve lost positivity, keeping the power '
                    'iteration vector')
        alpha = result.eigenvector
    alpha = alpha / alpha.sum()
    alpha.setflags(write=False)
    residual = float(np.max(np.abs(L.L @ alpha)))
    return PerronData(alpha, residual)


def star_graph(a, b) -> ConnectivityMatrix:
    """Returns the star graph with hub patch 1 and spokes 2..n. Spoke j
    receives a[j-2] from the hub and sends b[j-2] back.
    """
    a = as_vector(a, 'a')
    b = as_vector(b, 'b', a.size)
    if a.size < 1:
        raise NonPositiveDegree('a star graph needs at least one spoke')
    for name, v in (('a', a), ('b', b)):
        if np.any(v <= 0):
            i = int(np.argmax(v <= 0))
            raise NonPositiveDegree('%s[%d] = %g must be positive'
                                    % (name, i + 1, v[i]))
    n = a.size + 1
    raw = np.zeros((n, n))
    raw[0, 1:] = b
    raw[1:, 0] = a
    return build_connectivity(raw)


def star_perron_vector(a, b):
    """Closed form (1, r_1, .., r_{n-1}) / (1 + s), r_i = a_i/b_i, s = sum r_i
    """
    r = np.asarray(a, dtype=float) / np.asarray(b, dtype=float)
    return np.concatenate(([1.0], r)) / (1.0 + r.sum())
