# -*- coding: utf-8 -*-
"""
Time integration of the full 2n dimensional SIS patch system

    S_j' = d_S (L S)_j - beta_j S_j I_j / (S_j + I_j) + gamma_j I_j
    I_j' = d_I (L I)_j + beta_j S_j I_j / (S_j + I_j) - gamma_j I_j

States are flat vectors [S_1..S_n, I_1..I_n].
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
from dataclasses import dataclass

import numpy as np

from .configuration import Configuration
from .exceptions import InvalidParameters, NegativeState, NonFinite
from .numerics import integrate_ode
from .patch_graph import as_connectivity

log = logging.getLogger(__name__)

# below this total the incidence term is taken as its limit 0
EMPTY_PATCH = 1e-300

INITIAL_KINDS = ('dfe-perturbed', 'uniform', 'explicit')


@dataclass(frozen=True)
class SimulationState(object):
    t: float
    S: np.ndarray
    I: np.ndarray

    @property
    def vector(self):
        return np.concatenate((self.S, self.I))

    @property
    def total(self):
        return float(np.sum(self.S) + np.sum(self.I))

    @classmethod
    def from_vector(cls, t, y):
        y = np.asarray(y, dtype=float)
        n = y.size // 2
        return cls(float(t), y[:n].copy(), y[n:].copy())


@dataclass(frozen=True)
class Trajectory(object):
    times: np.ndarray
    S: np.ndarray  # samples x patches
    I: np.ndarray
    terminal: SimulationState
    converged: bool
    field_norm: float

    @property
    def totals(self):
        return self.S.sum(axis=1) + self.I.sum(axis=1)


def incidence(beta, S, I):
    total = S + I
    out = np.zeros_like(total)
    np.divide(beta * S * I, total, out=out, where=total > EMPTY_PATCH)
    return out


def make_field(L, params):
    """Returns field(t, y) for the integrator
    """
    M = as_connectivity(L).L
    beta, gamma = params.beta, params.gamma
    dS, dI = params.dS, params.dI
    n = M.shape[0]

    def field(t, y):
        S, I = y[:n], y[n:]
        inc = incidence(beta, S, I)
        recovered = gamma * I
        return np.concatenate((dS * (M @ S) - inc + recovered,
                               dI * (M @ I) + inc - recovered))
    return field


def sis_field(state, L, params):
    """Returns the time derivative at `state` (a SimulationState or a flat
    vector) as a flat vector
    """
    y = state.vector if isinstance(state, SimulationState) else \
        np.asarray(state, dtype=float)
    if not np.all(np.isfinite(y)):
        raise NonFinite('state has non-finite entries')
    if y.size != 2 * params.n:
        raise InvalidParameters('state has %d entries, expected %d'
                                % (y.size, 2 * params.n))
    return make_field(L, params)(0.0, y)


def initial_state(kind, alpha, N, S=None, I=None, fraction=0.01):
    """Returns a starting SimulationState.

    dfe-perturbed moves `fraction` of the disease-free state alpha*N into
    the infected class; uniform spreads N evenly over all 2n classes;
    explicit takes the given S and I.
    """
    alpha = np.asarray(alpha, dtype=float)
    n = alpha.size
    if kind == 'dfe-perturbed':
        S0 = alpha * N * (1.0 - fraction)
        I0 = alpha * N * fraction
    elif kind == 'uniform':
        S0 = np.full(n, N / (2.0 * n))
        I0 = np.full(n, N / (2.0 * n))
    elif kind == 'explicit':
        if S is None or I is None:
            raise InvalidParameters('explicit start needs both S and I')
        S0 = np.array(S, dtype=float)
        I0 = np.array(I, dtype=float)
    else:
        raise InvalidParameters('unknown initial state %r, expected one of %s'
                                % (kind, ', '.join(INITIAL_KINDS)))
    if S0.size != n or I0.size != n:
        raise InvalidParameters('initial S and I need %d entries each' % n)
    return SimulationState(0.0, S0, I0)


def _check_start(state, n):
    y = state.vector
    if y.size != 2 * n:
        raise InvalidParameters('initial state has %d entries, expected %d'
                                % (y.size, 2 * n))
    if not np.all(np.isfinite(y)):
        raise NonFinite('initial state has non-finite entries')
    if np.any(y < 0):
        raise InvalidParameters('initial state has negative entries')
    if not y.sum() > 0:
        raise InvalidParameters('initial population is zero')


def simulate(L, params, initial, t_end=None, stride=None,
             config=None) -> Trajectory:
    """Integrates the patch system from `initial` and samples it every
    `stride` time units. Stops early once the field max-norm at a sample
    drops below config.simulation_converged_tol.
    """
    config = config or Configuration()
    t_end = config.simulation_t_end if t_end is None else float(t_end)
    stride = config.simulation_stride if stride is None else float(stride)
    if not isinstance(initial, SimulationState):
        initial = SimulationState.from_vector(0.0, initial)
    n = params.n
    _check_start(initial, n)

    field = make_field(L, params)
    tol = config.simulation_converged_tol

    def settled(t, y):
        return float(np.max(np.abs(field(t, y)))) < tol

    result = integrate_ode(field, initial.vector, initial.t + t_end,
                           stride=stride, predicate=settled, config=config,
                           t0=initial.t)

    lowest = float(np.min(result.states))
    if lowest < -config.negative_slack:
        k = int(np.argmin(np.min(result.states, axis=1)))
        raise NegativeState('a compartment reached %.3g at t = %g'
                            % (lowest, result.times[k]))

    terminal = SimulationState.from_vector(result.t, result.y)
    norm = float(np.max(np.abs(field(result.t, result.y))))
    log.debug('simulated to t = %g, converged: %s, field norm %.3g',
              result.t, result.converged, norm)
    return Trajectory(result.times, result.states[:, :n],
                      result.states[:, n:], terminal, result.converged, norm)
