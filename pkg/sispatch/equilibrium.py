# -*- coding: utf-8 -*-
"""
The endemic equilibrium. Instead of the 2n dimensional steady state
system we solve the n dimensional auxiliary system for I_check,

    d_I (L x)_j + (beta_j - gamma_j) x_j - beta_j x_j^2 / D_j = 0,
    D_j = d alpha_j + (1 - d) x_j,  0 < x_j < alpha_j,  d = d_I / d_S,

and recover S, I and kappa from it. The rescaled U-system (x = d U)
has D_j = alpha_j + (1 - d) U_j and stays regular as d -> 0.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .configuration import Configuration
from .exceptions import (InconsistentRatio, InvalidParameters, LeftBox,
                         NoConvergence, ResidualTooLarge,
                         Singular, SubThreshold)
from .numerics import integrate_ode, linear_solve
from .patch_graph import as_connectivity, perron_vector
from .reproduction import dispersal_spectral_bound, partition_rates
from .simulator import sis_field

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuxiliarySolution(object):
    I_check: np.ndarray
    d: float
    dI: float
    residual: float
    converged: bool = True
    newton_steps: int = 0
    # connectivity the solution belongs to, used for residual checks
    L: Optional[np.ndarray] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class USystemSolution(object):
    U_check: np.ndarray
    d: float
    dI: float
    residual: float
    bound: float


@dataclass(frozen=True)
class EndemicEquilibrium(object):
    S: np.ndarray
    I: np.ndarray
    kappa: float
    residual: float

    @property
    def total(self):
        return float(np.sum(self.S) + np.sum(self.I))


class MonotoneSystem(object):
    """d_I L x + c x - beta x^2 / D with c = beta - gamma.

    The auxiliary system has D = x + d (alpha - x), written through the gap
    alpha - x so large d does not cancel; the U-system has
    D = alpha + (1 - d) x.
    """
    def __init__(self, L, beta, gamma, alpha, dI, d, config, rescaled=False):
        self.M = dI * L
        self.beta = beta
        self.c = beta - gamma
        self.alpha = alpha
        self.d = d
        self.rescaled = rescaled
        self.floor = config.denominator_floor

    def denominator(self, x):
        if self.rescaled:
            D = self.alpha + (1.0 - self.d) * x
        else:
            D = x + self.d * (self.alpha - x)
        if np.any(D < self.floor):
            raise NoConvergence('denominator %.3g fell below %.3g'
                                % (float(np.min(D)), self.floor))
        return D

    def __call__(self, x):
        D = self.denominator(x)
        return self.M @ x + self.c * x - self.beta * x * x / D

    def jacobian(self, x):
        D = self.denominator(x)
        slope = self.c - self.beta * x * (2.0 * D - (1.0 - self.d) * x) / (D * D)
        return self.M + np.diag(slope)

    def field(self, t, x):
        return self(x)


def _norm(v):
    return float(np.max(np.abs(v)))


def damped_newton(system, x, inside, config):
    """Newton iteration halving the step until the residual decreases and
    the iterate stays inside the region. Returns (x, residual, steps).
    """
    F = system(x)
    res = _norm(F)
    steps = 0
    while res > config.newton_tol and steps < config.newton_max_steps:
        try:
            delta = linear_solve(system.jacobian(x), -F, config)
        except Singular:
            raise NoConvergence('singular Jacobian at Newton step %d' % steps)
        lam = 1.0
        for _ in range(60):
            trial = x + lam * delta
            if inside(trial):
                F_trial = system(trial)
                res_trial = _norm(F_trial)
                if res_trial < res:
                    break
            lam *= 0.5
        else:
            # stagnated at roundoff
            break
        x, F, res = trial, F_trial, res_trial
        steps += 1
    return x, res, steps


def _spectral_precheck(L, beta, gamma, dI, config):
    s = dispersal_spectral_bound(L, dI, beta - gamma, config=config).value
    if s <= 0:
        raise SubThreshold('s(d_I L + diag(beta - gamma)) = %.6g <= 0 at '
                           'd_I = %g, no endemic equilibrium' % (s, dI))
    if not partition_rates(beta, gamma).strict:
        log.warning('low/high risk sets are not a strict partition; solving '
                    'anyway since s(d_I L + diag(beta - gamma)) > 0')
    return s


def _prepare(L, beta, gamma, alpha, config):
    L = as_connectivity(L)
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if alpha is None:
        alpha = perron_vector(L, config=config).alpha
    return L, beta, gamma, np.asarray(alpha, dtype=float)


def _relax(system, start, config):
    tol = config.relaxation_tol
    result = integrate_ode(system.field, start, config.relaxation_t_max,
                           predicate=lambda t, x: _norm(system(x)) < tol,
                           config=config)
    if not result.converged:
        log.debug('relaxation stopped at t = %g with field norm %.3g',
                  result.t, _norm(system(result.y)))
    return result.y


def solve_auxiliary(L, beta, gamma, alpha, dI, d, start=None, warm=None,
                    config=None) -> AuxiliarySolution:
    """Returns the unique I_check in the box 0 < x < alpha.

    Relaxes the monotone field at min(d, relaxation_max_ratio) from
    `start` (default relaxation_start * alpha), then polishes by damped
    Newton while continuing geometrically in d up to the target ratio.
    `warm`, a solution at the same d_I and a smaller d, skips relaxation
    and continues from there.
    """
    config = config or Configuration()
    if not (d > 0 and dI > 0):
        raise InvalidParameters('need d > 0 and d_I > 0, got d = %g, '
                                'd_I = %g' % (d, dI))
    L, beta, gamma, alpha = _prepare(L, beta, gamma, alpha, config)
    _spectral_precheck(L, beta, gamma, dI, config)
    slack = config.box_slack

    def inside(x):
        return bool(np.all(x > 0) and np.all(x < alpha))

    def make(ratio):
        return MonotoneSystem(L.L, beta, gamma, alpha, dI, ratio, config)

    if warm is not None and warm.dI == dI and warm.d <= d:
        x = np.array(warm.I_check, dtype=float)
        current, steps = warm.d, 0
    else:
        d_relax = min(d, config.relaxation_max_ratio)
        x = config.relaxation_start * alpha if start is None else \
            np.array(start, dtype=float)
        if not inside(x):
            raise InvalidParameters('start must lie strictly inside '
                                    '(0, alpha)')
        x = _relax(make(d_relax), x, config)
        if np.any(x <= -slack) or np.any(x >= alpha + slack):
            raise LeftBox('relaxation left the box 0 < I_check < alpha')
        if not inside(x):
            raise LeftBox('relaxation reached the box boundary')
        x, res, steps = damped_newton(make(d_relax), x, inside, config)
        current = d_relax
    factor = config.continuation_factor
    while current < d:
        target = min(d, current * factor)
        try:
            trial, res, more = damped_newton(make(target), x, inside, config)
            if res > config.aux_residual_tol:
                raise NoConvergence('residual %.3g at d = %g' % (res, target))
        except NoConvergence:
            factor = math.sqrt(factor)
            if factor < 1.001:
                raise
            log.debug('continuation step refined to factor %g at d = %g',
                      factor, current)
            continue
        x, current, steps = trial, target, steps + more
        factor = min(factor * factor, config.continuation_factor)

    residual = _norm(make(d)(x))
    if residual > config.aux_residual_tol:
        raise NoConvergence('auxiliary residual %.3g above %.3g'
                            % (residual, config.aux_residual_tol))
    if not inside(x):
        raise LeftBox('solution left the box 0 < I_check < alpha')
    log.debug('auxiliary solve at d = %g, d_I = %g: residual %.3g after %d '
              'Newton steps', d, dI, residual, steps)
    x.setflags(write=False)
    return AuxiliarySolution(x, float(d), float(dI), residual, True, steps,
                             L.L)


def solve_U_system(L, beta, gamma, alpha, dI, d, config=None) -> USystemSolution:
    """Returns the strongly positive solution U_check of the rescaled
    system, which equals I_check / d for d > 0 and is defined at d = 0.

    The search region is 0 <= U <= M alpha with
    M = 1 + max (beta - gamma)+ / min positive gamma, doubled until the
    field points inward on the upper face.
    """
    config = config or Configuration()
    if not (0 <= d < 1):
        raise InvalidParameters('the U-system needs 0 <= d < 1, got %g' % d)
    if not dI > 0:
        raise InvalidParameters('d_I = %g must be positive' % dI)
    L, beta, gamma, alpha = _prepare(L, beta, gamma, alpha, config)
    _spectral_precheck(L, beta, gamma, dI, config)
    system = MonotoneSystem(L.L, beta, gamma, alpha, dI, d, config,
                            rescaled=True)

    positive_gamma = gamma[gamma > 0]
    floor = float(np.min(positive_gamma)) if positive_gamma.size else 1.0
    bound = 1.0 + float(np.max(np.maximum(beta - gamma, 0.0))) / floor
    for _ in range(config.threshold_expansions):
        if np.all(system(bound * alpha) <= 0):
            break
        bound *= 2.0
    else:
        raise NoConvergence('no invariant box found for the U-system')

    def inside(x):
        return bool(np.all(x > 0) and np.all(x <= bound * alpha))

    x = _relax(system, config.relaxation_start * alpha, config)
    if not inside(x):
        raise LeftBox('relaxation left the box 0 < U < %g alpha' % bound)
    x, res, steps = damped_newton(system, x, inside, config)
    residual = _norm(system(x))
    if residual > config.aux_residual_tol:
        raise NoConvergence('U-system residual %.3g above %.3g'
                            % (residual, config.aux_residual_tol))

    if d > 0 and config.cross_check:
        aux = solve_auxiliary(L, beta, gamma, alpha, dI, d, config=config)
        gap = _norm(d * x - aux.I_check)
        if gap > 1e-9:
            log.warning('d U_check and I_check differ by %.3g', gap)
    x.setflags(write=False)
    return USystemSolution(x, float(d), float(dI), residual, bound)


def disease_free_equilibrium(alpha, N):
    """Returns (S, I) = (alpha N, 0)
    """
    alpha = np.asarray(alpha, dtype=float)
    return alpha * N, np.zeros_like(alpha)


def recover_equilibrium(aux, params, alpha, L=None, config=None,
                        check=True) -> EndemicEquilibrium:
    """Returns (S, I, kappa) with S = kappa (alpha - I_check) / d_S,
    I = kappa I_check / d_I and kappa = d_I N / sum(d_I S_check + I_check).

    With `check` the steady state residual, the total population and the
    alignment of d_S S + d_I I with alpha are verified.
    """
    config = config or Configuration()
    alpha = np.asarray(alpha, dtype=float)
    ratio = params.dI / params.dS
    if abs(aux.d - ratio) > 1e-12 * ratio or \
            abs(aux.dI - params.dI) > 1e-12 * params.dI:
        raise InconsistentRatio(
            'auxiliary solution belongs to d = %.17g, d_I = %.17g but the '
            'parameters give d = %.17g, d_I = %.17g'
            % (aux.d, aux.dI, ratio, params.dI))

    x = np.asarray(aux.I_check, dtype=float)
    S_check = (alpha - x) / params.dS
    kappa = params.dI * params.N / float(np.sum(params.dI * S_check + x))
    S = kappa * S_check
    I = kappa * x / params.dI

    M = L if L is not None else aux.L
    residual = math.nan
    if M is not None:
        residual = _norm(sis_field(np.concatenate((S, I)), M, params))
    if not check:
        return EndemicEquilibrium(S, I, float(kappa), residual)

    tol = config.equilibrium_residual_tol
    total = float(np.sum(S) + np.sum(I))
    if abs(total - params.N) > tol * params.N:
        raise ResidualTooLarge('total population %.17g differs from N = %g'
                               % (total, params.N))
    flux = params.dS * S + params.dI * I
    if _norm(flux - kappa * alpha) > tol * max(1.0, kappa):
        raise ResidualTooLarge('d_S S + d_I I is not parallel to alpha')
    if M is not None and residual > tol * max(1.0, params.N):
        raise ResidualTooLarge('steady state residual %.3g above %.3g'
                               % (residual, tol * max(1.0, params.N)))
    return EndemicEquilibrium(S, I, float(kappa), residual)


def endemic_equilibrium(L, params, alpha=None, config=None):
    """Solves the auxiliary system at d = d_I / d_S and recovers (S, I)
    """
    config = config or Configuration()
    L = as_connectivity(L)
    if alpha is None:
        alpha = perron_vector(L, config=config).alpha
    aux = solve_auxiliary(L, params.beta, params.gamma, alpha, params.dI,
                          params.ratio, config=config)
    return recover_equilibrium(aux, params, alpha, L.L, config)
