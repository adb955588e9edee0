# -*- coding: utf-8 -*-
"""
Epidemic parameters, the low/high risk partition, the basic
reproduction number R0 with its bounds and limits, and the dispersal
threshold d_I* beyond which R0 < 1.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .configuration import Configuration
from .exceptions import (AllGammaZero, EmptyRiskSet, InvalidParameters,
                         NoConvergence, NoSignChange, SubThreshold, TiePatch)
from .numerics import bisect_monotone, linear_solve, spectral_bound
from .patch_graph import as_connectivity, perron_vector
from .utils import as_vector, format_patches, rate_ratios

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpidemicParameters(object):
    """Per-patch transmission and recovery rates, the two dispersal
    rates and the total population
    """
    beta: np.ndarray
    gamma: np.ndarray
    dS: float = 1.0
    dI: float = 1.0
    N: float = 1.0

    def __post_init__(self):
        beta = as_vector(self.beta, 'beta')
        gamma = as_vector(self.gamma, 'gamma', beta.size)
        for name, v in (('beta', beta), ('gamma', gamma)):
            if np.any(v < 0):
                i = int(np.argmax(v < 0))
                raise InvalidParameters('%s_%d = %g is negative'
                                        % (name, i + 1, v[i]))
            v.setflags(write=False)
        for name in ('dS', 'dI', 'N'):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameters('%s = %r must be positive'
                                        % (name, getattr(self, name)))
            object.__setattr__(self, name, value)
        object.__setattr__(self, 'beta', beta)
        object.__setattr__(self, 'gamma', gamma)

    @property
    def n(self):
        return self.beta.size

    @property
    def growth(self):
        """beta - gamma
        """
        return self.beta - self.gamma

    @property
    def ratio(self):
        """d = d_I / d_S
        """
        return self.dI / self.dS

    def with_dispersal(self, dS=None, dI=None):
        return replace(self, dS=self.dS if dS is None else dS,
                       dI=self.dI if dI is None else dI)


@dataclass(frozen=True)
class RiskPartition(object):
    H_minus: Tuple[int, ...]
    H_plus: Tuple[int, ...]
    ties: Tuple[int, ...] = ()

    @property
    def strict(self):
        return not self.ties and bool(self.H_minus) and bool(self.H_plus)

    def require_strict(self):
        """Raises unless every patch is strictly low or high risk and both
        sets are nonempty
        """
        if self.ties:
            raise TiePatch('patches %s have beta = gamma'
                           % format_patches(self.ties), ties=self.ties)
        if not self.H_minus:
            raise EmptyRiskSet('no low risk patch (beta < gamma)')
        if not self.H_plus:
            raise EmptyRiskSet('no high risk patch (beta > gamma)')
        return self


@dataclass(frozen=True)
class R0Limits(object):
    limit_zero: float
    limit_infinity: float
    # a patch with beta = gamma = 0 makes limit_zero an upper bound only
    limit_zero_is_bound: bool = False


def partition_rates(beta, gamma) -> RiskPartition:
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    return RiskPartition(
        H_minus=tuple(int(j) for j in np.flatnonzero(beta < gamma)),
        H_plus=tuple(int(j) for j in np.flatnonzero(beta > gamma)),
        ties=tuple(int(j) for j in np.flatnonzero(beta == gamma)))


def risk_partition(params) -> RiskPartition:
    """Returns the low risk set H- (beta < gamma), the high risk set H+
    (beta > gamma) and the tie patches, compared exactly
    """
    return partition_rates(params.beta, params.gamma)


def dispersal_spectral_bound(L, dI, f, initial=None, config=None):
    """Returns the SpectralResult of d_I L + diag(f)
    """
    L = as_connectivity(L)
    A = dI * L.L + np.diag(np.asarray(f, dtype=float))
    return spectral_bound(A, initial=initial, config=config)


def dispersal_spectral_limits(f, alpha):
    """Limits of s(d_I L + diag f) as d_I -> 0 and d_I -> infinity
    """
    f = np.asarray(f, dtype=float)
    return float(np.max(f)), float(np.dot(alpha, f))


def lambda1(L, params, a, config=None, initial=None):
    """Returns s(d_I L + a diag(beta) - diag(gamma))
    """
    if a < 0:
        raise InvalidParameters('a = %g must be nonnegative' % a)
    f = a * params.beta - params.gamma
    return dispersal_spectral_bound(L, params.dI, f, initial=initial,
                                    config=config).value


def _require_gamma(params):
    if not np.any(params.gamma > 0):
        raise AllGammaZero('recovery rates are all zero, V is singular')


def r0_next_generation(L, params, config=None):
    """Returns the spectral radius of F V^-1, F = diag(beta) and
    V = diag(gamma) - d_I L, by power iteration. Needs beta >> 0 so that
    F V^-1 is positive.
    """
    config = config or Configuration()
    L = as_connectivity(L)
    _require_gamma(params)
    V = np.diag(params.gamma) - params.dI * L.L
    V_inv = np.column_stack([linear_solve(V, e, config)
                             for e in np.eye(L.n)])
    K = np.diag(params.beta) @ V_inv
    return spectral_bound(K, config=config).value


def r0(L, params, config=None) -> float:
    """Returns the basic reproduction number rho(F V^-1).

    mu_0 = 1/R0 is the unique root of a -> s(d_I L + a F - diag(gamma)),
    found by bisection between the reciprocals of max and min beta/gamma.
    """
    config = config or Configuration()
    L = as_connectivity(L)
    _require_gamma(params)
    if not np.any(params.beta > 0):
        return 0.0

    ratios = rate_ratios(params.beta, params.gamma)
    low, high = float(np.min(ratios)), float(np.max(ratios))
    if low == high:
        return low

    A0 = params.dI * L.L - np.diag(params.gamma)
    F = np.diag(params.beta)
    state = {'v': None}

    def g(a):
        result = spectral_bound(A0 + a * F, initial=state['v'],
                                config=config, check=False)
        state['v'] = result.eigenvector
        return result.value

    a_lo = 1.0 / high if math.isfinite(high) else 0.0
    a_hi = 1.0 / low if low > 0 else max(2.0 * a_lo, 1.0)
    # the bound is sharp only for beta proportional to gamma
    a_lo *= 1 - 1e-9
    a_hi *= 1 + 1e-9
    for _ in range(config.threshold_expansions):
        if g(a_lo) < 0:
            break
        a_lo *= 0.5
    for _ in range(config.threshold_expansions):
        if g(a_hi) > 0:
            break
        a_hi *= 2.0
    else:
        raise NoConvergence('could not bracket 1/R0, last upper end %g'
                            % a_hi)

    mu0 = bisect_monotone(g, a_lo, a_hi, tol=0.0, rtol=config.root_tol)
    value = 1.0 / mu0
    log.debug('R0 = %.17g at d_I = %g', value, params.dI)

    if config.cross_check and np.all(params.beta > 0):
        try:
            direct = r0_next_generation(L, params, config)
        except NoConvergence:
            log.warning('next generation cross-check did not converge')
        else:
            if abs(direct - value) > config.cross_check_tol * max(1.0, value):
                log.warning('R0 by bisection %.12g and by F V^-1 %.12g '
                            'disagree', value, direct)
    return value


def r0_limits(L, params, alpha=None, config=None) -> R0Limits:
    """Returns the limits of R0 as d_I -> 0 (max beta/gamma) and as
    d_I -> infinity (sum alpha beta / sum alpha gamma)
    """
    _require_gamma(params)
    if alpha is None:
        alpha = perron_vector(L, config=config).alpha
    zero = float(np.max(rate_ratios(params.beta, params.gamma)))
    infinity = float(np.dot(alpha, params.beta) / np.dot(alpha, params.gamma))
    bound = bool(np.any((params.beta == 0) & (params.gamma == 0)))
    if bound:
        log.warning('a patch has beta = gamma = 0, the small d_I limit %g '
                    'is an upper bound only', zero)
    return R0Limits(zero, infinity, bound)


def find_dI_star(L, params, dI_max=1.0, alpha=None, config=None) -> float:
    """Returns d_I*, where s(d_I L + diag(beta - gamma)) changes sign, or
    math.inf when R0 > 1 for every d_I
    """
    config = config or Configuration()
    L = as_connectivity(L)
    if alpha is None:
        alpha = perron_vector(L, config=config).alpha
    f = params.growth
    small, large = dispersal_spectral_limits(f, alpha)
    if large >= 0:
        return math.inf
    if small <= 0:
        raise SubThreshold('beta <= gamma on every patch, R0 <= 1 for '
                           'every d_I')

    state = {'v': None}

    def s(dI):
        result = dispersal_spectral_bound(L, dI, f, initial=state['v'],
                                          config=config)
        state['v'] = result.eigenvector
        return result.value

    lo = hi = float(dI_max)
    for _ in range(config.threshold_expansions):
        if s(lo) > 0:
            break
        hi = lo
        lo *= 0.5
    else:
        raise NoSignChange('s stays nonpositive down to d_I = %g' % lo)
    for _ in range(config.threshold_expansions):
        if s(hi) < 0:
            break
        lo = hi
        hi *= 2.0
    else:
        raise NoSignChange('s stays positive up to d_I = %g although its '
                           'limit is %g' % (hi, large))

    root = bisect_monotone(s, lo, hi, tol=0.0, direction='decreasing',
                           rtol=config.threshold_rtol)
    log.debug('d_I* = %.12g', root)
    return root
