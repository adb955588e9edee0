# -*- coding: utf-8 -*-
"""
Limiting profiles of the endemic equilibrium when the susceptible or
the infected population stops moving.

d_S -> 0: alpha_star on the low risk patches, the h_j functions on the
high risk patches, the J+/J- split, the limiting susceptible profile
and the thresholds d_I* and d_I**.

d_I -> 0 with d_I / d_S -> d0: closed form limits of S and I.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .configuration import Configuration
from .exceptions import (BoxViolation, DegenerateH, EmptyJMinus,
                         EmptyRiskSet, InconsistentClassification,
                         InvalidParameters, NotSymmetric, SubThreshold,
                         ZeroGamma)
from .equilibrium import solve_auxiliary
from .numerics import bisect_monotone, linear_solve
from .patch_graph import as_connectivity, perron_vector
from .reproduction import (dispersal_spectral_bound, find_dI_star,
                           risk_partition)
from .utils import format_patches, positive_part

log = logging.getLogger(__name__)

CLASSIFY_METHODS = ('auto', 'analytic', 'numeric')


@dataclass(frozen=True)
class HLimits(object):
    at_zero: Dict[int, float]
    at_infinity: Dict[int, float]


@dataclass(frozen=True)
class JClassification(object):
    J_plus: Tuple[int, ...]
    J_minus: Tuple[int, ...]
    method: str
    h_values: Dict[int, float]
    # limit of I_check as d_S -> 0, alpha on J+
    I_star: np.ndarray


@dataclass(frozen=True)
class AsymptoticProfile(object):
    alpha_star: Dict[int, float]
    I_check_zero: np.ndarray
    h_values: Dict[int, float]
    J_plus: Tuple[int, ...]
    J_minus: Tuple[int, ...]
    S_star: np.ndarray
    dI_used: float
    method: str = 'analytic'


@dataclass(frozen=True)
class ThresholdReport(object):
    dI_star: float
    dI_star_star: Optional[float]
    symmetric_lower_bound: Optional[float]


def _arrays(L, beta, gamma, alpha, config):
    L = as_connectivity(L)
    if alpha is None:
        alpha = perron_vector(L, config=config).alpha
    return (L, np.asarray(beta, dtype=float), np.asarray(gamma, dtype=float),
            np.asarray(alpha, dtype=float))


def _strict(partition):
    return partition.require_strict()


def alpha_star(L, beta, gamma, dI, partition, alpha=None,
               config=None) -> np.ndarray:
    """Returns alpha_star on H- (in partition order), the solution of

        -d_I sum_{k in H-} L_jk x_k - (beta_j - gamma_j) x_j
            = d_I sum_{k in H+} L_jk alpha_k,    j in H-.
    """
    config = config or Configuration()
    L, beta, gamma, alpha = _arrays(L, beta, gamma, alpha, config)
    _strict(partition)
    if not dI > 0:
        raise InvalidParameters('d_I = %g must be positive' % dI)
    Hm, Hp = list(partition.H_minus), list(partition.H_plus)
    M = -dI * L.L[np.ix_(Hm, Hm)] - np.diag(beta[Hm] - gamma[Hm])
    rhs = dI * L.L[np.ix_(Hm, Hp)] @ alpha[Hp]
    values = linear_solve(M, rhs, config)
    if np.any(values <= 0) or np.any(values >= alpha[Hm]):
        raise BoxViolation('alpha_star left (0, alpha) at d_I = %g' % dI)
    return values


def i_check_zero(L, beta, gamma, alpha, dI, partition, config=None):
    """alpha on H+ and alpha_star on H-
    """
    L, beta, gamma, alpha = _arrays(L, beta, gamma, alpha, config)
    out = alpha.copy()
    out[list(partition.H_minus)] = alpha_star(L, beta, gamma, dI, partition,
                                              alpha, config)
    return out


def h_functions(L, beta, gamma, alpha, dI, partition,
                config=None) -> Dict[int, float]:
    """Returns {j: h_j(d_I)} for j in H+ with
    h_j = d_I (L I_check_zero)_j + (beta_j - gamma_j) alpha_j
    """
    L, beta, gamma, alpha = _arrays(L, beta, gamma, alpha, config)
    x = i_check_zero(L, beta, gamma, alpha, dI, partition, config)
    flux = L.L @ x
    return {j: float(dI * flux[j] + (beta[j] - gamma[j]) * alpha[j])
            for j in partition.H_plus}


def h_limits(L, beta, gamma, alpha, partition, config=None) -> HLimits:
    """Limits of h_j as d_I -> 0 and d_I -> infinity. The latter is
    -N_t M_t^-1 ((gamma - beta) alpha)|H- + ((beta - gamma) alpha)|H+ with
    M_t = -L restricted to H- and N_t = L on rows H+, columns H-.
    """
    config = config or Configuration()
    L, beta, gamma, alpha = _arrays(L, beta, gamma, alpha, config)
    _strict(partition)
    Hm, Hp = list(partition.H_minus), list(partition.H_plus)
    growth = (beta - gamma) * alpha
    M_t = -L.L[np.ix_(Hm, Hm)]
    N_t = L.L[np.ix_(Hp, Hm)]
    y = linear_solve(M_t, -growth[Hm], config)
    infinity = -N_t @ y + growth[Hp]
    return HLimits({j: float(growth[j]) for j in Hp},
                   {j: float(v) for j, v in zip(Hp, infinity)})


def find_dI_star_star(L, beta, gamma, alpha, partition, dI_star=math.inf,
                      config=None) -> Optional[float]:
    """Returns d_I**, the smallest root of the h_j over H+, or None when
    every h_j stays positive up to d_I*
    """
    config = config or Configuration()
    L, beta, gamma, alpha = _arrays(L, beta, gamma, alpha, config)
    limits = h_limits(L, beta, gamma, alpha, partition, config)
    roots = {}
    for j in partition.H_plus:
        if not (limits.at_zero[j] > 0 and limits.at_infinity[j] < 0):
            continue

        def h(dI, j=j):
            return h_functions(L, beta, gamma, alpha, dI, partition,
                               config)[j]

        lo = hi = 1.0
        for _ in range(config.threshold_expansions):
            if h(lo) > 0:
                break
            hi = lo
            lo *= 0.5
        for _ in range(config.threshold_expansions):
            if h(hi) < 0:
                break
            lo = hi
            hi *= 2.0
        roots[j] = bisect_monotone(h, lo, hi, tol=0.0,
                                   direction='decreasing',
                                   rtol=config.root_tol)
        log.debug('h_%d vanishes at d_I = %.12g', j + 1, roots[j])

    if not roots:
        return None
    root = min(roots.values())
    if root > dI_star * (1 + config.threshold_rtol):
        return None
    return min(root, dI_star)


def _numeric_I_star(L, beta, gamma, alpha, dI, config):
    """Solves the auxiliary system down the d_S schedule. Returns the gaps
    alpha - I_check per schedule point and the extrapolated I_check.
    """
    schedule = sorted(config.classify_dS_schedule, reverse=True)
    if len(schedule) < 2:
        raise InvalidParameters('the d_S schedule needs two points')
    solutions = []
    warm = None
    for dS in schedule:
        warm = solve_auxiliary(L, beta, gamma, alpha, dI, dI / dS,
                               warm=warm, config=config)
        solutions.append(np.array(warm.I_check))
    gaps = np.array([alpha - x for x in solutions])
    # I_check is affine in d_S near 0
    h1, h2 = schedule[-2], schedule[-1]
    x1, x2 = solutions[-2], solutions[-1]
    extrapolated = (h1 * x2 - h2 * x1) / (h1 - h2)
    return gaps, extrapolated


def classify_J(L, beta, gamma, alpha, dI, partition, method='auto',
               config=None) -> JClassification:
    """Splits the patches into J+ (I_check -> alpha as d_S -> 0) and J-.

    When every h_j is positive, J+ = H+ follows analytically. Otherwise
    (or with method='numeric') the auxiliary system is solved down a
    geometric d_S schedule and J+ collects the patches whose gap
    alpha_j - I_check_j is below classify_gap_rtol * alpha_j at the
    smallest d_S and still shrinking geometrically.
    """
    config = config or Configuration()
    if method not in CLASSIFY_METHODS:
        raise InvalidParameters('method must be one of %s'
                                % ', '.join(CLASSIFY_METHODS))
    L, beta, gamma, alpha = _arrays(L, beta, gamma, alpha, config)
    _strict(partition)
    s = dispersal_spectral_bound(L, dI, beta - gamma, config=config).value
    if s <= 0:
        raise SubThreshold('R0 <= 1 at d_I = %g, no endemic equilibrium'
                           % dI)

    h = h_functions(L, beta, gamma, alpha, dI, partition, config)
    band = config.h_dead_band
    degenerate = [j for j, v in h.items() if abs(v) <= band]
    if degenerate:
        raise DegenerateH('h vanishes at d_I = %g on patches %s'
                          % (dI, format_patches(degenerate)),
                          patches=degenerate)
    all_positive = all(v > 0 for v in h.values())
    H_plus = tuple(sorted(partition.H_plus))
    H_minus = tuple(sorted(partition.H_minus))

    if all_positive and method in ('auto', 'analytic'):
        I_star = i_check_zero(L, beta, gamma, alpha, dI, partition, config)
        return JClassification(H_plus, H_minus, 'analytic', h, I_star)
    if method == 'analytic':
        raise InvalidParameters('some h_j < 0 at d_I = %g, the split needs '
                                'the numeric method' % dI)

    gaps, extrapolated = _numeric_I_star(L, beta, gamma, alpha, dI, config)
    last, previous = gaps[-1], gaps[-2]
    with np.errstate(divide='ignore', invalid='ignore'):
        decay = np.where(previous > 0, last / previous, 1.0)
    small = last < config.classify_gap_rtol * alpha
    shrinking = decay <= config.classify_decay_ratio
    J_plus = tuple(int(j) for j in np.flatnonzero(small & shrinking))
    J_minus = tuple(int(j) for j in np.flatnonzero(~(small & shrinking)))
    log.debug('numeric split at d_I = %g: J+ = %s, gaps %s', dI,
              format_patches(J_plus), last)

    stray = set(J_plus) - set(H_plus)
    if stray:
        raise InconsistentClassification(
            'low risk patches %s came out in J+' % format_patches(stray))
    if all_positive and J_plus != H_plus:
        raise InconsistentClassification(
            'all h_j > 0 but the numeric J+ is %s instead of %s'
            % (format_patches(J_plus), format_patches(H_plus)))
    if not all_positive and J_plus == H_plus:
        raise InconsistentClassification(
            'some h_j < 0 but the numeric J+ is all of H+')

    I_star = np.where(small & shrinking, alpha, extrapolated)
    return JClassification(J_plus, J_minus, 'numeric', h, I_star)


def limiting_S_profile(classification, alpha, alpha_star_values=None,
                       N=1.0) -> np.ndarray:
    """Returns S* = lim S as d_S -> 0: zero on J+ and proportional to
    alpha_j - I_check*_j on J-, scaled to total N.

    `alpha_star_values` (on H-, partition order) replaces the weights
    when J- = H-.
    """
    alpha = np.asarray(alpha, dtype=float)
    J_minus = list(classification.J_minus)
    if not J_minus:
        raise EmptyJMinus('J- is empty')
    limit = np.array(classification.I_star, dtype=float)
    if alpha_star_values is not None and classification.method == 'analytic':
        limit[J_minus] = np.asarray(alpha_star_values, dtype=float)
    weights = np.zeros_like(alpha)
    weights[J_minus] = alpha[J_minus] - limit[J_minus]
    total = float(weights.sum())
    if not total > 0 or np.any(weights < 0):
        raise EmptyJMinus('J- carries no susceptible weight')
    S_star = N * weights / total
    S_star[list(classification.J_plus)] = 0.0
    return S_star


def dI_to_zero_profiles(L, beta, gamma, alpha, N, d0, partition=None,
                        config=None):
    """Returns (S, I), the limits as d_I -> 0 with d_I / d_S -> d0.

    d0 = 0: weights alpha_j (beta_j - gamma_j)+ / gamma_j.
    0 < d0 < inf: denominators d0 (beta_j - gamma_j)+ + gamma_j.
    d0 = inf: S proportional to alpha on H-, zero elsewhere, I = 0.
    """
    L, beta, gamma, alpha = _arrays(L, beta, gamma, alpha, config)
    if np.any(gamma <= 0):
        j = int(np.argmax(gamma <= 0))
        raise ZeroGamma('gamma_%d = %g, the limits need gamma > 0'
                        % (j + 1, gamma[j]))
    if d0 < 0:
        raise InvalidParameters('d0 = %g must be nonnegative' % d0)
    N = float(N)

    if math.isinf(d0):
        Hm = np.asarray(beta < gamma)
        if partition is not None:
            Hm = np.zeros(alpha.size, dtype=bool)
            Hm[list(partition.H_minus)] = True
        if not np.any(Hm):
            raise EmptyRiskSet('no low risk patch (beta < gamma)')
        S = np.where(Hm, N * alpha / float(alpha[Hm].sum()), 0.0)
        return S, np.zeros_like(alpha)

    excess = positive_part(beta - gamma)
    u = alpha * excess / (d0 * excess + gamma)
    denominator = float(np.sum(alpha + (1.0 - d0) * u))
    S = N * (alpha - d0 * u) / denominator
    I = N * u / denominator
    return S, I


def symmetric_lower_bound(L, beta, gamma, partition) -> float:
    """Returns the lower bound on d_I** for symmetric L,

        1 / [max_{k in H+} L_k^- / (beta_k - gamma_k)
             + max_{k in H-} L_k^+ / (beta_k - gamma_k)]

    with L_k^-, L_k^+ the off-diagonal row sums over H- and H+. The H-
    term is negative; a nonpositive bracket gives math.inf.
    """
    L = as_connectivity(L)
    if not L.is_symmetric():
        raise NotSymmetric('connectivity matrix is not symmetric')
    _strict(partition)
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    off = L.off_diagonal
    Hm, Hp = list(partition.H_minus), list(partition.H_plus)
    to_minus = off[:, Hm].sum(axis=1)
    to_plus = off[:, Hp].sum(axis=1)
    growth = beta - gamma
    bracket = float(np.max(to_minus[Hp] / growth[Hp])
                    + np.max(to_plus[Hm] / growth[Hm]))
    if bracket <= 0:
        return math.inf
    return 1.0 / bracket


def star_i_check_zero(a, b, alpha, beta, gamma, dI):
    """Closed form I_check_zero for the star graph with H+ = {1, 2}
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    out = alpha.copy()
    spokes = np.arange(2, alpha.size)
    out[spokes] = dI * a[spokes - 1] * alpha[0] / (
        dI * b[spokes - 1] + np.asarray(gamma)[spokes]
        - np.asarray(beta)[spokes])
    return out


def star_h1(a, b, alpha, beta, gamma, dI):
    """Closed form h_1 of the hub for the star graph with H+ = {1, 2}
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    beta, gamma = np.asarray(beta, dtype=float), np.asarray(gamma, dtype=float)
    spokes = np.arange(2, alpha.size)
    low = np.sum(dI * alpha[0] * a[spokes - 1] * b[spokes - 1]
                 / (dI * b[spokes - 1] + gamma[spokes] - beta[spokes]))
    return float(dI * (-a.sum() * alpha[0] + b[0] * alpha[1] + low)
                 + alpha[0] * (beta[0] - gamma[0]))


def star_regime(alpha, beta, gamma, dI_star_star=None, dI_star=math.inf):
    """Which case of the star graph dichotomy holds, for H+ = {1, 2}:

    i1  R0 > 1 for all d_I and J+ = H+ throughout
    i2  R0 > 1 for all d_I and the split changes at d_I**
    ii1 R0 < 1 beyond d_I* and J+ = H+ below it
    ii2 R0 < 1 beyond d_I* and the split changes at d_I** < d_I*
    """
    alpha = np.asarray(alpha, dtype=float)
    growth = (np.asarray(beta, dtype=float)
              - np.asarray(gamma, dtype=float)) * alpha
    total = float(growth.sum())
    hub_and_low = float(growth[0] + growth[2:].sum())
    if total > 0:
        return 'i1' if hub_and_low >= 0 else 'i2'
    if total < 0:
        if dI_star_star is None or dI_star_star >= dI_star:
            return 'ii1'
        return 'ii2'
    return None


def threshold_report(L, params, alpha=None, config=None) -> ThresholdReport:
    """d_I*, d_I** and, for symmetric L, the lower bound on d_I**
    """
    config = config or Configuration()
    L = as_connectivity(L)
    if alpha is None:
        alpha = perron_vector(L, config=config).alpha
    partition = risk_partition(params).require_strict()
    dI_star = find_dI_star(L, params, alpha=alpha, config=config)
    dI_star_star = find_dI_star_star(L, params.beta, params.gamma, alpha,
                                     partition, dI_star, config)
    bound = None
    if L.is_symmetric():
        bound = symmetric_lower_bound(L, params.beta, params.gamma,
                                      partition)
    return ThresholdReport(dI_star, dI_star_star, bound)


def asymptotic_profile(L, params, alpha=None, method='auto',
                       config=None) -> AsymptoticProfile:
    """All d_S -> 0 limiting objects at the parameters' d_I
    """
    config = config or Configuration()
    L = as_connectivity(L)
    if alpha is None:
        alpha = perron_vector(L, config=config).alpha
    partition = risk_partition(params).require_strict()
    dI = params.dI
    stars = alpha_star(L, params.beta, params.gamma, dI, partition, alpha,
                       config)
    zero = np.array(alpha, dtype=float)
    zero[list(partition.H_minus)] = stars
    split = classify_J(L, params.beta, params.gamma, alpha, dI, partition,
                       method, config)
    S_star = limiting_S_profile(split, alpha, stars, params.N)
    return AsymptoticProfile(
        alpha_star={j: float(v) for j, v in zip(partition.H_minus, stars)},
        I_check_zero=zero, h_values=split.h_values, J_plus=split.J_plus,
        J_minus=split.J_minus, S_star=S_star, dI_used=dI,
        method=split.method)
