# -*- coding: utf-8 -*-
"""
Dense matrix and scalar kernels used by every model module: the
spectral bound of a quasi-positive irreducible matrix, Gaussian
elimination, monotone bisection and an adaptive RK4 integrator.

Patch counts are small, so everything is dense and O(n^3) at worst.
"""
__title__ = 'sispatch'
__license__ = 'MIT'

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import networkx as nx
import numpy as np

from .configuration import Configuration
from .exceptions import (BadBracket, NoConvergence, NonFinite,
                         NonQuasiPositive, Reducible, Singular, StepUnderflow)

log = logging.getLogger(__name__)

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SpectralResult(object):
    value: float
    eigenvector: np.ndarray
    iterations: int
    residual: float


@dataclass(frozen=True)
class IntegrationResult(object):
    t: float
    y: np.ndarray
    times: np.ndarray
    states: np.ndarray
    converged: bool
    steps: int
    rejected: int = 0


def as_square_matrix(A):
    """Returns A as a finite float64 square array
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError('expected a square matrix, got shape %r'
                         % (A.shape,))
    if not np.all(np.isfinite(A)):
        raise NonFinite('matrix has non-finite entries')
    return A


def off_diagonal_digraph(A):
    """Directed graph with an edge k -> j whenever A[j, k] != 0, j != k.
    Column k feeds row j, the flow orientation of the patch model.
    """
    n = A.shape[0]
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    rows, cols = np.nonzero(A)
    graph.add_edges_from((int(k), int(j)) for j, k in zip(rows, cols)
                         if j != k)
    return graph


def is_irreducible(A):
    A = np.asarray(A)
    if A.shape[0] == 1:
        return True
    return nx.is_strongly_connected(off_diagonal_digraph(A))


def check_quasi_positive(A):
    off = A - np.diag(np.diag(A))
    bad = np.argwhere(off < 0)
    if bad.size:
        j, k = bad[0]
        raise NonQuasiPositive('off-diagonal entry (%d, %d) = %g is negative'
                               % (j + 1, k + 1, A[j, k]))


def _power_iteration(B, v, steps, config):
    """Runs at most `steps` power iterations on the primitive B. Stops once
    the Collatz-Wielandt bounds min_j (Bv)_j / v_j <= s(B) <= max_j
    (Bv)_j / v_j close up. Returns (value, v, iterations, converged).
    """
    n = B.shape[0]
    norm = float(B.max())
    for it in range(1, steps + 1):
        w = B @ v
        total = float(w.sum())
        if not np.isfinite(total) or total <= 0:
            raise NonFinite('power iteration broke down at step %d' % it)
        if np.all(v > 0):
            ratios = w / v
            lower, upper = float(ratios.min()), float(ratios.max())
            # roundoff in (Bv)_j is of order eps * |B| * max(v)
            floor = 64 * n * EPS * norm * float(v.max() / v.min())
            if upper - lower <= max(config.spectral_tol * upper, floor):
                return 0.5 * (upper + lower), w / total, it, True
        v = w / total
    return math.nan, v, steps, False


def _inverse_iteration(A, v, steps, config):
    """Shifted inverse iteration for a quasi-positive irreducible A of
    max-norm 1. The shift stays above the Collatz-Wielandt upper bound
    max_j (Av)_j / v_j >= s(A), so (shift I - A)^-1 is positive and the
    iterate stays positive. Returns (value, v, iterations).
    """
    n = A.shape[0]
    eye = np.eye(n)
    if not np.all(v > 0):
        # any shift above the norm bound makes the iterate positive
        v = linear_solve((1.0 + n) * eye - A, v, config)
        v = v / v.sum()
    for it in range(1, steps + 1):
        ratios = (A @ v) / v
        upper, lower = float(ratios.max()), float(ratios.min())
        # (Av)_j carries roundoff of order eps * max(v)
        floor = 64 * n * EPS * float(v.max() / v.min())
        if upper - lower <= max(config.spectral_tol * max(1.0, abs(upper)),
                                floor):
            return 0.5 * (upper + lower), v, it
        shift = upper + max(upper - lower, config.spectral_shift_floor)
        w = linear_solve(shift * eye - A, v, config)
        if not np.all(w > 0):
            raise NoConvergence('inverse iteration lost positivity at '
                                'step %d' % it)
        v = w / w.sum()
    raise NoConvergence('inverse iteration did not converge in %d steps'
                        % steps)


def spectral_bound(A, initial=None, config=None, check=True) -> SpectralResult:
    """Returns s(A), the eigenvalue of maximal real part of a quasi-positive
    irreducible A, with its positive eigenvector normalized to sum 1.

    A is first scaled to max-norm 1, using s(kA) = k s(A). Power iteration
    runs on B = A + cI with c = 1 + max|A_jj|, which is nonnegative,
    irreducible and has a positive diagonal, hence primitive. When the
    spectral gap is too small for it to settle within
    config.spectral_power_steps, shifted inverse iteration takes over.
    `initial` warm-starts the iteration from a previous eigenvector.
    """
    config = config or Configuration()
    A = as_square_matrix(A)
    n = A.shape[0]
    if check:
        check_quasi_positive(A)
        if not is_irreducible(A):
            raise Reducible('matrix is reducible: the graph of its '
                            'off-diagonal entries is not strongly connected')
    if n == 1:
        return SpectralResult(float(A[0, 0]), np.ones(1), 0, 0.0)

    scale = float(np.max(np.abs(A)))
    As = A / scale
    c = 1.0 + float(np.max(np.abs(np.diag(As))))
    B = As + c * np.eye(n)

    if initial is not None:
        v = np.maximum(np.asarray(initial, dtype=float), 0.0)
        if v.shape != (n,) or not v.sum() > 0:
            v = np.full(n, 1.0 / n)
        v = v / v.sum()
    else:
        v = np.full(n, 1.0 / n)

    budget = config.spectral_max_iter
    lam, v, it, converged = _power_iteration(
        B, v, min(budget, config.spectral_power_steps), config)
    if converged:
        value = lam - c
    else:
        if it >= budget:
            raise NoConvergence('power iteration did not converge in %d '
                                'steps' % budget)
        log.debug('power iteration stalled after %d steps, switching to '
                  'inverse iteration', it)
        value, v, more = _inverse_iteration(As, v, budget - it, config)
        it += more

    value *= scale
    residual = float(np.max(np.abs(A @ v - value * v)))
    log.debug('spectral bound %.17g after %d iterations (residual %.3g)',
              value, it, residual)
    return SpectralResult(value, v, it, residual)


def lu_factor(A, config=None):
    """Gaussian elimination with partial pivoting. Returns (LU, perm)
    with multipliers stored below the diagonal.
    """
    config = config or Configuration()
    LU = as_square_matrix(A).copy()
    n = LU.shape[0]
    perm = np.arange(n)
    scale = float(np.max(np.abs(LU)))
    tol = config.pivot_rtol * scale
    if scale == 0:
        raise Singular('matrix is zero')
    for k in range(n):
        p = int(np.argmax(np.abs(LU[k:, k]))) + k
        if abs(LU[p, k]) < tol:
            raise Singular('pivot %d is %.3g, below %.3g'
                           % (k + 1, abs(LU[p, k]), tol))
        if p != k:
            LU[[k, p]] = LU[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        for i in range(k + 1, n):
            if LU[i, k] != 0.0:
                lam = LU[i, k] / LU[k, k]
                LU[i, k + 1:] -= lam * LU[k, k + 1:]
                LU[i, k] = lam
    return LU, perm


def lu_solve(LU, perm, b):
    n = LU.shape[0]
    x = np.asarray(b, dtype=float)[perm].copy()
    for k in range(1, n):
        x[k] -= np.dot(LU[k, :k], x[:k])
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - np.dot(LU[k, k + 1:], x[k + 1:])) / LU[k, k]
    return x


def linear_solve(A, b, config=None):
    """Returns x with Ax = b by Gaussian elimination with partial pivoting,
    plus one step of iterative refinement when the residual is too big
    """
    config = config or Configuration()
    A = as_square_matrix(A)
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.shape[0] != A.shape[0]:
        raise ValueError('right-hand side has %d entries, matrix is %dx%d'
                         % (b.shape[0], A.shape[0], A.shape[0]))
    if not np.all(np.isfinite(b)):
        raise NonFinite('right-hand side has non-finite entries')

    LU, perm = lu_factor(A, config)
    x = lu_solve(LU, perm, b)
    tol = config.solve_residual_tol * (1.0 + float(np.max(np.abs(b))))
    # badly scaled rows can not beat roundoff in A @ x
    tol = max(tol, 64 * A.shape[0] * EPS * float(np.max(np.abs(A)))
              * float(np.max(np.abs(x))))
    r = b - A @ x
    if float(np.max(np.abs(r))) > tol:
        x = x + lu_solve(LU, perm, r)
        r = b - A @ x
        if float(np.max(np.abs(r))) > tol:
            raise Singular('matrix is numerically singular, residual %.3g'
                           % float(np.max(np.abs(r))))
    return x


def bisect_monotone(f: Callable[[float], float], lo, hi, tol,
                    direction='increasing', rtol=0.0):
    """Returns the root of the monotone function f inside [lo, hi].

    Stops once the bracket is narrower than max(tol, rtol*|x|) or can
    not be split any further in floating point.
    """
    if direction not in ('increasing', 'decreasing'):
        raise ValueError('direction must be increasing or decreasing')
    if not lo < hi:
        raise BadBracket('empty bracket [%g, %g]' % (lo, hi))
    sign = 1.0 if direction == 'increasing' else -1.0
    f_lo = sign * f(lo)
    f_hi = sign * f(hi)
    if f_lo == 0:
        return float(lo)
    if f_hi == 0:
        return float(hi)
    if not (f_lo < 0 < f_hi):
        raise BadBracket('f(%g) = %g and f(%g) = %g do not bracket a root '
                         'of an %s function'
                         % (lo, sign * f_lo, hi, sign * f_hi, direction))
    while True:
        mid = 0.5 * (lo + hi)
        if hi - lo <= max(tol, rtol * abs(mid)) or mid in (lo, hi):
            return mid
        f_mid = sign * f(mid)
        if f_mid == 0:
            return mid
        if f_mid < 0:
            lo = mid
        else:
            hi = mid


def rk4_step(field, t, y, h):
    k1 = field(t, y)
    k2 = field(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = field(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = field(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_ode(field: Callable, y0, t_end, step=None, stride=None,
                  predicate: Optional[Callable] = None, config=None,
                  t0=0.0) -> IntegrationResult:
    """Integrates y' = field(t, y) from t0 to t_end with RK4.

    Each step is compared against two half steps; the step is halved
    while the difference exceeds the local tolerance and regrows up to
    the nominal size once it is comfortably below. Samples are recorded
    every `stride` time units (start and end always included) and
    `predicate(t, y)` is checked at every sample, or at every step if no
    stride is given. Returns early once the predicate fires.
    """
    config = config or Configuration()
    nominal = float(step or config.ode_step)
    tol = config.ode_local_tol
    y = np.array(y0, dtype=float)
    if not np.all(np.isfinite(y)):
        raise NonFinite('initial state is not finite')
    t = float(t0)
    t_end = float(t_end)

    times = [t]
    states = [y.copy()]
    next_sample = t + stride if stride else math.inf
    h = nominal
    steps = rejected = 0
    converged = False
    if predicate is not None and predicate(t, y):
        converged = True
        t_end = t

    while t < t_end:
        h_try = min(h, t_end - t, next_sample - t)
        full = rk4_step(field, t, y, h_try)
        half = rk4_step(field, t, y, 0.5 * h_try)
        half = rk4_step(field, t + 0.5 * h_try, half, 0.5 * h_try)
        diff = half - full
        err = float(np.max(np.abs(diff))) / 15.0
        if not np.isfinite(err):
            raise NonFinite('state left the finite range at t = %g' % t)
        scale = max(1.0, float(np.max(np.abs(y))))
        if err > tol * scale:
            h = 0.5 * h_try
            rejected += 1
            if h < config.ode_min_step:
                raise StepUnderflow('step fell below %g at t = %g'
                                    % (config.ode_min_step, t))
            continue

        y = half + diff / 15.0
        # landing exactly on the sample or end time
        if h_try == next_sample - t:
            t = next_sample
        elif h_try == t_end - t:
            t = t_end
        else:
            t = t + h_try
        steps += 1
        if not np.all(np.isfinite(y)):
            raise NonFinite('state left the finite range at t = %g' % t)
        if err < tol * scale / 64.0 and h < nominal:
            h = min(2.0 * h, nominal)

        sampled = t >= next_sample or t >= t_end
        if sampled:
            times.append(t)
            states.append(y.copy())
            while next_sample <= t:
                next_sample += stride if stride else math.inf
        if predicate is not None and (sampled or not stride):
            if predicate(t, y):
                converged = True
                if not sampled:
                    times.append(t)
                    states.append(y.copy())
                break

    log.debug('integrated to t = %g in %d steps (%d rejected)',
              t, steps, rejected)
    return IntegrationResult(t, y, np.array(times), np.array(states),
                             converged, steps, rejected)
