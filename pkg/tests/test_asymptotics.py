# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from conftest import STAR_ALPHA, STAR_BETA, STAR_GAMMA, STAR_GAMMA_MILD
from sispatch.asymptotics import (alpha_star, asymptotic_profile, classify_J,
                                  dI_to_zero_profiles, find_dI_star_star,
                                  h_functions, h_limits, i_check_zero,
                                  limiting_S_profile, star_h1,
                                  star_i_check_zero, star_regime,
                                  symmetric_lower_bound, threshold_report)
from sispatch.equilibrium import endemic_equilibrium
from sispatch.exceptions import (DegenerateH, InvalidParameters,
                                 NotSymmetric, SubThreshold, TiePatch,
                                 ZeroGamma)
from sispatch.patch_graph import (build_connectivity, perron_vector,
                                  star_graph, star_perron_vector)
from sispatch.reproduction import (EpidemicParameters, find_dI_star,
                                   partition_rates, r0_limits,
                                   risk_partition)
from sispatch.utils import make_grid

PAIR_ALPHA = np.array([0.5, 0.5])
STAR_A, STAR_B = [1.0, 2.0, 3.0], [1.0, 1.0, 1.0]
# smallest positive root of 9 d^2 + 8 d - 6, where the hub's h vanishes
STAR_H1_ROOT = (-8.0 + math.sqrt(280.0)) / 18.0


def pair_rates(g, c):
    """Patch 1 low risk with gamma - beta = g, patch 2 high risk with
    beta - gamma = c
    """
    beta = np.array([1.0, 1.0 + c])
    gamma = np.array([1.0 + g, 1.0])
    return beta, gamma, partition_rates(beta, gamma)


def test_alpha_star_pair_closed_form(pair_L):
    beta, gamma, partition = pair_rates(1.0, 2.0)
    for dI in (0.1, 1.0, 7.0):
        values = alpha_star(pair_L, beta, gamma, dI, partition, PAIR_ALPHA)
        assert values == pytest.approx([dI / (2 * (dI + 1.0))], abs=1e-14)


def test_alpha_star_vanishes_with_dispersal(star_L, star_partition):
    values = alpha_star(star_L, STAR_BETA, STAR_GAMMA, 1e-8, star_partition,
                        STAR_ALPHA)
    assert np.all(values > 0)
    assert np.all(values < 1e-6)


def test_alpha_star_star_closed_form(star_L, star_partition):
    for dI in (0.05, 0.7, 5.0):
        full = i_check_zero(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, dI,
                            star_partition)
        closed = star_i_check_zero(STAR_A, STAR_B, STAR_ALPHA, STAR_BETA,
                                   STAR_GAMMA, dI)
        np.testing.assert_allclose(full, closed, atol=1e-14)
        np.testing.assert_array_equal(full[:2], STAR_ALPHA[:2])


def test_alpha_star_needs_strict_partition(pair_L):
    partition = partition_rates([1.0, 2.0], [1.0, 1.0])
    with pytest.raises(TiePatch):
        alpha_star(pair_L, [1.0, 2.0], [1.0, 1.0], 1.0, partition,
                   PAIR_ALPHA)


def test_h_star_values(star_L, star_partition):
    for dI in (0.1, 1.0, 10.0):
        h = h_functions(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, dI,
                        star_partition)
        assert set(h) == {0, 1}
        assert h[1] == pytest.approx(3.0 / 7.0, abs=1e-14)
        expected = 2 / 7 - dI / 7 * (2 / (dI + 1) + 18 / (dI + 6))
        assert h[0] == pytest.approx(expected, abs=1e-12)
        assert h[0] == pytest.approx(
            star_h1(STAR_A, STAR_B, STAR_ALPHA, STAR_BETA, STAR_GAMMA, dI),
            abs=1e-12)


def test_h_star_extremes(star_L, star_partition):
    small = h_functions(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 1e-8,
                        star_partition)
    large = h_functions(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 1e8,
                        star_partition)
    assert abs(small[0] - 2.0 / 7.0) < 1e-6
    assert abs(large[0] + 18.0 / 7.0) < 1e-4


def test_h_limits_star(star_L, star_partition):
    limits = h_limits(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA,
                      star_partition)
    assert limits.at_zero == pytest.approx({0: 2 / 7, 1: 3 / 7})
    assert limits.at_infinity[0] == pytest.approx(-18 / 7, abs=1e-12)
    assert limits.at_infinity[1] == pytest.approx(3 / 7, abs=1e-12)


def test_h_limits_pair(pair_L):
    g, c = 1.0, 2.0
    beta, gamma, partition = pair_rates(g, c)
    limits = h_limits(pair_L, beta, gamma, PAIR_ALPHA, partition)
    # -(gamma_1 - beta_1) alpha_1 + (beta_2 - gamma_2) alpha_2
    assert limits.at_infinity[1] == pytest.approx(-g / 2 + c / 2)
    h = h_functions(pair_L, beta, gamma, PAIR_ALPHA, 1e8, partition)
    assert abs(h[1] - limits.at_infinity[1]) < 1e-4


def test_dI_star_star_star_example(star_L, star_params, star_partition):
    dI_star = find_dI_star(star_L, star_params)
    root = find_dI_star_star(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA,
                             star_partition, dI_star)
    assert abs(root - STAR_H1_ROOT) < 1e-9

    # step 1e-4
    grid = np.linspace(0.3, 0.7, 4001)
    values = [star_h1(STAR_A, STAR_B, STAR_ALPHA, STAR_BETA, STAR_GAMMA, d)
              for d in grid]
    k = next(i for i, v in enumerate(values) if v < 0)
    assert grid[k - 1] <= root <= grid[k]


def test_dI_star_star_pair_closed_form(pair_L):
    g, c = 2.0, 0.5
    beta, gamma, partition = pair_rates(g, c)
    root = find_dI_star_star(pair_L, beta, gamma, PAIR_ALPHA, partition)
    assert root == pytest.approx(c * g / (g - c), rel=1e-12)
    bound = symmetric_lower_bound(pair_L, beta, gamma, partition)
    assert bound <= root * (1 + 1e-9)


def test_dI_star_star_none(pair_L):
    # g < c: h stays positive
    beta, gamma, partition = pair_rates(1.0, 2.0)
    assert find_dI_star_star(pair_L, beta, gamma, PAIR_ALPHA,
                             partition) is None
    assert symmetric_lower_bound(pair_L, beta, gamma, partition) == math.inf


def test_dI_star_star_capped_by_threshold(star_L, star_partition):
    assert find_dI_star_star(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA,
                             star_partition, dI_star=0.3) is None


def test_symmetric_lower_bound_needs_symmetry(star_L, star_partition):
    with pytest.raises(NotSymmetric):
        symmetric_lower_bound(star_L, STAR_BETA, STAR_GAMMA, star_partition)


def test_symmetric_lower_bound_keeps_h_positive():
    from sispatch.patch_graph import build_connectivity
    L = build_connectivity(np.ones((4, 4)))
    beta = np.array([3.0, 2.5, 0.5, 0.2])
    gamma = np.array([1.0, 1.0, 2.0, 3.0])
    partition = partition_rates(beta, gamma)
    alpha = np.full(4, 0.25)
    bound = symmetric_lower_bound(L, beta, gamma, partition)
    # 1 / (2 / 1.5 - 2 / 2.8)
    assert bound == pytest.approx(1.0 / (2 / 1.5 - 2 / 2.8))
    for dI in np.linspace(0.01, 0.99, 5) * bound:
        h = h_functions(L, beta, gamma, alpha, dI, partition)
        assert all(v > 0 for v in h.values())


def test_classify_below_dI_star_star(star_L, star_partition):
    split = classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 0.1,
                       star_partition)
    assert split.method == 'analytic'
    assert split.J_plus == (0, 1)
    assert split.J_minus == (2, 3)


def test_classify_between_thresholds(star_L, star_partition):
    split = classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 2.0,
                       star_partition)
    assert split.method == 'numeric'
    assert split.J_plus == (1,)
    assert split.J_minus == (0, 2, 3)
    with pytest.raises(InvalidParameters):
        classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 2.0,
                   star_partition, method='analytic')


def test_classify_numeric_agrees_with_analytic(star_L, star_partition):
    analytic = classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 0.1,
                          star_partition)
    numeric = classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 0.1,
                         star_partition, method='numeric')
    assert numeric.J_plus == analytic.J_plus
    np.testing.assert_allclose(numeric.I_star, analytic.I_star, atol=1e-4)


def test_classify_errors(star_L, star_partition):
    with pytest.raises(SubThreshold):
        classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 20.0,
                   star_partition)
    root = find_dI_star_star(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA,
                             star_partition)
    with pytest.raises(DegenerateH) as info:
        classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, root,
                   star_partition)
    assert info.value.patches == (0,)


def test_limiting_profile_below_dI_star_star(star_L, star_partition):
    split = classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 0.1,
                       star_partition)
    S_star = limiting_S_profile(split, STAR_ALPHA, N=100.0)
    stars = alpha_star(star_L, STAR_BETA, STAR_GAMMA, 0.1, star_partition,
                       STAR_ALPHA)
    weights = STAR_ALPHA[2:] - stars
    assert S_star[0] == 0.0 and S_star[1] == 0.0
    np.testing.assert_allclose(S_star[2:], 100.0 * weights / weights.sum(),
                               atol=1e-12)


def test_limiting_profile_between_thresholds(star_L, star_partition):
    split = classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 2.0,
                       star_partition)
    S_star = limiting_S_profile(split, STAR_ALPHA, N=100.0)
    assert S_star.sum() == pytest.approx(100.0)
    assert S_star[0] > 0 and S_star[1] == 0.0


def test_limiting_profile_single_low_risk_patch(pair_L):
    beta, gamma, partition = pair_rates(1.0, 2.0)
    split = classify_J(pair_L, beta, gamma, PAIR_ALPHA, 1.0, partition)
    np.testing.assert_allclose(limiting_S_profile(split, PAIR_ALPHA, N=8.0),
                               [8.0, 0.0])


def test_limiting_profile_matches_slow_susceptibles(star_L, star_partition):
    split = classify_J(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, 0.1,
                       star_partition)
    S_star = limiting_S_profile(split, STAR_ALPHA, N=100.0)
    params = EpidemicParameters(STAR_BETA, STAR_GAMMA, dS=1e-6, dI=0.1,
                                N=100.0)
    eq = endemic_equilibrium(star_L, params)
    np.testing.assert_allclose(eq.S, S_star, atol=1e-3 * 100.0)


def test_dI_to_zero_profiles_star(star_L):
    S, I = dI_to_zero_profiles(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA,
                               100.0, math.inf)
    np.testing.assert_allclose(S, [0.0, 0.0, 40.0, 60.0], atol=1e-12)
    assert not I.any()

    S, I = dI_to_zero_profiles(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA,
                               100.0, 0.0)
    np.testing.assert_allclose(S, 100 / 12 * np.array([1, 1, 2, 3]),
                               atol=1e-12)
    np.testing.assert_allclose(I, 100 / 12 * np.array([2, 3, 0, 0]),
                               atol=1e-12)
    assert (S + I).sum() == pytest.approx(100.0)


def test_dI_to_zero_profile_matches_equilibrium(star_L):
    beta, gamma = np.full(4, 2.0), np.ones(4)
    S, I = dI_to_zero_profiles(star_L, beta, gamma, STAR_ALPHA, 100.0, 1.0)
    params = EpidemicParameters(beta, gamma, dS=1e-5, dI=1e-5, N=100.0)
    eq = endemic_equilibrium(star_L, params)
    np.testing.assert_allclose(eq.S, S, atol=1e-3 * 100.0)
    np.testing.assert_allclose(eq.I, I, atol=1e-3 * 100.0)


def test_dI_to_zero_profiles_need_recovery(star_L):
    with pytest.raises(ZeroGamma):
        dI_to_zero_profiles(star_L, STAR_BETA, [1.0, 0.0, 2.0, 7.0],
                            STAR_ALPHA, 100.0, 0.0)


def test_star_regimes(star_params):
    assert star_regime(STAR_ALPHA, STAR_BETA, STAR_GAMMA, STAR_H1_ROOT,
                       4.8954) == 'ii2'
    assert star_regime(STAR_ALPHA, STAR_BETA, STAR_GAMMA, None,
                       4.8954) == 'ii1'
    strong = np.array(STAR_GAMMA) + 1.0
    assert star_regime(STAR_ALPHA, strong, STAR_GAMMA) == 'i1'


def test_threshold_report_star(star_L, star_params):
    report = threshold_report(star_L, star_params)
    assert abs(report.dI_star - 4.8954) < 1e-3
    assert abs(report.dI_star_star - STAR_H1_ROOT) < 1e-9
    assert report.symmetric_lower_bound is None


def test_star_thresholds_with_milder_recovery(star_L):
    # gamma_4 = 3 instead of 7
    params = EpidemicParameters(STAR_BETA, STAR_GAMMA_MILD, N=100.0)
    partition = risk_partition(params)
    assert partition.H_plus == (0, 1)

    dI_star = find_dI_star(star_L, params)
    assert abs(dI_star - 8.478) < 0.05
    assert abs(dI_star - 8.47616) < 1e-3

    root = find_dI_star_star(star_L, STAR_BETA, STAR_GAMMA_MILD, STAR_ALPHA,
                             partition, dI_star)
    # smallest positive root of 3 d^2 + 2 d - 2
    assert abs(root - (-2.0 + math.sqrt(28.0)) / 6.0) < 1e-9
    assert abs(root - 0.549) < 1e-3
    for dI in (0.1, 1.0, 10.0):
        expected = 2 / 7 - dI / 7 * (2 / (dI + 1) + 6 / (dI + 2))
        assert star_h1(STAR_A, STAR_B, STAR_ALPHA, STAR_BETA,
                       STAR_GAMMA_MILD, dI) == pytest.approx(expected,
                                                            abs=1e-12)

    assert r0_limits(star_L, params).limit_infinity == pytest.approx(0.8)
    limits = h_limits(star_L, STAR_BETA, STAR_GAMMA_MILD, STAR_ALPHA,
                      partition)
    assert limits.at_infinity[0] == pytest.approx(-6 / 7, abs=1e-12)
    report = threshold_report(star_L, params)
    assert star_regime(STAR_ALPHA, STAR_BETA, STAR_GAMMA_MILD,
                       report.dI_star_star, report.dI_star) == 'ii2'


def test_asymptotic_profile_star(star_L, star_params):
    profile = asymptotic_profile(star_L, star_params.with_dispersal(dI=0.1))
    assert profile.J_plus == (0, 1)
    assert set(profile.alpha_star) == {2, 3}
    assert profile.S_star.sum() == pytest.approx(100.0)
    assert profile.method == 'analytic'


def test_h_on_geometric_grid(star_L, star_partition):
    values = [h_functions(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA, dI,
                          star_partition)
              for dI in make_grid(1e-3, 1e3, 30)]
    np.testing.assert_allclose([h[1] for h in values], 3.0 / 7.0,
                               atol=1e-12)
    for j in (0, 1):
        assert np.all(np.diff([h[j] for h in values]) <= 1e-12)


def test_alpha_star_growth(star_L, star_partition):
    def weighted(dI):
        return dI * alpha_star(star_L, STAR_BETA, STAR_GAMMA, dI,
                               star_partition, STAR_ALPHA)

    grid = make_grid(0.1, 10.0, 9)
    values = np.array([weighted(dI) / dI for dI in grid])
    assert np.all(np.diff(values, axis=0) > 0)
    # alpha_star + d_I alpha_star' < alpha on H-
    for dI in grid:
        step = 1e-4 * dI
        slope = (weighted(dI + step) - weighted(dI - step)) / (2 * step)
        assert np.all(slope < STAR_ALPHA[2:])


def test_star_closed_forms_random(rng):
    for _ in range(50):
        spokes = int(rng.integers(2, 5))
        a = rng.uniform(0.5, 3.0, size=spokes)
        b = rng.uniform(0.5, 3.0, size=spokes)
        u = rng.uniform(0.1, 2.0, size=spokes + 1)
        gamma = rng.uniform(0.1, 2.0, size=spokes + 1) + u
        beta = gamma - u
        beta[:2] = gamma[:2] + u[:2]
        L = star_graph(a, b)
        alpha = star_perron_vector(a, b)
        np.testing.assert_allclose(perron_vector(L).alpha, alpha,
                                   atol=1e-12)
        partition = partition_rates(beta, gamma)
        assert partition.H_plus == (0, 1)

        dI = float(10 ** rng.uniform(-2.0, 2.0))
        np.testing.assert_allclose(
            i_check_zero(L, beta, gamma, alpha, dI, partition),
            star_i_check_zero(a, b, alpha, beta, gamma, dI),
            rtol=1e-10, atol=1e-14)
        h = h_functions(L, beta, gamma, alpha, dI, partition)
        assert h[0] == pytest.approx(star_h1(a, b, alpha, beta, gamma, dI),
                                     rel=1e-9, abs=1e-12)


def test_symmetric_lower_bound_below_switch_point(rng):
    alpha = np.full(4, 0.25)
    checked = 0
    for _ in range(500):
        W = rng.uniform(0.1, 1.0, size=(4, 4))
        L = build_connectivity((W + W.T) / 2)
        u = rng.uniform(0.1, 2.0, size=4)
        gamma = rng.uniform(0.1, 2.0, size=4) + u
        beta = np.concatenate((gamma[:2] + u[:2], gamma[2:] - u[2:]))
        partition = partition_rates(beta, gamma)
        root = find_dI_star_star(L, beta, gamma, alpha, partition)
        if root is None:
            continue
        bound = symmetric_lower_bound(L, beta, gamma, partition)
        assert bound <= root * (1 + 1e-9)
        checked += 1
        if checked == 20:
            break
    assert checked == 20


def test_dI_to_zero_profile_slow_infected(star_L):
    # d_I = 1e-5 and d = d_I / d_S = 1e-3 approximate the d0 = 0 limit
    S, I = dI_to_zero_profiles(star_L, STAR_BETA, STAR_GAMMA, STAR_ALPHA,
                               100.0, 0.0)
    params = EpidemicParameters(STAR_BETA, STAR_GAMMA, dS=1e-2, dI=1e-5,
                                N=100.0)
    eq = endemic_equilibrium(star_L, params)
    assert np.max(np.abs(eq.S - S)) <= 5e-2 * np.max(S)
    assert np.max(np.abs(eq.I - I)) <= 5e-2 * np.max(I)


def test_slow_susceptibles_by_regime(star_L):
    # between d_I** and d_I* the hub keeps its susceptibles
    params = EpidemicParameters(STAR_BETA, STAR_GAMMA, dS=1e-6, dI=2.0,
                                N=100.0)
    assert endemic_equilibrium(star_L, params).S[0] > 1e-3 * 100.0
    # below d_I** both high risk patches lose them
    eq = endemic_equilibrium(star_L, params.with_dispersal(dI=0.1))
    assert np.all(eq.S[:2] <= 1e-3 * 100.0)
