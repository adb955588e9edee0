# -*- coding: utf-8 -*-
import numpy as np
import pytest

from conftest import STAR_ALPHA
from sispatch.exceptions import (InvalidParameters, NegativeEntry,
                                 NonPositiveDegree, NotIrreducible)
from sispatch.patch_graph import (build_connectivity, perron_vector,
                                  star_graph, star_perron_vector)


def test_build_pair():
    L = build_connectivity([[5.0, 1.0], [1.0, -3.0]])
    np.testing.assert_array_equal(L.L, [[-1.0, 1.0], [1.0, -1.0]])
    assert L.n == 2
    assert L.is_symmetric()


def test_build_columns_sum_to_zero(rng):
    raw = rng.uniform(0.0, 3.0, size=(6, 6))
    L = build_connectivity(raw)
    assert np.max(np.abs(L.L.sum(axis=0))) < 1e-14
    assert np.all(L.off_diagonal >= 0)


def test_matrix_is_read_only(pair_L):
    with pytest.raises(ValueError):
        pair_L.L[0, 0] = 1.0


def test_build_star_matrix(star_L):
    expected = [[-6, 1, 1, 1], [1, -1, 0, 0], [2, 0, -1, 0], [3, 0, 0, -1]]
    np.testing.assert_array_equal(star_L.L, expected)
    assert not star_L.is_symmetric()


def test_build_rejects_negative_rate():
    with pytest.raises(NegativeEntry):
        build_connectivity([[0.0, -1.0], [1.0, 0.0]])


def test_build_rejects_isolated_patch():
    raw = [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    with pytest.raises(NotIrreducible) as info:
        build_connectivity(raw)
    assert 3 in info.value.pair


def test_build_rejects_one_way_flow():
    with pytest.raises(NotIrreducible):
        build_connectivity([[0.0, 0.0], [1.0, 0.0]])


def test_build_rejects_bad_shapes():
    with pytest.raises(InvalidParameters):
        build_connectivity([[0.0]])
    with pytest.raises(InvalidParameters):
        build_connectivity([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0]])
    with pytest.raises(InvalidParameters):
        build_connectivity([[0.0, np.nan], [1.0, 0.0]])


def test_perron_vector_pair(pair_L):
    np.testing.assert_allclose(perron_vector(pair_L).alpha, [0.5, 0.5],
                               atol=1e-12)


def test_perron_vector_star(star_L):
    data = perron_vector(star_L)
    np.testing.assert_allclose(data.alpha, STAR_ALPHA, atol=1e-12)
    assert data.residual < 1e-12


def test_perron_vector_asymmetric_pair():
    L = build_connectivity([[0.0, 1.0], [2.0, 0.0]])
    np.testing.assert_allclose(L.L, [[-2.0, 1.0], [2.0, -1.0]])
    np.testing.assert_allclose(perron_vector(L).alpha, [1 / 3, 2 / 3],
                               atol=1e-12)


def test_perron_vector_random(rng):
    raw = rng.uniform(0.0, 1.0, size=(7, 7))
    L = build_connectivity(raw)
    alpha = perron_vector(L).alpha
    assert np.all(alpha > 0)
    assert abs(alpha.sum() - 1.0) < 1e-12
    assert np.max(np.abs(L.L @ alpha)) < 1e-12


def test_perron_vector_slow_rates():
    # detailed balance along the path 1 - 2 - 3 gives alpha = (1, 2, 6) / 9
    L = build_connectivity([[0.0, 1e-6, 0.0], [2e-6, 0.0, 1e-6],
                            [0.0, 3e-6, 0.0]])
    data = perron_vector(L)
    np.testing.assert_allclose(data.alpha, np.array([1.0, 2.0, 6.0]) / 9.0,
                               atol=1e-12)
    assert np.max(np.abs(L.L @ data.alpha)) < 1e-17


def test_perron_vector_from_perturbed_start(rng):
    L = build_connectivity(rng.uniform(0.0, 1.0, size=(6, 6)))
    alpha = perron_vector(L).alpha
    start = alpha * rng.uniform(0.5, 1.5, size=6)
    np.testing.assert_allclose(perron_vector(L, initial=start).alpha, alpha,
                               atol=1e-12)


@pytest.mark.parametrize('a, b, alpha', [
    ([1.0], [1.0], [0.5, 0.5]),
    ([2.0], [1.0], [1 / 3, 2 / 3]),
    ([1.0, 2.0, 3.0], [1.0, 1.0, 1.0], STAR_ALPHA),
])
def test_star_graph_perron_vector(a, b, alpha):
    L = star_graph(a, b)
    np.testing.assert_allclose(star_perron_vector(a, b), alpha, atol=1e-15)
    np.testing.assert_allclose(perron_vector(L).alpha, alpha, atol=1e-12)


def test_star_graph_rejects_zero_degree():
    with pytest.raises(NonPositiveDegree):
        star_graph([1.0, 0.0], [1.0, 1.0])
    with pytest.raises(NonPositiveDegree):
        star_graph([], [])
