# -*- coding: utf-8 -*-
"""
Shared fixtures: the four patch star graph, the symmetric two patch
graph and a seeded random generator.
"""
import numpy as np
import pytest

from sispatch.patch_graph import build_connectivity, star_graph
from sispatch.reproduction import EpidemicParameters, risk_partition

STAR_ALPHA = np.array([1.0, 1.0, 2.0, 3.0]) / 7.0
STAR_BETA = (3.0, 4.0, 1.0, 1.0)
STAR_GAMMA = (1.0, 1.0, 2.0, 7.0)
# recovery rate 3 on the last spoke moves d_I* up to about 8.476
STAR_GAMMA_MILD = (1.0, 1.0, 2.0, 3.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def star_L():
    return star_graph([1.0, 2.0, 3.0], [1.0, 1.0, 1.0])


@pytest.fixture
def star_params():
    return EpidemicParameters(STAR_BETA, STAR_GAMMA, dS=1.0, dI=1.0, N=100.0)


@pytest.fixture
def star_partition(star_params):
    return risk_partition(star_params)


@pytest.fixture
def pair_L():
    return build_connectivity([[0.0, 1.0], [1.0, 0.0]])


@pytest.fixture
def star_document():
    return {
        'connectivity': {'star': {'a': [1, 2, 3], 'b': [1, 1, 1]}},
        'beta': list(STAR_BETA),
        'gamma': list(STAR_GAMMA),
        'dS': 1,
        'dI': 1,
        'N': 100,
    }


def random_quasi_positive(rng, n):
    """Dense quasi-positive matrix, irreducible because every off-diagonal
    entry is positive
    """
    A = rng.uniform(0.1, 2.0, size=(n, n))
    A[np.diag_indices(n)] = rng.uniform(-5.0, 1.0, size=n)
    return A
