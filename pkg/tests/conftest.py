"""Shared fixtures and instance factories for the test suite."""

import numpy as np
import pytest

from ugspectral.core import Permutation, UGEdge, UGInstance
from ugspectral.generators import PlantedSpec, planted_instance


def complete_skeleton(n):
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def cycle_skeleton(n):
    return [(u, (u + 1) % n) for u in range(n)]


def random_instance(n, k, p=0.5, seed=0):
    """Arbitrary (non-planted) instance on a G(n, p) skeleton with uniform
    random permutations and weights."""
    rng = np.random.default_rng(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                images = rng.permutation(k)
                edges.append(
                    UGEdge(u, v, float(rng.uniform(0.1, 1.0)), Permutation(tuple(images)))
                )
    if not edges:
        edges.append(UGEdge(0, min(1, n - 1), 1.0, Permutation.identity(k)))
    return UGInstance.create(n, k, edges)


def planted_on(n, k, skeleton, seed=0, family="general-permutation"):
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, k, size=n)
    return planted_instance(PlantedSpec(n, k, skeleton, labels, family, seed + 1))


@pytest.fixture
def small_instance():
    """Fixed 4-vertex, k=3 instance used across parser/value tests."""
    edges = [
        UGEdge(0, 1, 1.0, Permutation((1, 2, 0))),
        UGEdge(1, 2, 0.5, Permutation((0, 2, 1))),
        UGEdge(2, 3, 2.0, Permutation.identity(3)),
        UGEdge(3, 0, 1.0, Permutation((2, 0, 1))),
    ]
    return UGInstance.create(4, 3, edges)
