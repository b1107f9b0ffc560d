"""Label-extended matrix and Laplacian construction."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ugspectral.core import Permutation, UGEdge, UGInstance, characteristic_vector, value
from ugspectral.label_extended import (
    build_label_extended,
    build_laplacian,
    constraint_graph_adjacency,
)
from ugspectral.linalg import eigendecompose

from conftest import complete_skeleton, planted_on, random_instance


class TestBlocks:
    def test_single_edge_block(self):
        p = Permutation((1, 2, 0))
        inst = UGInstance.create(2, 3, [UGEdge(0, 1, 0.5, p)])
        M = build_label_extended(inst).matrix
        expect = np.zeros((6, 6))
        expect[0:3, 3:6] = 0.5 * p.matrix()
        expect[3:6, 0:3] = 0.5 * p.matrix().T
        assert np.array_equal(M, expect)

    def test_symmetric(self):
        M = build_label_extended(random_instance(8, 4, seed=1)).matrix
        assert np.array_equal(M, M.T)

    def test_parallel_edges_accumulate(self):
        e = UGEdge(0, 1, 0.3, Permutation.identity(2))
        inst = UGInstance.create(2, 2, [e, e])
        M = build_label_extended(inst).matrix
        assert M[0, 2] == pytest.approx(0.6)

    def test_self_loop_counted_once(self):
        inst = UGInstance.create(1, 2, [UGEdge(0, 0, 1.0, Permutation((1, 0)))])
        M = build_label_extended(inst).matrix
        # w * Pi symmetrized once: row sums equal the degree (= 1)
        assert np.allclose(M.sum(axis=1), 1.0)

    def test_row_sums_equal_degrees(self):
        inst = random_instance(7, 3, seed=5)
        lem = build_label_extended(inst)
        deg = np.repeat(inst.degrees(), inst.k)
        assert np.abs(lem.matrix.sum(axis=1) - deg).max() <= 1e-12

    def test_matvec_matches_matrix(self):
        lem = build_label_extended(random_instance(5, 3, seed=2))
        x = np.random.default_rng(0).standard_normal(15)
        assert np.array_equal(lem.matvec(x), lem.matrix @ x)


class TestEigenvectorIdentity:
    @given(st.integers(0, 10**6), st.integers(2, 4))
    @settings(max_examples=15, deadline=None)
    def test_perfect_labeling_is_eigenvector(self, seed, k):
        """On a regular graph, the characteristic vector of a perfectly
        satisfying labeling is an eigenvector of M with eigenvalue d."""
        n = 8
        inst, planted = planted_on(n, k, complete_skeleton(n), seed=seed)
        assert value(inst, planted) == 1.0
        lem = build_label_extended(inst)
        d = lem.d_avg
        y = characteristic_vector(planted, k)
        assert np.linalg.norm(lem.matrix @ y - d * y) <= 1e-9 * d

    @given(st.integers(0, 10**6))
    @settings(max_examples=15, deadline=None)
    def test_laplacian_annihilates_perfect_labeling(self, seed):
        """L_M y = 0 for perfect labelings, regular or not."""
        rng = np.random.default_rng(seed)
        skel = [(u, v) for u in range(9) for v in range(u + 1, 9) if rng.random() < 0.4]
        skel = skel or [(0, 1)]
        inst, planted = planted_on(9, 3, skel, seed=seed)
        lap = build_laplacian(inst)
        y = characteristic_vector(planted, 3)
        assert np.linalg.norm(lap.matrix @ y) <= 1e-9 * max(1.0, lap.d_avg)


class TestLaplacian:
    def test_psd(self):
        lap = build_laplacian(random_instance(8, 3, seed=9))
        vals, _ = eigendecompose(lap.matrix)
        assert vals.min() >= -1e-10

    def test_diagonal_is_degree(self):
        inst = random_instance(6, 2, seed=4)
        lap = build_laplacian(inst)
        adj = build_label_extended(inst)
        D = np.repeat(inst.degrees(), inst.k)
        assert np.abs(np.diag(lap.matrix) - (D - np.diag(adj.matrix))).max() <= 1e-12


class TestConstraintGraph:
    def test_forgets_permutations(self):
        inst = random_instance(6, 3, seed=8)
        A = constraint_graph_adjacency(inst)
        assert np.array_equal(A, A.T)
        assert A.sum(axis=1) == pytest.approx(inst.degrees(), abs=1e-12)

    def test_self_loop_on_diagonal(self):
        inst = UGInstance.create(2, 2, [UGEdge(0, 0, 0.5, Permutation.identity(2)),
                                        UGEdge(0, 1, 1.0, Permutation.identity(2))])
        A = constraint_graph_adjacency(inst)
        assert A[0, 0] == 0.5 and A[0, 1] == 1.0
