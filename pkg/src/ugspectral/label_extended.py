"""The label-extended graph of a Unique Games instance.

The nk x nk matrix M has k x k block M_uv = w_uv * Pi_uv, the weighted
permutation matrix of the edge constraint; its Laplacian is L_M = D - M
with D block-diagonal holding deg(u) * I_k.  Characteristic vectors of
perfectly satisfying labelings are eigenvectors of M with eigenvalue d
(d-regular graphs) and of L_M with eigenvalue 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import UGInstance
from .linalg import symmetrize


@dataclass
class LabelExtendedMatrix:
    inst_n: int
    inst_k: int
    matrix: np.ndarray
    kind: str  # 'adjacency' | 'laplacian'
    degree_profile: np.ndarray
    d_avg: float

    @property
    def dim(self):
        return self.inst_n * self.inst_k

    def matvec(self, x):
        return self.matrix @ x


def _accumulate_adjacency(inst: UGInstance) -> np.ndarray:
    n, k = inst.n, inst.k
    M = np.zeros((n * k, n * k))
    idx = np.arange(k)
    for e in inst.edges:
        rows = e.u * k + idx
        cols = e.v * k + np.asarray(e.perm.images)
        if e.u == e.v:
            # Self-loop: w * Pi once on the diagonal block, so that it
            # contributes its weight (not twice) to the row sum.
            M[rows, cols] += e.weight
        else:
            M[rows, cols] += e.weight
            M[cols, rows] += e.weight
    return symmetrize(M)


def build_label_extended(inst: UGInstance) -> LabelExtendedMatrix:
    """Adjacency matrix M of the label-extended graph; parallel edges
    accumulate additively into the block."""
    deg = inst.degrees()
    return LabelExtendedMatrix(
        inst_n=inst.n,
        inst_k=inst.k,
        matrix=_accumulate_adjacency(inst),
        kind="adjacency",
        degree_profile=deg,
        d_avg=float(deg.mean()),
    )


def build_laplacian(inst: UGInstance) -> LabelExtendedMatrix:
    """L_M = D - M.  Positive semidefinite; annihilates the characteristic
    vector of every perfectly satisfying labeling."""
    adj = build_label_extended(inst)
    D = np.repeat(adj.degree_profile, inst.k)
    L = np.diag(D) - adj.matrix
    return LabelExtendedMatrix(
        inst_n=inst.n,
        inst_k=inst.k,
        matrix=symmetrize(L),
        kind="laplacian",
        degree_profile=adj.degree_profile,
        d_avg=adj.d_avg,
    )


def constraint_graph_adjacency(inst: UGInstance) -> np.ndarray:
    """n x n weighted adjacency of the underlying constraint graph
    (permutations forgotten, parallel edges summed)."""
    A = np.zeros((inst.n, inst.n))
    for e in inst.edges:
        if e.u == e.v:
            A[e.u, e.u] += e.weight
        else:
            A[e.u, e.v] += e.weight
            A[e.v, e.u] += e.weight
    return A
