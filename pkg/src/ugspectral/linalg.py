"""Dense symmetric eigendecomposition, eigenspace selection and projections.

Backed by LAPACK's symmetric solver (numpy.linalg.eigh), which meets the
residual/orthonormality contract below and is deterministic for a fixed
input.  Matrices at desk scale are nk <= ~4096 so dense is fine; builders
elsewhere expose a matvec view should an iterative solver ever be needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import numeric_config
from .core import UGError


class NumericError(UGError):
    pass


def symmetrize(A) -> np.ndarray:
    """Return (A + A^T)/2 after validating shape and finiteness."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix has non-finite entries")
    return (A + A.T) / 2.0


@dataclass
class Eigenspace:
    """Orthonormal basis of a spectral window of a symmetric matrix.

    mode 'adjacency-high' keeps eigenvalues >= threshold; 'laplacian-low'
    keeps eigenvalues <= threshold.  ``basis`` has shape (dim_ambient, dim).
    """

    dim_ambient: int
    basis: np.ndarray
    eigenvalues: np.ndarray
    threshold: float
    mode: str

    @property
    def dim(self):
        return self.basis.shape[1]


@dataclass
class ProjectionSplit:
    """Decomposition x = alpha * parallel + beta * orthogonal with both
    components unit length (orthogonal is None when beta == 0)."""

    alpha: float
    beta: float
    parallel: np.ndarray | None
    orthogonal: np.ndarray | None


def eigendecompose(A):
    """All eigenpairs of a symmetric matrix, sorted descending by eigenvalue.

    Returns (eigenvalues, eigenvectors) with eigenvectors in columns.
    """
    A = symmetrize(A)
    vals, vecs = np.linalg.eigh(A)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def select_eigenspace(A, threshold, mode) -> Eigenspace:
    """Maximal eigenspace of A on one side of a threshold.

    mode 'adjacency-high': eigenvalues >= threshold (the high window W of an
    adjacency matrix); 'laplacian-low': eigenvalues <= threshold.
    """
    if mode not in ("adjacency-high", "laplacian-low"):
        raise ValueError(f"unknown mode {mode!r}")
    if not np.isfinite(threshold):
        raise NumericError("threshold must be finite")
    vals, vecs = eigendecompose(A)
    if mode == "adjacency-high":
        keep = vals >= threshold
    else:
        keep = vals <= threshold
    return Eigenspace(
        dim_ambient=A.shape[0] if hasattr(A, "shape") else len(A),
        basis=np.ascontiguousarray(vecs[:, keep]),
        eigenvalues=vals[keep],
        threshold=float(threshold),
        mode=mode,
    )


def project_split(x, S: Eigenspace) -> ProjectionSplit:
    """Split x into its components inside and orthogonal to span(S)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (S.dim_ambient,):
        raise NumericError(f"vector shape {x.shape} != ambient dim {S.dim_ambient}")
    norm = np.linalg.norm(x)
    if norm == 0:
        raise NumericError("cannot split the zero vector")
    coeffs = S.basis.T @ x
    parallel = S.basis @ coeffs
    residual = x - parallel
    alpha = float(np.linalg.norm(parallel))
    beta = float(np.linalg.norm(residual))
    tol = numeric_config().residual_tol * norm
    return ProjectionSplit(
        alpha=alpha,
        beta=beta,
        parallel=parallel / alpha if alpha > tol else None,
        orthogonal=residual / beta if beta > tol else None,
    )
