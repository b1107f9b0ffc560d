"""Eigenspace enumeration and assignment recovery.

The solver selects the high eigenspace W of the label-extended adjacency
matrix (eigenvalues >= (1-gamma)d) or the low eigenspace of its Laplacian
(eigenvalues <= gamma*d_avg), enumerates a lattice epsilon-net covering the
unit ball of W with coefficient step sqrt(2*eps/(gamma*dim W)), reads off a
labeling from every candidate by per-block argmax, and keeps the labeling
of maximum satisfied weight.  The YES/NO decision compares that value to a
threshold derived from the guarantee 1 - O(eps/(gamma-8*eps) + eps).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .config import numeric_config
from .core import UGInstance, UGError, characteristic_vector, validate_labeling, value_batch
from .label_extended import build_label_extended, build_laplacian
from .linalg import Eigenspace, project_split, select_eigenspace


class NonRegularError(UGError):
    pass


class DegenerateSpectrumError(UGError):
    pass


class DimensionAbortError(UGError):
    pass


class NetTooLargeError(UGError):
    pass


@dataclass
class SolveParams:
    epsilon: float
    gamma: float
    max_dim: int = 8
    mode: str = "adjacency"  # 'adjacency' | 'laplacian'
    net_step_override: float | None = None
    yes_constant: float = 10.0
    yes_threshold_override: float | None = None

    def validate(self, strict=True):
        if not (0 < self.epsilon < 1):
            raise UGError(f"epsilon must be in (0,1), got {self.epsilon}")
        if strict and not (self.gamma > 8 * self.epsilon):
            raise UGError(
                f"gamma must exceed 8*epsilon (gamma={self.gamma}, 8*eps={8 * self.epsilon})"
            )
        if self.max_dim < 1:
            raise UGError("max_dim must be >= 1")
        if self.mode not in ("adjacency", "laplacian"):
            raise UGError(f"unknown mode {self.mode!r}")
        if self.net_step_override is not None and self.net_step_override <= 0:
            raise UGError("net step override must be positive")


@dataclass
class NetSpec:
    basis: Eigenspace
    step: float


@dataclass
class SolveReport:
    best_labeling: np.ndarray
    best_value: float
    decision: str  # 'YES' | 'NO'
    yes_threshold: float
    dim_W: int
    net_points_evaluated: int
    eigen_time: float
    enumeration_time: float
    net_step: float
    mode: str
    extras: dict = field(default_factory=dict)

    def to_dict(self):
        d = {
            "best_labeling": [int(x) for x in self.best_labeling],
            "best_value": self.best_value,
            "decision": self.decision,
            "yes_threshold": self.yes_threshold,
            "dim_W": self.dim_W,
            "net_points_evaluated": self.net_points_evaluated,
            "eigen_time": self.eigen_time,
            "enumeration_time": self.enumeration_time,
            "net_step": self.net_step,
            "mode": self.mode,
        }
        d.update(self.extras)
        return d


def read_off_assignment(x, n, k) -> np.ndarray:
    """Per-block argmax labeling; ties break to the smallest label index."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (n * k,):
        raise UGError(f"vector length {x.shape} != n*k = {n * k}")
    if not np.all(np.isfinite(x)):
        raise UGError("non-finite entries in read-off vector")
    return np.argmax(x.reshape(n, k), axis=1)


def read_off_batch(X, n, k) -> np.ndarray:
    return np.argmax(X.reshape(-1, n, k), axis=2)


def _net_radius2(dim, step):
    """Squared coefficient-space radius of the net: 1/step plus half the
    lattice cell diagonal, so that rounding the coefficients of any vector
    of norm <= 1 lands inside the net.  This is what makes the covering
    radius exactly step*sqrt(dim)/2 over the whole closed unit ball."""
    return (1.0 / step + np.sqrt(dim) / 2.0) ** 2 * (1 + 1e-12)


def net_size(dim, step) -> int:
    """Exact number of lattice points in the net, by dynamic programming
    over the integer sum of squares."""
    if dim < 1 or step <= 0:
        raise UGError("net requires dim >= 1 and step > 0")
    r2 = int(np.floor(_net_radius2(dim, step)))
    m = int(np.floor(np.sqrt(r2)))
    counts = np.zeros(r2 + 1, dtype=object)
    counts[0] = 1
    for _ in range(dim):
        nxt = np.zeros(r2 + 1, dtype=object)
        for z in range(-m, m + 1):
            z2 = z * z
            if z2 <= r2:
                nxt[z2:] += counts[: r2 + 1 - z2]
        counts = nxt
    return int(counts.sum())


def _lattice_chunks(dim, step, chunk=8192) -> Iterator[np.ndarray]:
    """Integer lattice points z with ||z||^2 <= _net_radius2(dim, step), in
    lexicographic order over coordinate tuples, yielded as (batch, dim)
    arrays."""
    limit2 = _net_radius2(dim, step)
    buf = []
    point = [0] * dim

    def rec(i, remaining2):
        m = int(np.floor(np.sqrt(remaining2))) if remaining2 > 0 else 0
        if i == dim - 1:
            for z in range(-m, m + 1):
                point[i] = z
                buf.append(tuple(point))
            return
        for z in range(-m, m + 1):
            point[i] = z
            rec(i + 1, remaining2 - z * z)

    # Chunked driver: enumerate the first coordinate outermost so memory
    # stays bounded for large nets.
    m0 = int(np.floor(np.sqrt(limit2)))
    for z0 in range(-m0, m0 + 1):
        point[0] = z0
        if dim == 1:
            buf.append((z0,))
        else:
            rec(1, limit2 - z0 * z0)
        while len(buf) >= chunk:
            yield np.array(buf[:chunk], dtype=np.int64)
            del buf[:chunk]
    if buf:
        yield np.array(buf, dtype=np.int64)


def enumerate_net(spec: NetSpec) -> Iterator[np.ndarray]:
    """Stream every net vector sum_s alpha_s w(s), alpha_s in step*Z, with
    coefficient norm at most 1 + step*sqrt(dim)/2, exactly once in
    lexicographic coefficient order.  The extra half-cell-diagonal of slack
    beyond the unit ball guarantees every vector of norm <= 1 has a net
    point within step*sqrt(dim)/2 of it."""
    dim = spec.basis.dim
    if dim < 1:
        raise UGError("empty basis")
    total = net_size(dim, spec.step)
    cap = numeric_config().net_cap
    if total > cap:
        raise NetTooLargeError(
            f"net would have {total} points (> cap {cap}) at dim={dim}, step={spec.step}"
        )
    B = spec.basis.basis
    for Z in _lattice_chunks(dim, spec.step):
        yield from (Z * spec.step) @ B.T


def select_search_space(inst: UGInstance, params: SolveParams):
    """Build the matrix for the requested mode and select W.

    Returns (eigenspace, d) where d is the degree scale: the regular degree
    in adjacency mode, the average degree in laplacian mode.
    """
    cfg = numeric_config()
    if params.mode == "adjacency":
        if not inst.is_regular(cfg.regularity_rel_tol):
            raise NonRegularError(
                "adjacency mode requires a d-regular constraint graph; "
                "use laplacian mode for non-regular instances"
            )
        lem = build_label_extended(inst)
        d = lem.d_avg
        W = select_eigenspace(lem.matrix, (1 - params.gamma) * d, "adjacency-high")
    else:
        lem = build_laplacian(inst)
        d = lem.d_avg
        W = select_eigenspace(lem.matrix, params.gamma * d, "laplacian-low")
    return W, d


def default_yes_threshold(params: SolveParams) -> float:
    if params.yes_threshold_override is not None:
        return params.yes_threshold_override
    eps, gamma = params.epsilon, params.gamma
    if gamma <= 8 * eps:
        raise UGError("default yes-threshold needs gamma > 8*epsilon; pass an override")
    t = 1.0 - params.yes_constant * (eps / (gamma - 8 * eps) + eps)
    return float(min(max(t, 1e-12), 1.0 - 1e-12))


def recover_solution(inst: UGInstance, params: SolveParams, strict=True) -> SolveReport:
    """The main solver: enumerate the epsilon-net of W plus the signed basis
    vectors, read off labelings, return the best."""
    params.validate(strict=strict)
    t0 = time.perf_counter()
    W, d = select_search_space(inst, params)
    eigen_time = time.perf_counter() - t0
    dim = W.dim
    if dim == 0:
        raise DegenerateSpectrumError(
            f"no eigenvalues in the selected window (mode={params.mode}, gamma={params.gamma})"
        )
    if dim > params.max_dim:
        raise DimensionAbortError(
            f"dim(W)={dim} exceeds max_dim={params.max_dim} "
            f"(mode={params.mode}, threshold scale d={d})"
        )
    step = params.net_step_override
    if step is None:
        step = float(np.sqrt(2 * params.epsilon / (params.gamma * dim)))

    total = net_size(dim, step)
    cap = numeric_config().net_cap
    if total > cap:
        raise NetTooLargeError(
            f"net would have {total} points (> cap {cap}) at dim={dim}, step={step}"
        )

    n, k = inst.n, inst.k
    t1 = time.perf_counter()
    best_value = -1.0
    best_index = -1
    best_labeling = None
    index_base = 0
    for Z in _lattice_chunks(dim, step):
        X = (Z.astype(np.float64) * step) @ W.basis.T
        labels = read_off_batch(X, n, k)
        uniq, first = np.unique(labels, axis=0, return_index=True)
        vals = value_batch(inst, uniq)
        for v, i, lab in zip(vals, first, uniq):
            if v > best_value or (v == best_value and index_base + i < best_index):
                best_value, best_index, best_labeling = float(v), index_base + int(i), lab
        index_base += len(Z)

    # Signed basis vectors are always candidates so a one-dimensional W
    # cannot be missed by lattice misalignment.
    extra = np.concatenate([W.basis.T, -W.basis.T], axis=0)
    labels = read_off_batch(extra, n, k)
    vals = value_batch(inst, labels)
    for i, (v, lab) in enumerate(zip(vals, labels)):
        if v > best_value:
            best_value, best_index, best_labeling = float(v), index_base + i, lab
    enumeration_time = time.perf_counter() - t1

    threshold = default_yes_threshold(params)
    return SolveReport(
        best_labeling=best_labeling,
        best_value=best_value,
        decision="YES" if best_value >= threshold else "NO",
        yes_threshold=threshold,
        dim_W=dim,
        net_points_evaluated=total,
        eigen_time=eigen_time,
        enumeration_time=enumeration_time,
        net_step=step,
        mode=params.mode,
    )


def closeness_diagnostic(inst: UGInstance, planted, params: SolveParams, strict=True):
    """(alpha, beta) split of the normalized planted characteristic vector
    against the selected eigenspace W."""
    params.validate(strict=strict)
    L = validate_labeling(inst, planted)
    W, _ = select_search_space(inst, params)
    if W.dim == 0:
        raise DegenerateSpectrumError("empty eigenspace")
    y = characteristic_vector(L, inst.k, normalized=True)
    split = project_split(y, W)
    return split.alpha, split.beta
