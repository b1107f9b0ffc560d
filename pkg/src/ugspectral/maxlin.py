"""Group-difference (Gamma-Max-Lin) instances and their spectral theory.

Constraints have the form x_u - x_v = c over a finite abelian group, so
satisfaction is invariant under shifting every label by a group element.
Supported groups: cyclic Z_k and direct products of cyclic factors (powers
of Z_2 cover the Khot-Vishnoi XOR constraints).  Includes the lifted
eigenbasis of a perfectly satisfiable completion, the sin-theta
perturbation diagnostics, the l-infinity uniformity proxy check, and the
solver specialization with its expander fast path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Permutation, UGEdge, UGInstance, UGError, value
from .label_extended import build_label_extended, constraint_graph_adjacency
from .linalg import Eigenspace, eigendecompose, project_split, select_eigenspace
from .recover import SolveParams, SolveReport, default_yes_threshold, recover_solution


@dataclass(frozen=True)
class AbelianGroup:
    """Direct product of cyclic groups; elements are mixed-radix indices
    with factors little-endian (first factor is the least significant)."""

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors or any(f < 2 for f in self.factors):
            raise UGError(f"bad group factors {self.factors}")

    @property
    def order(self):
        return math.prod(self.factors)

    def to_tuple(self, i):
        out = []
        for f in self.factors:
            out.append(i % f)
            i //= f
        return tuple(out)

    def from_tuple(self, t):
        i = 0
        for f, c in zip(reversed(self.factors), reversed(t)):
            i = i * f + c
        return i

    def add(self, a, b):
        ta, tb = self.to_tuple(a), self.to_tuple(b)
        return self.from_tuple(tuple((x + y) % f for x, y, f in zip(ta, tb, self.factors)))

    def neg(self, a):
        ta = self.to_tuple(a)
        return self.from_tuple(tuple((-x) % f for x, f in zip(ta, self.factors)))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def shift_permutation(self, c) -> Permutation:
        """The map i -> i - c, so that pi(x_u) = x_v encodes x_u - x_v = c."""
        return Permutation(tuple(self.sub(i, c) for i in range(self.order)))

    @staticmethod
    def cyclic(k):
        return AbelianGroup((k,))


@dataclass
class MaxLinInstance:
    base: UGInstance
    shifts: tuple[int, ...]
    group: AbelianGroup

    def __post_init__(self):
        if self.group.order != self.base.k:
            raise UGError("group order must equal the alphabet size")
        for e, c in zip(self.base.edges, self.shifts):
            if e.perm.images != self.group.shift_permutation(c).images:
                raise UGError(f"edge ({e.u},{e.v}) is not the shift by {c}")

    @property
    def k(self):
        return self.base.k

    @classmethod
    def from_constraints(cls, n, group: AbelianGroup, constraints):
        """constraints: iterable of (u, v, weight, c)."""
        edges = []
        shifts = []
        for u, v, w, c in constraints:
            edges.append(UGEdge(u, v, w, group.shift_permutation(c)))
            shifts.append(int(c))
        return cls(UGInstance.create(n, group.order, edges), tuple(shifts), group)

    @classmethod
    def from_instance(cls, inst: UGInstance, group: AbelianGroup | None = None):
        """Detect the shift of every edge; error if any edge is not a group
        difference constraint for the given group (cyclic Z_k by default)."""
        group = group or AbelianGroup.cyclic(inst.k)
        tables = {group.shift_permutation(c).images: c for c in range(group.order)}
        shifts = []
        for e in inst.edges:
            c = tables.get(e.perm.images)
            if c is None:
                raise UGError(f"edge ({e.u},{e.v}) is not a shift constraint")
            shifts.append(c)
        return cls(inst, tuple(shifts), group)


def shift(labels, i, group: AbelianGroup) -> np.ndarray:
    """Add a group element to every label; satisfaction is invariant."""
    L = np.asarray(labels, dtype=np.int64)
    return np.array([group.add(int(x), i) for x in L], dtype=np.int64)


def lift_eigenbasis(phi_basis: Eigenspace, ml: MaxLinInstance, planted) -> np.ndarray:
    """Eigenbasis lift of a perfectly satisfiable instance.

    For every constraint-graph eigenvector phi and every group element i,
    the entrywise product of the block-replicated phi with the
    characteristic vector of the i-shifted planted labeling.  Rows are the
    lifted vectors: k * dim(phi_basis) of them, pairwise orthogonal, each an
    eigenvector of the label-extended matrix with phi's eigenvalue.
    """
    planted = np.asarray(planted, dtype=np.int64)
    if value(ml.base, planted) != 1.0:
        raise UGError("lift requires the planted labeling to satisfy everything")
    n, k = ml.base.n, ml.k
    out = np.zeros((k * phi_basis.dim, n * k))
    row = 0
    for s in range(phi_basis.dim):
        phi = phi_basis.basis[:, s]
        for i in range(k):
            Li = shift(planted, i, ml.group)
            out[row, np.arange(n) * k + Li] = phi
            row += 1
    return out


def block_norm_vector(w, n, k) -> np.ndarray:
    """Per-vertex Euclidean block norms; preserves the total norm."""
    w = np.asarray(w, dtype=np.float64)
    return np.linalg.norm(w.reshape(n, k), axis=1)


@dataclass
class UniformityReport:
    passes: bool
    bound: float            # C / sqrt(n)
    worst_basis_linf: float
    worst_basis_index: int
    sampled_max_linf: float
    samples: int


def uniformity_check(S: Eigenspace, C, samples=1000, seed=0) -> UniformityReport:
    """Check the l-infinity uniformity hypothesis on an eigenspace.

    Basis vectors are checked exactly; since the hypothesis quantifies over
    every unit vector of the span, seeded random unit combinations are also
    sampled and the maximum recorded (a necessary proxy, not a proof).
    """
    if S.dim == 0:
        raise UGError("uniformity check needs a nonempty eigenspace")
    n = S.dim_ambient
    bound = C / np.sqrt(n)
    linfs = np.max(np.abs(S.basis), axis=0)
    worst = int(np.argmax(linfs))
    sampled = 0.0
    if S.dim > 1 and samples > 0:
        rng = np.random.default_rng(seed)
        coeffs = rng.standard_normal((samples, S.dim))
        coeffs /= np.linalg.norm(coeffs, axis=1, keepdims=True)
        sampled = float(np.max(np.abs(coeffs @ S.basis.T)))
    worst_linf = float(max(linfs[worst], sampled))
    return UniformityReport(
        passes=bool(worst_linf <= bound),
        bound=float(bound),
        worst_basis_linf=float(linfs[worst]),
        worst_basis_index=worst,
        sampled_max_linf=sampled,
        samples=samples if S.dim > 1 else 0,
    )


@dataclass
class PerturbationReport:
    lam: float              # eigenvalue of the tested eigenvector of M
    lambda_s: float         # largest eigenvalue of the completion below (1-gamma)d
    numerator: float        # ||(M~ - M) w||
    beta_bound: float       # numerator / (lam - lambda_s), inf if undefined
    beta_measured: float    # component of w orthogonal to Y
    r_matrix_bound: float   # 2 ||R w_bar||, the block-norm route to the numerator
    R_row_budget: float     # total weight of perturbed edges

    def to_dict(self):
        return {
            "lambda": self.lam,
            "lambda_s": self.lambda_s,
            "numerator": self.numerator,
            "beta_bound": self.beta_bound,
            "beta_measured": self.beta_measured,
            "r_matrix_bound": self.r_matrix_bound,
            "R_row_budget": self.R_row_budget,
        }


def perturbed_edge_matrix(inst: UGInstance, completion: UGInstance) -> np.ndarray:
    """n x n matrix R carrying the weight of every edge whose constraint
    differs between the instance and its completion."""
    if len(inst.edges) != len(completion.edges):
        raise UGError("instance and completion must share the edge skeleton")
    R = np.zeros((inst.n, inst.n))
    for e, ec in zip(inst.edges, completion.edges):
        if (e.u, e.v) != (ec.u, ec.v):
            raise UGError("instance and completion must share the edge skeleton")
        if e.perm.images != ec.perm.images:
            R[e.u, e.v] = max(R[e.u, e.v], e.weight)
            if e.u != e.v:
                R[e.v, e.u] = R[e.u, e.v]
    return R


def sin_theta_report(
    ml: MaxLinInstance, completion: MaxLinInstance, w, gamma
) -> PerturbationReport:
    """Davis-Kahan style diagnostics for one unit eigenvector w of the
    perturbed label-extended matrix against the completion's high space Y."""
    w = np.asarray(w, dtype=np.float64)
    M = build_label_extended(ml.base)
    Mt = build_label_extended(completion.base)
    d = Mt.d_avg
    lam = float(w @ (M.matrix @ w))
    vals, _ = eigendecompose(Mt.matrix)
    below = vals[vals < (1 - gamma) * d]
    lambda_s = float(below[0]) if len(below) else -np.inf
    numerator = float(np.linalg.norm((Mt.matrix - M.matrix) @ w))
    beta_bound = numerator / (lam - lambda_s) if lam > lambda_s else np.inf
    Y = select_eigenspace(Mt.matrix, (1 - gamma) * d, "adjacency-high")
    beta_measured = project_split(w, Y).beta
    R = perturbed_edge_matrix(ml.base, completion.base)
    wbar = block_norm_vector(w, ml.base.n, ml.k)
    return PerturbationReport(
        lam=lam,
        lambda_s=lambda_s,
        numerator=numerator,
        beta_bound=float(beta_bound),
        beta_measured=float(beta_measured),
        r_matrix_bound=float(2 * np.linalg.norm(R @ wbar)),
        R_row_budget=float(R[np.triu_indices(ml.base.n)].sum()),
    )


@dataclass
class MaxLinParams:
    epsilon: float
    gamma: float
    theta: float | None = None          # defaulted from epsilon and gamma
    uniformity_C: float = 2.0
    theta_c1: float = 10.0              # theta >= theta_c1 * eps * gamma
    theta_c2: float = 100.0             # theta >= gamma^3 / theta_c2
    max_dim: int = 8
    net_step_override: float | None = None
    yes_constant: float = 10.0

    def resolved_theta(self):
        if self.theta is not None:
            return self.theta
        return min(self.gamma, max(self.theta_c1 * self.epsilon * self.gamma,
                                   self.gamma**3 / self.theta_c2))

    def validate(self):
        if not (0 < self.epsilon < 1):
            raise UGError("epsilon must be in (0,1)")
        if not (0 < self.gamma <= 1):
            raise UGError("gamma must be in (0,1]")
        theta = self.resolved_theta()
        if not (theta <= self.gamma):
            raise UGError(f"need theta <= gamma, got theta={theta}, gamma={self.gamma}")
        if theta <= 0:
            raise UGError("theta must be positive")


def solve_maxlin(ml: MaxLinInstance, params: MaxLinParams) -> SolveReport:
    """Gamma-Max-Lin solver: select the constraint graph's high space
    S_(1-gamma), run the uniformity proxy, then search the label-extended
    high space at (1-theta)d via the generic solver.

    The report records dim(S), the dimension check dim(W) <= k * dim(S)
    (a warning, not fatal, when violated) and the expander fast path flag
    (dim(S) = 1 puts the search in the polynomial-time regime).
    """
    params.validate()
    inst = ml.base
    if not inst.is_regular():
        raise UGError("solve_maxlin requires a d-regular constraint graph")
    A = constraint_graph_adjacency(inst)
    d = inst.average_degree
    S = select_eigenspace(A, (1 - params.gamma) * d, "adjacency-high")
    uni = uniformity_check(S, params.uniformity_C)
    theta = params.resolved_theta()

    solve_params = SolveParams(
        epsilon=params.epsilon,
        gamma=theta,
        max_dim=params.max_dim,
        mode="adjacency",
        net_step_override=params.net_step_override,
        yes_constant=params.yes_constant,
    )
    # The YES threshold comes from the outer gamma; the search threshold
    # (1-theta)d comes from theta, which may sit below 8*epsilon, so the
    # strict Theorem-style precondition is checked against gamma instead.
    if params.gamma > 8 * params.epsilon:
        solve_params.yes_threshold_override = default_yes_threshold(
            SolveParams(params.epsilon, params.gamma, yes_constant=params.yes_constant)
        )
    report = recover_solution(inst, solve_params, strict=False)
    report.extras.update(
        {
            "dim_S": S.dim,
            "k_times_dim_S": ml.k * S.dim,
            "dim_check_ok": bool(report.dim_W <= ml.k * S.dim),
            "theta": theta,
            "uniformity_passes": uni.passes,
            "uniformity_worst_linf": max(uni.worst_basis_linf, uni.sampled_max_linf),
            "expander_fast_path": bool(S.dim == 1),
        }
    )
    return report
