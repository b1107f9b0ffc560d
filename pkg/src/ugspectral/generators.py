"""Instance factories.

Covers planted satisfiable instances and their adversarial perturbations,
random regular graph skeletons (pairing model), the Khot-Vishnoi constraint
graph / instance / label-extended closed form, and the fast Walsh-Hadamard
engine for spectra of Cayley graphs over F_2^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .core import Permutation, UGEdge, UGInstance, UGError, value
from .linalg import symmetrize


# ---------------------------------------------------------------------------
# Planted instances and perturbation
# ---------------------------------------------------------------------------


@dataclass
class PlantedSpec:
    n: int
    k: int
    skeleton: Sequence[tuple]  # (u, v) or (u, v, weight)
    planted: Sequence[int]
    constraint_family: str = "general-permutation"  # or 'maxlin'
    seed: int = 0


def _random_perm_with_image(rng, k, a, b):
    """Uniform permutation of [k] conditioned on mapping a to b."""
    rest_dom = [i for i in range(k) if i != a]
    rest_cod = [i for i in range(k) if i != b]
    rng.shuffle(rest_cod)
    images = [0] * k
    images[a] = b
    for i, j in zip(rest_dom, rest_cod):
        images[i] = j
    return Permutation(tuple(images))


def _random_perm_avoiding_image(rng, k, a, b):
    """Uniform permutation of [k] conditioned on NOT mapping a to b."""
    if k < 2:
        raise UGError("cannot violate a constraint with k=1")
    b2 = int(rng.choice([i for i in range(k) if i != b]))
    return _random_perm_with_image(rng, k, a, b2)


def planted_instance(spec: PlantedSpec):
    """Instance satisfying the planted labeling with value exactly 1.

    The general family draws each edge permutation uniformly conditioned on
    mapping the planted label of u to that of v; the maxlin family uses the
    unique cyclic shift doing so.
    """
    rng = np.random.default_rng(spec.seed)
    planted = np.asarray(spec.planted, dtype=np.int64)
    edges = []
    for entry in spec.skeleton:
        u, v = int(entry[0]), int(entry[1])
        w = float(entry[2]) if len(entry) > 2 else 1.0
        a, b = int(planted[u]), int(planted[v])
        if spec.constraint_family == "maxlin":
            perm = Permutation.shift(spec.k, (a - b) % spec.k)
        else:
            perm = _random_perm_with_image(rng, spec.k, a, b)
        edges.append(UGEdge(u, v, w, perm))
    inst = UGInstance.create(spec.n, spec.k, edges)
    return inst, planted


def perturb(inst: UGInstance, planted, eps, seed=0, constraint_family="general-permutation"):
    """Adversarial epsilon-perturbation of a perfectly satisfiable instance.

    Picks edges in seeded random order until their cumulative weight first
    reaches eps * total_weight, and rewrites each picked constraint to
    violate the planted pair.  The maxlin family rewrites shifts to wrong
    shifts so the result stays a group-difference instance.
    """
    if not (0 <= eps < 1):
        raise UGError(f"eps must be in [0,1), got {eps}")
    planted = np.asarray(planted, dtype=np.int64)
    if value(inst, planted) != 1.0:
        raise UGError("perturb requires the planted labeling to satisfy everything")
    if eps == 0:
        return inst
    if inst.k < 2:
        raise UGError("cannot violate constraints with k=1")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(inst.edges))
    target = eps * inst.total_weight
    chosen = set()
    cum = 0.0
    for idx in order:
        if cum >= target:
            break
        chosen.add(int(idx))
        cum += inst.edges[idx].weight
    new_edges = []
    for i, e in enumerate(inst.edges):
        if i in chosen:
            a, b = int(planted[e.u]), int(planted[e.v])
            if constraint_family == "maxlin":
                c = (a - b) % inst.k
                c2 = int(rng.choice([x for x in range(inst.k) if x != c]))
                perm = Permutation.shift(inst.k, c2)
            else:
                perm = _random_perm_avoiding_image(rng, inst.k, a, b)
            new_edges.append(UGEdge(e.u, e.v, e.weight, perm))
        else:
            new_edges.append(e)
    return UGInstance(inst.n, inst.k, tuple(new_edges), inst.scale)


def random_regular_graph(n, d, seed=0, max_tries=10000):
    """Simple d-regular graph by the pairing model with rejection of loops
    and multi-edges.  Returns (edge list, second adjacency eigenvalue);
    expansion is measured, never assumed.
    """
    if (n * d) % 2 != 0:
        raise UGError("n*d must be even")
    if not 0 <= d < n:
        raise UGError("need 0 <= d < n")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        stubs = np.repeat(np.arange(n), d)
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        edges = set()
        ok = True
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v:
                ok = False
                break
            key = (min(u, v), max(u, v))
            if key in edges:
                ok = False
                break
            edges.add(key)
        if ok:
            edge_list = sorted(edges)
            A = np.zeros((n, n))
            for u, v in edge_list:
                A[u, v] = A[v, u] = 1.0
            vals = np.linalg.eigvalsh(A)
            lambda2 = float(np.sort(vals)[::-1][1]) if n > 1 else 0.0
            return edge_list, lambda2
    raise UGError(f"pairing model failed {max_tries} times for n={n}, d={d}")


def planted_regular_instance(n, d, k, seed=0, constraint_family="general-permutation"):
    """Convenience: planted instance on a fresh random d-regular skeleton.

    Returns (instance, planted labeling, measured second eigenvalue of the
    skeleton adjacency).
    """
    skeleton, lambda2 = random_regular_graph(n, d, seed=seed)
    rng = np.random.default_rng(seed + 1)
    planted = rng.integers(0, k, size=n)
    inst, planted = planted_instance(
        PlantedSpec(n, k, skeleton, planted, constraint_family, seed + 2)
    )
    return inst, planted, lambda2


# ---------------------------------------------------------------------------
# Walsh-Hadamard transform and Cayley spectra over F_2^n
# ---------------------------------------------------------------------------


@dataclass
class FourierSpectrum:
    """values[omega] = sum_x f(x) * (-1)^<omega, x>; exactly the adjacency
    eigenvalue of the Cayley graph with weight function f for the character
    indexed by omega."""

    group_dim: int
    values: np.ndarray


def walsh_hadamard_spectrum(f) -> FourierSpectrum:
    """Unnormalized fast Walsh-Hadamard transform, in place on a copy."""
    a = np.asarray(f, dtype=np.float64).copy()
    N = len(a)
    if N == 0 or (N & (N - 1)) != 0:
        raise UGError(f"length {N} is not a power of two")
    h = 1
    while h < N:
        a = a.reshape(-1, 2, h)
        x, y = a[:, 0, :].copy(), a[:, 1, :].copy()
        a[:, 0, :] = x + y
        a[:, 1, :] = x - y
        a = a.reshape(N)
        h *= 2
    return FourierSpectrum(group_dim=int(np.log2(N)), values=a)


def cayley_matrix(f) -> np.ndarray:
    """Dense adjacency matrix of the Cayley graph of F_2^n with weight
    function f: entry (x, y) = f(x ^ y)."""
    f = np.asarray(f, dtype=np.float64)
    N = len(f)
    idx = np.arange(N)
    return f[idx[:, None] ^ idx[None, :]]


# ---------------------------------------------------------------------------
# The Khot-Vishnoi instance
# ---------------------------------------------------------------------------


@dataclass
class KVSpec:
    """kappa is the log of the alphabet: n = 2^kappa labels / hypercube
    dimension, N = 2^n hypercube vertices, m = N/n constraint-graph cosets."""

    kappa: int
    eps: float

    def __post_init__(self):
        if self.kappa < 1:
            raise UGError("kappa must be >= 1")
        if not (0 < self.eps < 0.5):
            raise UGError("eps must be in (0, 1/2)")

    @property
    def n(self):
        return 2**self.kappa

    @property
    def N(self):
        return 2**self.n

    @property
    def m(self):
        return self.N // self.n


def _parity(x):
    return bin(x).count("1") & 1


def hadamard_code(kappa) -> np.ndarray:
    """The n = 2^kappa Hadamard codewords as n-bit integers.

    Codeword y has bit x equal to the parity of AND(x, y), with x enumerated
    as kappa-bit integers little-endian.  This bit-position convention pins
    the constraint orientation; the label-extended equivalence test is
    sensitive to it.
    """
    n = 2**kappa
    code = np.zeros(n, dtype=np.int64)
    for y in range(n):
        h = 0
        for x in range(n):
            if _parity(x & y):
                h |= 1 << x
        code[y] = h
    return code


def _kv_weight_table(spec: KVSpec) -> np.ndarray:
    """wt[z] = eps^|z| (1-eps)^(n-|z|) for |z| = 0..n."""
    n = spec.n
    r = np.arange(n + 1)
    return spec.eps**r * (1 - spec.eps) ** (n - r)


def kv_cosets(spec: KVSpec):
    """(representatives, coset index of every hypercube vertex).

    Representative of a coset of the Hadamard code is its lexicographically
    smallest member.
    """
    H = hadamard_code(spec.kappa)
    N = spec.N
    coset_of = np.full(N, -1, dtype=np.int64)
    reps = []
    for x in range(N):
        if coset_of[x] >= 0:
            continue
        members = x ^ H
        rep_index = len(reps)
        reps.append(int(members.min()))
        coset_of[members] = rep_index
    return np.array(reps, dtype=np.int64), coset_of


def kv_constraint_graph(spec: KVSpec):
    """(coset representatives, m x m weight matrix A) of the KV constraint
    graph; A[i, j] sums eps^|..| (1-eps)^(n-|..|) over all H x H pairs."""
    if spec.kappa > 3:
        raise UGError("kv_constraint_graph materializes only up to kappa=3")
    reps, _ = kv_cosets(spec)
    H = hadamard_code(spec.kappa)
    wt = _kv_weight_table(spec)
    m, n = spec.m, spec.n
    A = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            # sum over h1, h2 collapses to n * sum over h of the coset diff
            diffs = reps[i] ^ reps[j] ^ H
            hw = np.array([bin(int(z)).count("1") for z in diffs])
            A[i, j] = n * wt[hw].sum()
    return reps, A


def kv_instance(spec: KVSpec) -> UGInstance:
    """The KV Unique Game: vertices are the m cosets, alphabet k = n with
    labels identified with {0,1}^kappa, constraints are XOR shifts.

    For every coset pair (i <= j) and every ordered codeword pair (s, t),
    an edge of weight eps^|p_i + h_s + p_j + h_t| (1-eps)^(n - |..|) with
    permutation x -> x XOR (s XOR t) is emitted.  Self-loop blocks then
    reproduce the closed-form perturbed-hypercube matrix exactly.
    """
    if spec.kappa > 3:
        raise UGError("kv_instance materializes only up to kappa=3")
    reps, _ = kv_cosets(spec)
    H = hadamard_code(spec.kappa)
    wt = _kv_weight_table(spec)
    m, n = spec.m, spec.n
    shift_perms = [Permutation(tuple(x ^ c for x in range(n))) for c in range(n)]
    edges = []
    for i in range(m):
        for j in range(i, m):
            base = reps[i] ^ reps[j]
            for s in range(n):
                for t in range(n):
                    z = int(base ^ H[s] ^ H[t])
                    w = wt[bin(z).count("1")]
                    edges.append(UGEdge(i, j, float(w), shift_perms[s ^ t]))
    return UGInstance.create(m, n, edges)


def kv_label_extended(spec: KVSpec) -> np.ndarray:
    """Closed-form label-extended matrix: the eps-perturbed hypercube on
    2^n vertices, entry (u, v) = n * eps^|u^v| (1-eps)^(n-|u^v|)."""
    if spec.n > 12:
        raise UGError("kv_label_extended materializes only up to n=12")
    wt = _kv_weight_table(spec)
    N = spec.N
    idx = np.arange(N)
    hw = np.array([bin(int(z)).count("1") for z in range(N)])
    return symmetrize(spec.n * wt[hw[idx[:, None] ^ idx[None, :]]])


def kv_vertex_bijection(spec: KVSpec) -> np.ndarray:
    """Map (coset i, label y) -> hypercube vertex p_i XOR h_y, as a length
    m*n index array into the closed-form matrix."""
    reps, _ = kv_cosets(spec)
    H = hadamard_code(spec.kappa)
    m, n = spec.m, spec.n
    out = np.empty(m * n, dtype=np.int64)
    for i in range(m):
        out[i * n : (i + 1) * n] = reps[i] ^ H
    return out


def kv_spectrum(spec: KVSpec):
    """Closed-form spectrum of the KV label-extended graph:
    [(n*(1-2*eps)^r, C(n, r)) for r = 0..n]."""
    n = spec.n
    return [(n * (1 - 2 * spec.eps) ** r, comb(n, r)) for r in range(n + 1)]


def kv_eigenspace_dimension(spec: KVSpec, gamma) -> int:
    """Number of closed-form eigenvalues >= (1-gamma) * n."""
    if not (0 < gamma <= 1):
        raise UGError("gamma must be in (0, 1]")
    n = spec.n
    cut = 1 - gamma
    return sum(comb(n, r) for r in range(n + 1) if (1 - 2 * spec.eps) ** r >= cut)
