"""Instance and labeling data model for Unique Games.

A Unique Game lives on a weighted constraint graph: each edge carries a
permutation of the alphabet [k], and a labeling satisfies the edge (u, v)
when the permutation maps u's label to v's label.  Edges are stored once in
one orientation; traversal in the reverse direction applies the inverse
permutation.  Multi-edges and self-loops are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class UGError(Exception):
    """Base class for errors raised by this package."""


class InvalidLabelingError(UGError):
    pass


class ParseError(UGError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0, ..., k-1}, stored as its image table."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(i) for i in self.images))
        k = len(self.images)
        if sorted(self.images) != list(range(k)):
            raise UGError(f"not a bijection on [{k}]: {self.images}")

    @property
    def k(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def inverse(self):
        inv = [0] * self.k
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def matrix(self):
        """k x k 0/1 matrix P with P[i, j] = 1 iff the permutation maps i to j."""
        P = np.zeros((self.k, self.k))
        P[np.arange(self.k), self.images] = 1.0
        return P

    @staticmethod
    def identity(k):
        return Permutation(tuple(range(k)))

    @staticmethod
    def shift(k, c):
        """The cyclic map i -> (i - c) mod k, encoding x_u - x_v = c."""
        return Permutation(tuple((i - c) % k for i in range(k)))


@dataclass(frozen=True)
class UGEdge:
    u: int
    v: int
    weight: float
    perm: Permutation

    def __post_init__(self):
        if self.weight < 0:
            raise UGError(f"negative edge weight {self.weight}")

    def reversed(self):
        return UGEdge(self.v, self.u, self.weight, self.perm.inverse())


@dataclass
class UGInstance:
    """A Unique Games instance: n vertices, alphabet size k, weighted
    permutation-constrained edges.  Immutable after construction.

    ``scale`` records the factor weights were divided by on ingest (1.0 when
    no rescaling happened), so reports can recover original totals.
    """

    n: int
    k: int
    edges: tuple[UGEdge, ...]
    scale: float = 1.0

    def __post_init__(self):
        self.edges = tuple(self.edges)
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise UGError(f"edge ({e.u},{e.v}) out of range for n={self.n}")
            if e.perm.k != self.k:
                raise UGError(f"permutation arity {e.perm.k} != k={self.k}")
        if self.edges and self.total_weight <= 0:
            raise UGError("total edge weight must be positive")

    @classmethod
    def create(cls, n, k, edges: Iterable[UGEdge]):
        """Build an instance, rescaling weights by the maximum if it exceeds 1."""
        edges = tuple(edges)
        scale = 1.0
        wmax = max((e.weight for e in edges), default=0.0)
        if wmax > 1.0:
            scale = wmax
            edges = tuple(UGEdge(e.u, e.v, e.weight / scale, e.perm) for e in edges)
        return cls(n, k, edges, scale)

    @property
    def total_weight(self):
        return float(sum(e.weight for e in self.edges))

    def degrees(self):
        """Constraint-graph degrees; self-loop weight counted once."""
        deg = np.zeros(self.n)
        for e in self.edges:
            if e.u == e.v:
                deg[e.u] += e.weight
            else:
                deg[e.u] += e.weight
                deg[e.v] += e.weight
        return deg

    def degree(self, u):
        return float(self.degrees()[u])

    @property
    def average_degree(self):
        return float(self.degrees().mean())

    def is_regular(self, rel_tol=1e-9):
        deg = self.degrees()
        d = deg.mean()
        if d == 0:
            return True
        return bool(np.max(np.abs(deg - d)) <= rel_tol * max(1.0, d))

    @cached_property
    def _arrays(self):
        """(u, v, w, perm_table) as numpy arrays for vectorized evaluation.

        perm_table[e, i] is the image of label i under edge e's permutation.
        """
        E = len(self.edges)
        u = np.fromiter((e.u for e in self.edges), dtype=np.int64, count=E)
        v = np.fromiter((e.v for e in self.edges), dtype=np.int64, count=E)
        w = np.fromiter((e.weight for e in self.edges), dtype=np.float64, count=E)
        perm_table = np.empty((E, self.k), dtype=np.int64)
        for i, e in enumerate(self.edges):
            perm_table[i] = e.perm.images
        return u, v, w, perm_table


def validate_labeling(inst: UGInstance, labels: Sequence[int]) -> np.ndarray:
    L = np.asarray(labels, dtype=np.int64)
    if L.shape != (inst.n,):
        raise InvalidLabelingError(f"labeling length {L.shape} != n={inst.n}")
    if L.size and (L.min() < 0 or L.max() >= inst.k):
        raise InvalidLabelingError(f"label out of range [0, {inst.k})")
    return L


def value(inst: UGInstance, labels: Sequence[int]) -> float:
    """Fraction of total edge weight satisfied by the labeling."""
    L = validate_labeling(inst, labels)
    if not inst.edges:
        return 1.0
    u, v, w, perm_table = inst._arrays
    sat = perm_table[np.arange(len(u)), L[u]] == L[v]
    return float(w[sat].sum() / w.sum())


def value_batch(inst: UGInstance, labels_batch: np.ndarray) -> np.ndarray:
    """Satisfied-weight fractions for a (batch, n) array of labelings.

    Processed in row slices so the (rows x edges) intermediates stay within
    a fixed memory budget even for instances with millions of edges.
    """
    u, v, w, perm_table = inst._arrays
    E = len(u)
    edge_idx = np.arange(E)[None, :]
    total = w.sum()
    out = np.empty(len(labels_batch))
    rows = max(1, 10**7 // max(E, 1))
    for start in range(0, len(labels_batch), rows):
        chunk = labels_batch[start : start + rows]
        sat = perm_table[edge_idx, chunk[:, u]] == chunk[:, v]
        out[start : start + rows] = sat @ w / total
    return out


def characteristic_vector(labels: Sequence[int], k: int, normalized=False) -> np.ndarray:
    """One-hot-per-block vector of a labeling, blocked by vertex.

    Block u holds indices u*k ... u*k + k - 1; the entry at the vertex's
    label is 1 (or 1/sqrt(n) when normalized).
    """
    L = np.asarray(labels, dtype=np.int64)
    n = len(L)
    if L.size and (L.min() < 0 or L.max() >= k):
        raise InvalidLabelingError(f"label out of range [0, {k})")
    y = np.zeros(n * k)
    y[np.arange(n) * k + L] = 1.0 / np.sqrt(n) if normalized else 1.0
    return y


# ---------------------------------------------------------------------------
# Text serialization
#
#   ug <n> <k>
#   <u> <v> <weight> <img_0> ... <img_{k-1}>
#
#   maxlin <n> <k>
#   <u> <v> <weight> <c>          # x_u - x_v = c (mod k)
#
# Lines starting with '#' are comments.  Weights round-trip through decimal
# at 17 significant digits.
# ---------------------------------------------------------------------------


def _fmt_weight(w):
    return format(w, ".17g")


def parse_instance(text: str) -> UGInstance:
    lines = text.splitlines()
    header = None
    header_line = 0
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header = line.split()
        header_line = i
        break
    if header is None:
        raise ParseError("empty input, expected 'ug <n> <k>' or 'maxlin <n> <k>' header")
    if len(header) != 3 or header[0] not in ("ug", "maxlin"):
        raise ParseError("expected 'ug <n> <k>' or 'maxlin <n> <k>'", header_line)
    fmt = header[0]
    try:
        n, k = int(header[1]), int(header[2])
    except ValueError:
        raise ParseError("non-integer n or k in header", header_line)
    if n < 1 or k < 1:
        raise ParseError("n and k must be positive", header_line)

    edges = []
    for i, raw in enumerate(lines, start=1):
        if i <= header_line:
            continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        want = 4 if fmt == "maxlin" else 3 + k
        if len(parts) != want:
            raise ParseError(f"expected {want} fields, got {len(parts)}", i)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise ParseError("malformed edge fields", i)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex index out of range [0, {n})", i)
        if w < 0 or not np.isfinite(w):
            raise ParseError(f"bad weight {parts[2]}", i)
        if fmt == "maxlin":
            try:
                c = int(parts[3])
            except ValueError:
                raise ParseError("malformed shift constant", i)
            if not (0 <= c < k):
                raise ParseError(f"shift constant out of range [0, {k})", i)
            perm = Permutation.shift(k, c)
        else:
            try:
                images = tuple(int(p) for p in parts[3:])
            except ValueError:
                raise ParseError("malformed permutation images", i)
            try:
                perm = Permutation(images)
            except UGError as exc:
                raise ParseError(str(exc), i)
        edges.append(UGEdge(u, v, w, perm))
    return UGInstance.create(n, k, edges)


def serialize_instance(inst: UGInstance) -> str:
    out = [f"ug {inst.n} {inst.k}"]
    for e in inst.edges:
        images = " ".join(str(i) for i in e.perm.images)
        out.append(f"{e.u} {e.v} {_fmt_weight(e.weight)} {images}")
    return "\n".join(out) + "\n"


def load_instance(path) -> UGInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def save_instance(inst: UGInstance, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(inst))
