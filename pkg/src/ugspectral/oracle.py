"""Exact brute-force optimum for small instances.

Deliberately naive ground truth: connected-component decomposition, then
exhaustive enumeration per component (shift-reduced for group-difference
instances, where fixing one vertex's label to 0 loses nothing).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import numeric_config
from .core import UGEdge, UGInstance, UGError, value_batch
from .maxlin import AbelianGroup, MaxLinInstance


class BudgetExceededError(UGError):
    pass


@dataclass
class OracleResult:
    best_value: float
    best_labeling: np.ndarray
    labelings_examined: int
    shift_reduced: bool

    def to_dict(self):
        return {
            "best_value": self.best_value,
            "best_labeling": [int(x) for x in self.best_labeling],
            "labelings_examined": self.labelings_examined,
            "shift_reduced": self.shift_reduced,
        }


def _components(inst: UGInstance):
    parent = list(range(inst.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in inst.edges:
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[ru] = rv
    comps = {}
    for v in range(inst.n):
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def _is_shiftable(inst: UGInstance, group: AbelianGroup | None):
    if group is None:
        group = AbelianGroup.cyclic(inst.k) if inst.k >= 2 else None
    if group is None:
        return None
    try:
        MaxLinInstance.from_instance(inst, group)
    except UGError:
        return None
    return group


def _enumerate_chunks(m, k, chunk=4096):
    """All label tuples of length m in lexicographic order, chunked."""
    total = k**m
    shape = (k,) * m
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        yield np.column_stack(np.unravel_index(idx, shape))


def brute_force(inst: UGInstance, budget=None, group: AbelianGroup | None = None) -> OracleResult:
    """Exact optimum over all labelings (per connected component).

    Group-difference instances are enumerated shift-reduced: the first
    vertex of each component is pinned to label 0.  Pass ``group`` to force
    a specific group; cyclic Z_k is auto-detected otherwise.  Ties break to
    the lexicographically smallest labeling; enumeration stops early when a
    component is perfectly satisfied.
    """
    if budget is None:
        budget = numeric_config().brute_budget
    shift_group = _is_shiftable(inst, group)
    comps = _components(inst)
    reduce_by_one = shift_group is not None
    total_enum = sum(
        inst.k ** (len(c) - 1 if reduce_by_one else len(c)) for c in comps
    )
    if total_enum > budget:
        raise BudgetExceededError(
            f"would enumerate {total_enum} labelings, budget is {budget}"
        )

    best_labeling = np.zeros(inst.n, dtype=np.int64)
    examined = 0
    best_weight = 0.0
    for comp in comps:
        local = {v: i for i, v in enumerate(comp)}
        comp_edges = [
            UGEdge(local[e.u], local[e.v], e.weight, e.perm)
            for e in inst.edges
            if e.u in local
        ]
        if not comp_edges:
            continue
        sub = UGInstance(len(comp), inst.k, tuple(comp_edges))
        comp_weight = sub.total_weight
        m = len(comp) - 1 if reduce_by_one else len(comp)
        comp_best = -1.0
        comp_best_lab = None
        done = False
        for chunk in _enumerate_chunks(m, inst.k) if m > 0 else [np.zeros((1, 0), dtype=np.int64)]:
            if reduce_by_one:
                chunk = np.column_stack([np.zeros(len(chunk), dtype=np.int64), chunk])
            vals = value_batch(sub, chunk)
            examined += len(chunk)
            i = int(np.argmax(vals))
            if vals[i] > comp_best:
                comp_best = float(vals[i])
                comp_best_lab = chunk[i]
            if comp_best == 1.0:
                done = True
            if done:
                break
        best_weight += comp_best * comp_weight
        for v, lab in zip(comp, comp_best_lab):
            best_labeling[v] = lab

    total = inst.total_weight
    return OracleResult(
        best_value=best_weight / total if total > 0 else 1.0,
        best_labeling=best_labeling,
        labelings_examined=examined,
        shift_reduced=reduce_by_one,
    )
