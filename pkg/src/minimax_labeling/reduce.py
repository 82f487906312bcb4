"""Rewriting an arbitrary-order problem as an equivalent pairwise one.

Each scope table is projected onto every pair of its objects, and the table
is accepted only if it equals the max of those pair projections at every
entry.  Accepted projections are merged into the pairwise functions by
pointwise max.  A table that fails the check makes the whole reduction
decline; this can only happen when the problem has no majority polymorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    BOTTOM,
    GeneralProblem,
    PairwiseProblem,
    ScopeTable,
    ensure_valid,
    merge_duplicate_scopes,
    reduce_cost,
    tally,
)


@dataclass(frozen=True)
class Witness:
    """Entry of a scope table that its pair projections fail to reproduce."""

    scope_index: int
    scope: tuple[int, ...]
    labeling: tuple[int, ...]
    value: float
    reconstructed: float


@dataclass(frozen=True)
class ReduceOutcome:
    pairwise: PairwiseProblem | None = None
    witness: Witness | None = None

    @property
    def declined(self) -> bool:
        return self.witness is not None


def project_table_to_pair(tab: ScopeTable, i: int, j: int) -> np.ndarray:
    """Min of the table over all scope objects other than ``i`` and ``j``.

    The result is indexed ``[x_i, x_j]`` in the order the two objects are given.
    """
    if i == j:
        raise ValueError("i and j must differ")
    try:
        a, b = tab.scope.index(i), tab.scope.index(j)
    except ValueError:
        raise ValueError(f"objects {i}, {j} not both in scope {tab.scope}") from None
    values = tab.values
    others = tuple(ax for ax in range(values.ndim) if ax not in (a, b))
    tally("reduce.project", reduce_cost(values.shape, others))
    m = values.min(axis=others) if others else values
    return m if a < b else m.T


def pair_projections(tab: ScopeTable) -> dict[tuple[int, int], np.ndarray]:
    return {(i, j): project_table_to_pair(tab, i, j) for i, j in itertools.combinations(tab.scope, 2)}


def check_reconstruction(
    tab: ScopeTable, projections: dict[tuple[int, int], np.ndarray], scope_index: int = 0
) -> Witness | None:
    """First entry (lexicographic) where the max of the pair projections differs from the table."""
    values = tab.values
    n = values.ndim
    if n < 2:
        return None
    recon = np.full(values.shape, BOTTOM)
    pos = {obj: ax for ax, obj in enumerate(tab.scope)}
    for (i, j), m in projections.items():
        shape = [1] * n
        shape[pos[i]] = shape[pos[j]] = m.shape[0]
        np.maximum(recon, m.reshape(shape), out=recon)
    tally("reduce.check", values.size * len(projections))
    bad = np.argwhere(recon != values)
    if not len(bad):
        return None
    x = tuple(int(v) for v in bad[0])
    return Witness(scope_index, tab.scope, x, float(values[x]), float(recon[x]))


def reduce_order(p: GeneralProblem) -> ReduceOutcome:
    """Pairwise problem with the same objective as ``p``, or the first failing entry.

    Unary tables are folded into the pair of their object with the smallest
    other object id.  Single-object problems have no pairs; for them only an
    all-BOTTOM problem reduces, otherwise solve with ``dbest.argmind`` over K.
    """
    ensure_valid(p)
    p = merge_duplicate_scopes(p)
    n, k = p.num_objects, p.num_labels
    psi = np.full((n, n, k, k), BOTTOM)

    for idx, tab in enumerate(p.tables):
        if len(tab.scope) == 1:
            continue
        projections = pair_projections(tab)
        witness = check_reconstruction(tab, projections, idx)
        if witness is not None:
            return ReduceOutcome(witness=witness)
        for (i, j), m in projections.items():
            np.maximum(psi[i, j], m, out=psi[i, j])
        tally("reduce.merge", k * k * len(projections))

    for tab in p.tables:
        if len(tab.scope) != 1:
            continue
        (i,) = tab.scope
        if n == 1:
            if (tab.values != BOTTOM).any():
                raise ValueError("a single-object problem with a unary table has no pairwise form")
            continue
        j = 1 if i == 0 else 0
        a, b = min(i, j), max(i, j)
        unary = tab.values[:, None] if i == a else tab.values[None, :]
        np.maximum(psi[a, b], unary, out=psi[a, b])
        tally("reduce.merge", k * k)

    return ReduceOutcome(pairwise=PairwiseProblem(n, k, psi))


__all__ = [
    "Witness",
    "ReduceOutcome",
    "project_table_to_pair",
    "pair_projections",
    "check_reconstruction",
    "reduce_order",
]
