"""d-best labellings of a pairwise problem by successive exclusion of objects.

Objects are eliminated one at a time.  Before an object is removed, the star
of pairwise functions through it is projected onto the remaining objects
(``transform.transform_in_place``), which makes the smaller problem's objective
equal to the projection of the full objective whenever the problem has a
majority polymorphism.  The d best labellings of the smaller problem are then
extended by every label of the removed object and the d best extensions kept.

Each extension step is guarded by a check that the best extension of every
kept labeling costs no more than the labeling itself.  If the check fails the
solver declines instead of returning a possibly wrong answer.  With the
transformation disabled the same skeleton is the plain greedy exclusion, which
declines much more often.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    BOTTOM,
    Decline,
    PairwiseProblem,
    SolutionSet,
    Status,
    ensure_valid,
    reduce_cost,
    tally,
)
from .dbest import argmind
from .transform import transform_in_place


@dataclass(frozen=True)
class SolverConfig:
    """``elimination_order`` is a permutation of the object ids; its last entry is removed first.

    ``None`` means ``0..T-1``, i.e. the highest object id goes first.
    """

    d: int = 1
    use_equivalent_transform: bool = True
    elimination_order: Sequence[int] | None = None

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d}")
        if self.elimination_order is not None:
            object.__setattr__(self, "elimination_order", tuple(int(i) for i in self.elimination_order))

    def order_for(self, num_objects: int) -> list[int]:
        if self.elimination_order is None:
            return list(range(num_objects))
        order = list(self.elimination_order)
        if sorted(order) != list(range(num_objects)):
            raise ValueError(f"elimination order {order} is not a permutation of 0..{num_objects - 1}")
        return order


def _select(rows: np.ndarray, values: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    best = argmind(zip(map(tuple, rows.tolist()), values.tolist()), d)
    return (
        np.array([b.payload for b in best], dtype=np.int64).reshape(len(best), rows.shape[1]),
        np.array([b.value for b in best], dtype=float),
    )


def solve_base(p: PairwiseProblem, d: int) -> SolutionSet:
    """Direct answer for one or two objects."""
    if p.num_objects > 2:
        raise ValueError("solve_base handles at most two objects")
    ensure_valid(p)
    k = p.num_labels
    if p.num_objects == 1:
        rows = np.arange(k)[:, None]
        vals = np.full(k, BOTTOM)
    else:
        rows = np.indices((k, k)).reshape(2, -1).T
        vals = p.phi[0, 1].reshape(-1)
    rows, vals = _select(rows, vals, d)
    return _accepted(rows, vals, d)


def _accepted(rows: np.ndarray, vals: np.ndarray, d: int) -> SolutionSet:
    return SolutionSet(
        Status.ACCEPTED,
        d,
        tuple((tuple(int(v) for v in r), float(w)) for r, w in zip(rows, vals)),
    )


def _extension_costs(star: np.ndarray, rows: np.ndarray, others: list[int]) -> np.ndarray:
    """``cost[r, k] = max_i star[i, k, rows[r, others[i]]]``."""
    s = len(others)
    gathered = star[np.arange(s)[None, :], :, rows[:, others]]  # (m, s, K)
    tally("solver.extension", reduce_cost(gathered.shape, (1,)))
    return gathered.max(axis=1)


def safety_check(
    rows: np.ndarray, values: np.ndarray, star: np.ndarray, others: list[int], pivot: int
) -> Decline | None:
    """First kept labeling whose value is strictly below the cheapest cost of extending it.

    ``rows`` are full-length label arrays (entries outside ``others`` ignored),
    ``values`` their objective on the remaining objects and ``star[i, k, x]``
    the pivot's pairwise function with ``others[i]``.
    """
    costs = _extension_costs(star, rows, others)
    best = costs.min(axis=1)
    tally("solver.safety", reduce_cost(costs.shape, (1,)) + len(values))
    bad = np.flatnonzero(values < best)
    if not len(bad):
        return None
    r = bad[0]
    return Decline(
        pivot,
        tuple(int(rows[r, i]) for i in sorted(others)),
        float(values[r]),
        float(best[r]),
        objects=tuple(sorted(others)),
    )


def extend_and_select(
    rows: np.ndarray, values: np.ndarray, star: np.ndarray, others: list[int], pivot: int, d: int
) -> tuple[np.ndarray, np.ndarray]:
    """d best among all extensions of ``rows`` by a label of ``pivot``."""
    m, n = rows.shape
    k = star.shape[1]
    costs = _extension_costs(star, rows, others)
    ext_vals = np.maximum(values[:, None], costs)
    tally("solver.extension", ext_vals.size)
    ext_rows = np.repeat(rows, k, axis=0)
    ext_rows[:, pivot] = np.tile(np.arange(k), m)
    return _select(ext_rows, ext_vals.reshape(-1), d)


def solve(p: PairwiseProblem, config: SolverConfig | None = None) -> SolutionSet:
    """The d best labellings of ``p``, or a decline.

    An accepted answer is always a correct d-best set.  With the equivalent
    transformation enabled the solver never declines on a problem that has a
    majority polymorphism, for any elimination order.
    """
    config = config or SolverConfig()
    ensure_valid(p)
    n, k = p.num_objects, p.num_labels
    d = min(config.d, k**n)
    order = config.order_for(n)
    if n <= 2:
        return solve_base(p, d)

    phi = np.array(p.phi)
    remaining = list(order)
    eliminated: list[tuple[int, list[int]]] = []
    while len(remaining) > 2:
        t = remaining.pop()
        if config.use_equivalent_transform:
            transform_in_place(phi, t, remaining)
        eliminated.append((t, list(remaining)))

    a, b = sorted(remaining)
    pairs = np.indices((k, k)).reshape(2, -1).T
    rows = np.full((k * k, n), -1, dtype=np.int64)
    rows[:, a], rows[:, b] = pairs[:, 0], pairs[:, 1]
    rows, vals = _select(rows, phi[a, b].reshape(-1), d)

    for t, others in reversed(eliminated):
        star = phi[t, others]
        decline = safety_check(rows, vals, star, others, t)
        if decline is not None:
            return SolutionSet(Status.DECLINED, d, decline=decline)
        rows, vals = extend_and_select(rows, vals, star, others, t, d)

    return _accepted(rows, vals, d)


__all__ = ["SolverConfig", "solve", "solve_base", "safety_check", "extend_and_select"]
