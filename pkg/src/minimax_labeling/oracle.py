"""Exhaustive reference computations for small instances.

Everything here enumerates: all labellings, all triples of scope labellings,
or (for the polymorphism search) all ternary tables consistent with the
majority identities.  Budgets are explicit and exceeding one raises
``BudgetExceeded`` instead of running for hours.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    GeneralProblem,
    NonUniformOperator,
    PairwiseProblem,
    ScopeTable,
    SolutionSet,
    Status,
    all_labelings,
    median_operator,
    objective_batch,
    pairwise_to_general,
)

DEFAULT_BUDGET = 1_048_576


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_enumeration: int = DEFAULT_BUDGET

    def check(self, needed: int, what: str) -> None:
        if needed > self.max_enumeration:
            raise BudgetExceeded(f"{what} needs {needed} steps, budget is {self.max_enumeration}")


def _budget(budget) -> OracleBudget:
    if budget is None:
        return OracleBudget()
    if isinstance(budget, OracleBudget):
        return budget
    return OracleBudget(int(budget))


def brute_force_dbest(p: GeneralProblem | PairwiseProblem, d: int, budget=None) -> SolutionSet:
    if d < 1:
        raise ValueError(f"d must be a positive integer, got {d}")
    _budget(budget).check(p.num_labels**p.num_objects, "labeling enumeration")
    xs = all_labelings(p.num_objects, p.num_labels)
    vals = objective_batch(p, xs)
    # rows are already lexicographic, so a stable sort realizes the tie-break
    top = np.argsort(vals, kind="stable")[:d]
    return SolutionSet(
        Status.ACCEPTED,
        min(d, len(xs)),
        tuple((tuple(int(v) for v in xs[r]), float(vals[r])) for r in top),
    )


def _scope_tables(p: GeneralProblem | PairwiseProblem) -> list[ScopeTable]:
    if isinstance(p, PairwiseProblem):
        p = pairwise_to_general(p)
    return [t for t in p.tables if t.values.size and t.values.min() != t.values.max()]


def _triple_indices(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return tuple(g.reshape(-1) for g in np.indices((m, m, m)))


def function_is_invariant(values: np.ndarray, op: NonUniformOperator, objects) -> bool:
    """Whether ``op`` never lifts ``values`` above the max of its three arguments."""
    n = values.ndim
    k = op.num_labels
    labs = all_labelings(n, k)
    flat = values.reshape(-1)
    ix, iy, iz = _triple_indices(len(labs))
    idx = np.zeros(len(ix), dtype=np.int64)
    for a, obj in enumerate(objects):
        col = op.tables[obj][labs[ix, a], labs[iy, a], labs[iz, a]]
        idx = idx * k + col
    bound = np.maximum(np.maximum(flat[ix], flat[iy]), flat[iz])
    return bool((flat[idx] <= bound).all())


def is_polymorphism(p: GeneralProblem | PairwiseProblem, op: NonUniformOperator, budget=None) -> bool:
    """Exhaustive check over every scope and every triple of scope labellings."""
    if op.num_objects != p.num_objects or op.num_labels != p.num_labels:
        raise ValueError("operator dimensions do not match the problem")
    tables = _scope_tables(p)
    _budget(budget).check(sum(t.values.size**3 for t in tables), "triple enumeration")
    return all(function_is_invariant(t.values, op, t.scope) for t in tables)


def find_majority_polymorphism(
    p: GeneralProblem | PairwiseProblem, budget=None
) -> NonUniformOperator | None:
    """Some non-uniform majority operator preserving ``p``, or None if there is none.

    Exponential backtracking over the free cells ``p_i(a, b, c)`` with pairwise
    distinct ``a, b, c``; every other cell is fixed by the majority identities.
    The median is tried first.  ``budget`` caps the enumerated triples plus the
    search nodes visited.
    """
    budget = _budget(budget)
    n, k = p.num_objects, p.num_labels
    tables = _scope_tables(p)
    enum_cost = sum(t.values.size**3 for t in tables)
    budget.check(enum_cost, "triple enumeration")

    median = median_operator(n, k)
    if is_polymorphism(p, median, budget):
        return median
    if k < 3:
        return None  # majority identities leave nothing free

    distinct = [c for c in itertools.product(range(k), repeat=3) if len(set(c)) == 3]
    cell_of = {}
    for obj in range(n):
        for c in distinct:
            cell_of[obj, c] = len(cell_of)

    constraints = _collect_constraints(tables, k, cell_of)
    if constraints is None:
        return None

    search = _CellSearch(len(cell_of), k, constraints, budget.max_enumeration - enum_cost)
    values = search.run()
    if values is None:
        return None
    ops = np.array(median.tables)
    for (obj, c), cell in cell_of.items():
        ops[(obj,) + c] = values[cell]
    return NonUniformOperator(ops)


def _collect_constraints(tables, k, cell_of):
    """Constraints ``phi_S(v) <= bound`` with ``v`` partly fixed and partly free cells.

    Returns None when some constraint without free cells already fails.
    Triples sharing the same pattern of fixed labels and cells are merged,
    keeping the smallest bound.
    """
    merged: dict[tuple, tuple[ScopeTable, float]] = {}
    for tab in tables:
        n = len(tab.scope)
        labs = all_labelings(n, k)
        flat = tab.values.reshape(-1)
        ix, iy, iz = _triple_indices(len(labs))
        bound = np.maximum(np.maximum(flat[ix], flat[iy]), flat[iz])
        a, b, c = labs[ix], labs[iy], labs[iz]
        fixed = np.where(a == b, a, np.where(b == c, b, np.where(a == c, a, -1)))
        free = fixed < 0
        # a pattern is (tuple of fixed labels or -1, tuple of free triples)
        for r in range(len(ix)):
            pattern = []
            for pos, obj in enumerate(tab.scope):
                if free[r, pos]:
                    pattern.append(("c", cell_of[obj, (int(a[r, pos]), int(b[r, pos]), int(c[r, pos]))]))
                else:
                    pattern.append(("f", int(fixed[r, pos])))
            key = (id(tab), tuple(pattern))
            old = merged.get(key)
            if old is None or bound[r] < old[1]:
                merged[key] = (tab, float(bound[r]))

    constraints = []
    for (_, pattern), (tab, bound) in merged.items():
        cells = [v for kind, v in pattern if kind == "c"]
        if not cells:
            label = tuple(v for _, v in pattern)
            if tab.values[label] > bound:
                return None
            continue
        constraints.append((pattern, tab.values, bound))
    return constraints


class _CellSearch:
    """Backtracking with forward checking over the free operator cells."""

    def __init__(self, num_cells, k, constraints, budget) -> None:
        self.k = k
        self.constraints = constraints
        self.budget = budget
        self.nodes = 0
        self.by_cell: list[list[int]] = [[] for _ in range(num_cells)]
        for ci, (pattern, _, _) in enumerate(constraints):
            for cell in {v for kind, v in pattern if kind == "c"}:
                self.by_cell[cell].append(ci)
        self.domains = [set(range(k)) for _ in range(num_cells)]
        self.value: list[int | None] = [None] * num_cells

    def _label(self, pattern, override=None):
        out = []
        for kind, v in pattern:
            if kind == "f":
                out.append(v)
            elif override is not None and v == override[0]:
                out.append(override[1])
            else:
                out.append(self.value[v])
        return out

    def _prune(self, cell) -> list[tuple[int, int]] | None:
        """Forward-check the constraints of ``cell``; returns removed (cell, value) or None on wipe-out."""
        removed = []
        for ci in self.by_cell[cell]:
            pattern, table, bound = self.constraints[ci]
            open_cells = {v for kind, v in pattern if kind == "c" and self.value[v] is None}
            if len(open_cells) == 0:
                if table[tuple(self._label(pattern))] > bound:
                    return self._undo(removed)
            elif len(open_cells) == 1:
                (other,) = open_cells
                for val in list(self.domains[other]):
                    if table[tuple(self._label(pattern, (other, val)))] > bound:
                        self.domains[other].discard(val)
                        removed.append((other, val))
                if not self.domains[other]:
                    return self._undo(removed)
        return removed

    def _undo(self, removed):
        for cell, val in removed:
            self.domains[cell].add(val)
        return None

    def run(self) -> list[int] | None:
        return self._assign(0)

    def _assign(self, cell: int) -> list[int] | None:
        if cell == len(self.value):
            return list(self.value)
        for val in sorted(self.domains[cell]):
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(f"majority search exceeded {self.budget} nodes")
            self.value[cell] = val
            removed = self._prune(cell)
            if removed is not None:
                found = self._assign(cell + 1)
                if found is not None:
                    return found
                self._undo(removed)
            self.value[cell] = None
        return None


__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "OracleBudget",
    "brute_force_dbest",
    "function_is_invariant",
    "is_polymorphism",
    "find_majority_polymorphism",
    "median_operator",
]
