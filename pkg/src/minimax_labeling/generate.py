"""Deterministic random instances.

All randomness comes from one ``random.Random(seed)`` (Mersenne Twister,
identical on every platform).  Draws happen in a fixed order:

* weights: ``u = random()``; ``u < p_bottom`` gives BOTTOM, ``u < p_bottom + p_top``
  gives TOP, otherwise ``randint(lo, hi)``.  Table entries are drawn in
  lexicographic order of the scope labeling.
* ``pairwise-complete``: one table per pair ``i < j`` in lexicographic pair order.
* ``random-scopes``: ``count`` scopes; each draws ``sample(range(T), order)``
  (sorted afterwards) and then its table.  Repeated scopes are merged by max.
* ``clustering``: ``r(s, t)`` for ``s < t`` in lexicographic order, ``K = 2``.
* ``invariant``: per object a label permutation (``shuffle`` of ``0..K-1``),
  then per pair ``i < j``: two valley functions (centre ``randint(0, K-1)``,
  base and slope ``randint``), an order penalty ``randint(lo, hi)`` with shift
  ``randint(-1, 1)`` and a coin ``random() < 0.5`` deciding whether the penalty
  is used.  Each such problem is invariant under the median conjugated by the
  per-object permutations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .core import (
    BOTTOM,
    TOP,
    GeneralProblem,
    NonUniformOperator,
    ScopeTable,
    merge_duplicate_scopes,
    median_operator,
    pairwise_to_general,
)
from .reductions import DissimilarityMatrix, clustering_to_problem

FAMILIES = ("pairwise-complete", "random-scopes", "clustering", "invariant")


@dataclass(frozen=True)
class InstanceGenSpec:
    seed: int
    num_objects: int
    num_labels: int = 2
    family: str = "pairwise-complete"
    order: int = 3
    count: int = 4
    lo: int = 0
    hi: int = 9
    p_bottom: float = 0.0
    p_top: float = 0.0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.num_objects < 1 or self.num_labels < 1:
            raise ValueError("num_objects and num_labels must be positive")
        if self.lo > self.hi:
            raise ValueError("lo must not exceed hi")
        if not (0 <= self.p_bottom and 0 <= self.p_top and self.p_bottom + self.p_top <= 1):
            raise ValueError("p_bottom and p_top must be probabilities summing to at most 1")
        if self.family == "random-scopes" and not 1 <= self.order <= self.num_objects:
            raise ValueError("order must lie in 1..num_objects")
        if self.family == "clustering" and self.num_labels != 2:
            raise ValueError("clustering instances have exactly two labels")


def _weight(rng: random.Random, spec: InstanceGenSpec) -> float:
    u = rng.random()
    if u < spec.p_bottom:
        return BOTTOM
    if u < spec.p_bottom + spec.p_top:
        return TOP
    return float(rng.randint(spec.lo, spec.hi))


def _table(rng, spec, scope) -> ScopeTable:
    shape = (spec.num_labels,) * len(scope)
    values = np.array([_weight(rng, spec) for _ in range(int(np.prod(shape)))]).reshape(shape)
    return ScopeTable(tuple(scope), values)


def generate_dissimilarity(spec: InstanceGenSpec) -> DissimilarityMatrix:
    rng = random.Random(spec.seed)
    n = spec.num_objects
    r = np.full((n, n), BOTTOM)
    for s in range(n):
        for t in range(s + 1, n):
            r[s, t] = r[t, s] = _weight(rng, spec)
    return DissimilarityMatrix(r)


def _valley(rng, spec, k) -> np.ndarray:
    centre = rng.randint(0, k - 1)
    base = rng.randint(spec.lo, spec.hi)
    slope = rng.randint(0, max(1, (spec.hi - spec.lo) // 2))
    return np.array([base + slope * abs(a - centre) for a in range(k)], dtype=float)


def invariant_instance(spec: InstanceGenSpec) -> tuple[GeneralProblem, NonUniformOperator]:
    """A pairwise problem together with a majority polymorphism it is known to have."""
    rng = random.Random(spec.seed)
    n, k = spec.num_objects, spec.num_labels
    perms = []
    for _ in range(n):
        perm = list(range(k))
        rng.shuffle(perm)
        perms.append(np.array(perm))
    tables = []
    a, b = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    for i in range(n):
        for j in range(i + 1, n):
            f, g = _valley(rng, spec, k), _valley(rng, spec, k)
            penalty = float(rng.randint(spec.lo, spec.hi))
            shift = rng.randint(-1, 1)
            use_penalty = rng.random() < 0.5
            pa, pb = perms[i][a], perms[j][b]
            m = np.minimum(f[pa], g[pb])
            if use_penalty:
                m = np.maximum(m, np.where(pa > pb + shift, penalty, BOTTOM))
            tables.append(ScopeTable((i, j), m))
    med = median_operator(n, k).tables
    ops = np.empty_like(med)
    for i, perm in enumerate(perms):
        inv = np.argsort(perm)
        # p_i(x, y, z) = perm^-1(median(perm(x), perm(y), perm(z)))
        ops[i] = inv[med[i][np.ix_(perm, perm, perm)]]
    return GeneralProblem(n, k, tuple(tables)), NonUniformOperator(ops)


def generate_instance(spec: InstanceGenSpec) -> GeneralProblem:
    if spec.family == "clustering":
        return pairwise_to_general(clustering_to_problem(generate_dissimilarity(spec)), keep_bottom=True)
    if spec.family == "invariant":
        return invariant_instance(spec)[0]

    rng = random.Random(spec.seed)
    n = spec.num_objects
    if spec.family == "pairwise-complete":
        tables = [_table(rng, spec, (i, j)) for i in range(n) for j in range(i + 1, n)]
    else:
        tables = [_table(rng, spec, sorted(rng.sample(range(n), spec.order))) for _ in range(spec.count)]
    return merge_duplicate_scopes(GeneralProblem(n, spec.num_labels, tuple(tables)))


__all__ = [
    "FAMILIES",
    "InstanceGenSpec",
    "generate_instance",
    "generate_dissimilarity",
    "invariant_instance",
]
