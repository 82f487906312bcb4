"""Problem builders: min-max two-way clustering and post-hoc constraint filtering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import BOTTOM, PairwiseProblem, SolutionSet


@dataclass(frozen=True, eq=False)
class DissimilarityMatrix:
    r: np.ndarray

    def __post_init__(self) -> None:
        r = np.array(self.r, dtype=float)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError(f"dissimilarity must be square, got shape {r.shape}")
        if not np.array_equal(r, r.T):
            raise ValueError("dissimilarity must be symmetric")
        if (np.diag(r) != BOTTOM).any():
            raise ValueError("dissimilarity diagonal must be BOTTOM")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @classmethod
    def from_upper(cls, n: int, values: dict) -> DissimilarityMatrix:
        """From ``{(s, t): r}``; unlisted pairs are BOTTOM."""
        r = np.full((n, n), BOTTOM)
        for (s, t), w in values.items():
            r[s, t] = r[t, s] = w
        return cls(r)

    @property
    def n(self) -> int:
        return self.r.shape[0]


def clustering_to_problem(m: DissimilarityMatrix) -> PairwiseProblem:
    """Binary labeling whose objective is the larger of the two within-cluster diameters."""
    n = m.n
    phi = np.full((n, n, 2, 2), BOTTOM)
    phi[:, :, 0, 0] = m.r
    phi[:, :, 1, 1] = m.r
    return PairwiseProblem(n, 2, phi)


def partition_quality(m: DissimilarityMatrix, first, second) -> float:
    """``max`` of the within-cluster maxima of ``r``; BOTTOM for singletons/empty clusters."""
    worst = BOTTOM
    for block in (sorted(first), sorted(second)):
        if len(block) > 1:
            worst = max(worst, float(m.r[np.ix_(block, block)].max()))
    return worst


def labeling_to_partition(x) -> tuple[set[int], set[int]]:
    first, second = set(), set()
    for obj, label in enumerate(x):
        if label == 0:
            first.add(obj)
        elif label == 1:
            second.add(obj)
        else:
            raise ValueError(f"object {obj} has non-binary label {label}")
    return first, second


@dataclass(frozen=True)
class LabelCountConstraint:
    """Label ``label`` may be used at most ``max_count`` times."""

    label: int
    max_count: int

    def __call__(self, x) -> bool:
        return sum(1 for v in x if v == self.label) <= self.max_count


@dataclass(frozen=True)
class FilterResult:
    labeling: tuple[int, ...] | None
    value: float | None
    rank: int | None

    @property
    def certified(self) -> bool:
        """A labeling passed, so it is the best labeling that satisfies the predicate."""
        return self.labeling is not None


def filter_dbest(sol: SolutionSet, pred: Callable[[tuple[int, ...]], bool]) -> FilterResult:
    """First labeling of an accepted d-best list that satisfies ``pred``.

    Every labeling outside the list is at least as bad as all labellings in
    it, so a hit is optimal among those satisfying ``pred``.  No hit means the
    constrained problem stays unsolved at this d; it never yields a wrong answer.
    """
    if not sol.accepted:
        raise ValueError("cannot filter a declined solution")
    for rank, (x, w) in enumerate(sol.labellings, start=1):
        if pred(x):
            return FilterResult(x, w, rank)
    return FilterResult(None, None, None)


__all__ = [
    "DissimilarityMatrix",
    "clustering_to_problem",
    "partition_quality",
    "labeling_to_partition",
    "LabelCountConstraint",
    "FilterResult",
    "filter_dbest",
]
