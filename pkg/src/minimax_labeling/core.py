"""Value domain, labellings, problem representations and validation.

Weights are plain floats. ``BOTTOM`` and ``TOP`` are ``-inf`` and ``+inf``,
so the (min, max) algebra has exact identities and comparisons never need an
epsilon: min and max only ever select one of their arguments.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

BOTTOM = -math.inf
TOP = math.inf

Labeling = tuple  # tuple[int, ...], one label per object id


def is_weight(w) -> bool:
    """True for any float-convertible value except NaN."""
    try:
        return not math.isnan(float(w))
    except (TypeError, ValueError):
        return False


# ---------------------------------------------------------------------------
# operation counting


class OpCounter:
    """Tally of pairwise min/max operations performed inside a ``counting()`` block."""

    def __init__(self) -> None:
        self.total = 0
        self.by_stage: dict[str, int] = {}

    def add(self, stage: str, n: int) -> None:
        n = int(n)
        self.total += n
        self.by_stage[stage] = self.by_stage.get(stage, 0) + n


_active_counter: contextvars.ContextVar[OpCounter | None] = contextvars.ContextVar(
    "minimax_labeling_counter", default=None
)


@contextlib.contextmanager
def counting() -> Iterator[OpCounter]:
    """Count min/max operations of every solver routine called in the block."""
    counter = OpCounter()
    token = _active_counter.set(counter)
    try:
        yield counter
    finally:
        _active_counter.reset(token)


def tally(stage: str, n: int) -> None:
    counter = _active_counter.get()
    if counter is not None:
        counter.add(stage, n)


def reduce_cost(shape: Sequence[int], axes: Sequence[int]) -> int:
    """Pairwise comparisons spent by a min/max reduction of ``shape`` over ``axes``."""
    size = math.prod(shape)
    kept = size // max(1, math.prod(shape[a] for a in axes))
    return size - kept


# ---------------------------------------------------------------------------
# problem types


@dataclass(frozen=True, eq=False)
class ScopeTable:
    """Complete table of a scope function; ``values[x]`` is the weight of ``x`` in K^S."""

    scope: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "scope", tuple(int(i) for i in self.scope))
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScopeTable):
            return NotImplemented
        return self.scope == other.scope and np.array_equal(self.values, other.values)

    def __getitem__(self, x) -> float:
        return float(self.values[tuple(x)])

    def entries(self) -> Iterator[tuple[tuple[int, ...], float]]:
        """Yield ``(x, w)`` in lexicographic order of ``x``."""
        for x in np.ndindex(*self.values.shape):
            yield x, float(self.values[x])


@dataclass(frozen=True, eq=False)
class GeneralProblem:
    num_objects: int
    num_labels: int
    tables: tuple[ScopeTable, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tables", tuple(self.tables))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GeneralProblem):
            return NotImplemented
        return (
            self.num_objects == other.num_objects
            and self.num_labels == other.num_labels
            and self.tables == other.tables
        )

    @property
    def order(self) -> int:
        return max((len(t.scope) for t in self.tables), default=0)


@dataclass(frozen=True, eq=False)
class PairwiseProblem:
    """Second-order problem stored as a dense ``(T, T, K, K)`` weight array.

    Only the upper triangle ``i < j`` of the input array is read.  The lower
    triangle is mirrored from it (``phi[j, i] = phi[i, j].T``) and the diagonal
    is set to BOTTOM, so symmetry holds by construction.
    """

    num_objects: int
    num_labels: int
    phi: np.ndarray

    def __post_init__(self) -> None:
        n, k = self.num_objects, self.num_labels
        raw = np.asarray(self.phi, dtype=float)
        if raw.shape != (n, n, k, k):
            raise ValueError(f"phi must have shape {(n, n, k, k)}, got {raw.shape}")
        phi = np.full((n, n, k, k), BOTTOM)
        iu, ju = np.triu_indices(n, 1)
        phi[iu, ju] = raw[iu, ju]
        phi[ju, iu] = raw[iu, ju].transpose(0, 2, 1)
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_pairs(cls, num_objects: int, num_labels: int, pairs: dict) -> PairwiseProblem:
        """Build from ``{(i, j): K x K matrix}``; missing pairs are BOTTOM.

        A key with ``i > j`` is read as ``phi_ji`` transposed.
        """
        phi = np.full((num_objects, num_objects, num_labels, num_labels), BOTTOM)
        for (i, j), m in pairs.items():
            m = np.asarray(m, dtype=float)
            if i == j:
                raise ValueError(f"diagonal pair ({i}, {j}) cannot be set")
            if i > j:
                i, j, m = j, i, m.T
            phi[i, j] = np.maximum(phi[i, j], m)
        return cls(num_objects, num_labels, phi)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PairwiseProblem):
            return NotImplemented
        return (
            self.num_objects == other.num_objects
            and self.num_labels == other.num_labels
            and np.array_equal(self.phi, other.phi)
        )

    def pair(self, i: int, j: int) -> np.ndarray:
        return self.phi[i, j]

    def pairs(self) -> Iterator[tuple[int, int]]:
        return itertools.combinations(range(self.num_objects), 2)


class Status(enum.Enum):
    ACCEPTED = "accepted"
    DECLINED = "declined"


@dataclass(frozen=True)
class Decline:
    """Where the solver gave up.

    ``labeling`` assigns ``objects`` (the objects left when ``pivot`` was
    removed); its value there is strictly below the cheapest way to extend it.
    """

    pivot: int
    labeling: Labeling
    restricted_value: float
    extension_cost: float
    objects: tuple[int, ...] = ()


@dataclass(frozen=True)
class SolutionSet:
    status: Status
    d: int
    labellings: tuple[tuple[Labeling, float], ...] = ()
    decline: Decline | None = None

    @property
    def accepted(self) -> bool:
        return self.status is Status.ACCEPTED

    @property
    def values(self) -> list[float]:
        return [w for _, w in self.labellings]

    @property
    def assignments(self) -> list[Labeling]:
        return [x for x, _ in self.labellings]


@dataclass(frozen=True, eq=False)
class NonUniformOperator:
    """Per-object ternary operators; ``tables[i, a, b, c] = p_i(a, b, c)``."""

    tables: np.ndarray

    def __post_init__(self) -> None:
        tables = np.array(self.tables, dtype=np.int64)
        if tables.ndim != 4 or not (tables.shape[1] == tables.shape[2] == tables.shape[3]):
            raise ValueError(f"operator tables must have shape (T, K, K, K), got {tables.shape}")
        tables.setflags(write=False)
        object.__setattr__(self, "tables", tables)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NonUniformOperator):
            return NotImplemented
        return np.array_equal(self.tables, other.tables)

    @property
    def num_objects(self) -> int:
        return self.tables.shape[0]

    @property
    def num_labels(self) -> int:
        return self.tables.shape[1]

    def is_majority(self) -> bool:
        k = self.num_labels
        x, y = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
        p = self.tables
        return bool(
            (p[:, y, x, x] == x).all() and (p[:, x, y, x] == x).all() and (p[:, x, x, y] == x).all()
        )


def median_operator(num_objects: int, num_labels: int) -> NonUniformOperator:
    """Uniform median of three labels under the natural order of 0..K-1."""
    a, b, c = np.meshgrid(*(np.arange(num_labels),) * 3, indexing="ij")
    med = np.median(np.stack([a, b, c]), axis=0).astype(np.int64)
    return NonUniformOperator(np.broadcast_to(med, (num_objects,) + med.shape))


def apply_operator(op: NonUniformOperator, x, y, z, objects: Sequence[int] | None = None) -> Labeling:
    """Apply ``op`` component-wise; ``objects`` names the object of each position.

    Without ``objects`` the labellings are taken to cover objects ``0..len(x)-1``.
    """
    if not len(x) == len(y) == len(z):
        raise ValueError("labellings must have equal length")
    if objects is None:
        objects = range(len(x))
    if len(objects) != len(x):
        raise ValueError("objects must match the labeling length")
    return tuple(int(op.tables[i, a, b, c]) for i, a, b, c in zip(objects, x, y, z))


# ---------------------------------------------------------------------------
# objectives


def _check_labeling(x, num_objects: int, num_labels: int) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64)
    if arr.shape[-1:] != (num_objects,):
        raise ValueError(f"labeling length {arr.shape[-1:]} does not match {num_objects} objects")
    if arr.size and (arr.min() < 0 or arr.max() >= num_labels):
        raise ValueError(f"labels must lie in 0..{num_labels - 1}")
    return arr


def objective_general_batch(p: GeneralProblem, xs) -> np.ndarray:
    """Objective of every row of the ``(N, T)`` label array ``xs``."""
    xs = _check_labeling(xs, p.num_objects, p.num_labels)
    out = np.full(xs.shape[0], BOTTOM)
    for t in p.tables:
        vals = t.values[tuple(xs[:, i] for i in t.scope)]
        np.maximum(out, vals, out=out)
    return out


def objective_general(p: GeneralProblem, x) -> float:
    return float(objective_general_batch(p, [x])[0])


def objective_pairwise_batch(p: PairwiseProblem, xs) -> np.ndarray:
    xs = _check_labeling(xs, p.num_objects, p.num_labels)
    n = p.num_objects
    if n < 2:
        return np.full(xs.shape[0], BOTTOM)
    iu, ju = np.triu_indices(n, 1)
    vals = p.phi[iu, ju, xs[:, iu], xs[:, ju]]
    return vals.max(axis=1)


def objective_pairwise(p: PairwiseProblem, x) -> float:
    return float(objective_pairwise_batch(p, [x])[0])


def objective(p: GeneralProblem | PairwiseProblem, x) -> float:
    if isinstance(p, PairwiseProblem):
        return objective_pairwise(p, x)
    return objective_general(p, x)


def objective_batch(p: GeneralProblem | PairwiseProblem, xs) -> np.ndarray:
    if isinstance(p, PairwiseProblem):
        return objective_pairwise_batch(p, xs)
    return objective_general_batch(p, xs)


def all_labelings(num_objects: int, num_labels: int) -> np.ndarray:
    """Every labeling as a ``(K**T, T)`` array, rows in lexicographic order."""
    if num_objects == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((num_labels,) * num_objects).reshape(num_objects, -1)
    return grids.T.astype(np.int64)


def objective_table(p: GeneralProblem | PairwiseProblem) -> np.ndarray:
    """The whole objective as an array of shape ``(K,) * T``."""
    shape = (p.num_labels,) * p.num_objects
    return objective_batch(p, all_labelings(p.num_objects, p.num_labels)).reshape(shape)


def project(table: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Minimize a full function table over every axis not in ``keep``.

    The result keeps the surviving axes in increasing order.
    """
    drop = tuple(a for a in range(table.ndim) if a not in set(keep))
    if not drop:
        return table.copy()
    return table.min(axis=drop)


# ---------------------------------------------------------------------------
# conversions and validation


def merge_duplicate_scopes(p: GeneralProblem) -> GeneralProblem:
    """Merge tables sharing a scope by pointwise max; scopes come out sorted."""
    merged: dict[tuple[int, ...], np.ndarray] = {}
    for t in p.tables:
        if t.scope in merged:
            merged[t.scope] = np.maximum(merged[t.scope], t.values)
        else:
            merged[t.scope] = t.values
    tables = tuple(ScopeTable(s, merged[s]) for s in sorted(merged, key=lambda s: (len(s), s)))
    return GeneralProblem(p.num_objects, p.num_labels, tables)


def pairwise_to_general(p: PairwiseProblem, keep_bottom: bool = False) -> GeneralProblem:
    """Order-2 GeneralProblem with one scope per pair; all-BOTTOM pairs are dropped by default."""
    tables = []
    for i, j in p.pairs():
        m = p.phi[i, j]
        if keep_bottom or (m != BOTTOM).any():
            tables.append(ScopeTable((i, j), m))
    return GeneralProblem(p.num_objects, p.num_labels, tuple(tables))


def validate(p: GeneralProblem | PairwiseProblem) -> list[str]:
    """Every structural violation found in ``p``; an empty list means valid."""
    errors: list[str] = []
    n, k = p.num_objects, p.num_labels
    if not isinstance(n, (int, np.integer)) or n < 1:
        errors.append(f"num_objects must be a positive integer, got {n!r}")
    if not isinstance(k, (int, np.integer)) or k < 1:
        errors.append(f"num_labels must be a positive integer, got {k!r}")
    if errors:
        return errors

    if isinstance(p, PairwiseProblem):
        phi = p.phi
        if phi.shape != (n, n, k, k):
            errors.append(f"phi has shape {phi.shape}, expected {(n, n, k, k)}")
            return errors
        if np.isnan(phi).any():
            errors.append("phi contains NaN weights")
        if not np.array_equal(phi, phi.transpose(1, 0, 3, 2)):
            errors.append("phi is not symmetric")
        diag = phi[np.arange(n), np.arange(n)]
        if (diag != BOTTOM).any():
            errors.append("diagonal matrices must be BOTTOM")
        return errors

    for idx, t in enumerate(p.tables):
        s = t.scope
        if len(s) == 0:
            errors.append(f"scope {idx}: empty scope")
            continue
        if any(b <= a for a, b in zip(s, s[1:])):
            errors.append(f"scope {idx}: objects {s} not strictly increasing")
        if any(i < 0 or i >= n for i in s):
            errors.append(f"scope {idx}: object id out of range in {s}")
        if t.values.shape != (k,) * len(s):
            have = t.values.size
            errors.append(
                f"scope {idx}: incomplete table ({have} entries, expected {k ** len(s)})"
            )
        elif np.isnan(t.values).any():
            errors.append(f"scope {idx}: incomplete table (NaN entries)")
    return errors


def ensure_valid(p: GeneralProblem | PairwiseProblem) -> None:
    errors = validate(p)
    if errors:
        raise ValueError("invalid problem: " + "; ".join(errors))


def num_labelings(p: GeneralProblem | PairwiseProblem) -> int:
    return p.num_labels ** p.num_objects


__all__ = [
    "BOTTOM",
    "TOP",
    "Labeling",
    "OpCounter",
    "counting",
    "tally",
    "ScopeTable",
    "GeneralProblem",
    "PairwiseProblem",
    "Status",
    "Decline",
    "SolutionSet",
    "NonUniformOperator",
    "median_operator",
    "apply_operator",
    "objective",
    "objective_general",
    "objective_pairwise",
    "objective_batch",
    "objective_general_batch",
    "objective_pairwise_batch",
    "objective_table",
    "all_labelings",
    "project",
    "merge_duplicate_scopes",
    "pairwise_to_general",
    "validate",
    "ensure_valid",
    "num_labelings",
    "is_weight",
]
