"""Equivalent transformation of a pairwise problem around a pivot object.

The star of pairwise functions through the pivot ``t`` is projected onto every
pair of the remaining objects (star-to-simplex) and the projections are merged
into the pairwise functions on that pair.  The objective never changes; under
a majority polymorphism the transformed functions on the remaining objects
additionally give the exact projection of the objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BOTTOM, PairwiseProblem, reduce_cost, tally


@dataclass(frozen=True, eq=False)
class PivotTransform:
    pivot: int
    others: tuple[int, ...]
    q: np.ndarray
    psi: np.ndarray  # (s, s, K, K) over ``others``; diagonal is BOTTOM


def star_floor(star: np.ndarray) -> np.ndarray:
    """``q(k) = max_i min_x star[i, k, x]`` for a star ``(s, K, K)`` indexed ``[i, k, x_i]``."""
    if star.shape[0] == 0:
        return np.full(star.shape[1], BOTTOM)
    inner = star.min(axis=2)
    tally("transform.q", reduce_cost(star.shape, (2,)) + reduce_cost(inner.shape, (0,)))
    return inner.max(axis=0)


def star_to_simplex_entry(phi_ti, phi_tj, q, x_i: int, x_j: int) -> float:
    """``min_k max{phi_ti[k, x_i], phi_tj[k, x_j], q[k]}``; matrices are indexed by pivot label first."""
    phi_ti, phi_tj, q = np.asarray(phi_ti, float), np.asarray(phi_tj, float), np.asarray(q, float)
    return float(np.maximum(np.maximum(phi_ti[:, x_i], phi_tj[:, x_j]), q).min())


def star_to_simplex(star: np.ndarray, q: np.ndarray | None = None) -> np.ndarray:
    """All pair projections of a star objective at once.

    ``star[i, k, x]`` is the weight of pivot label ``k`` with label ``x`` on the
    i-th leaf.  Returns ``psi[i, j, x, y]`` for every ordered leaf pair, with
    BOTTOM on the diagonal.
    """
    s = star.shape[0]
    if q is None:
        q = star_floor(star)
    a = np.maximum(star[:, None, :, :, None], star[None, :, :, None, :])  # [i, j, k, x, y]
    np.maximum(a, q[None, None, :, None, None], out=a)
    psi = a.min(axis=2)
    tally("transform.psi", 2 * a.size + reduce_cost(a.shape, (2,)))
    idx = np.arange(s)
    psi[idx, idx] = BOTTOM
    return psi


def pivot_transform(p: PairwiseProblem, t: int) -> PivotTransform:
    if not 0 <= t < p.num_objects:
        raise ValueError(f"pivot {t} out of range for {p.num_objects} objects")
    others = tuple(i for i in range(p.num_objects) if i != t)
    star = p.phi[t][list(others)]  # [i, k, x_i] = phi_ti(k, x_i)
    q = star_floor(star)
    return PivotTransform(t, others, q, star_to_simplex(star, q))


def transform_in_place(phi: np.ndarray, t: int, others: list[int]) -> None:
    """Apply the transformation to a writable dense array restricted to ``others``."""
    if len(others) < 2:
        return
    idx = np.asarray(others)
    star = phi[t, idx]
    psi = star_to_simplex(star)
    block = phi[np.ix_(idx, idx)]
    np.maximum(block, psi, out=block)
    tally("transform.omega", block.size)
    phi[np.ix_(idx, idx)] = block


def equivalent_transform(p: PairwiseProblem, t: int) -> PairwiseProblem:
    """Problem with the same objective whose pairs away from ``t`` absorb the star projection.

    Pairs ``(i, j)`` not touching ``t`` become ``max(phi_ij, psi_ij)``; pairs
    through ``t`` are copied.  Needs at least three objects.
    """
    if not 0 <= t < p.num_objects:
        raise ValueError(f"pivot {t} out of range for {p.num_objects} objects")
    if p.num_objects < 3:
        raise ValueError("equivalent_transform needs at least three objects")
    phi = np.array(p.phi)
    transform_in_place(phi, t, [i for i in range(p.num_objects) if i != t])
    return PairwiseProblem(p.num_objects, p.num_labels, phi)
