import itertools

import numpy as np
import pytest

from minimax_labeling import BOTTOM, SolverConfig, solve
from minimax_labeling.core import objective_pairwise, objective_pairwise_batch, all_labelings
from minimax_labeling.oracle import brute_force_dbest, find_majority_polymorphism
from minimax_labeling.reductions import (
    DissimilarityMatrix,
    LabelCountConstraint,
    clustering_to_problem,
    filter_dbest,
    labeling_to_partition,
    partition_quality,
)

from conftest import random_pairwise


def random_matrix(rng, n, hi=20):
    r = np.triu(rng.integers(0, hi + 1, size=(n, n)).astype(float), 1)
    r = r + r.T
    np.fill_diagonal(r, BOTTOM)
    return DissimilarityMatrix(r)


def test_matrix_validation():
    with pytest.raises(ValueError):
        DissimilarityMatrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        DissimilarityMatrix(np.array([[BOTTOM, 1.0], [2.0, BOTTOM]]))
    with pytest.raises(ValueError):
        DissimilarityMatrix(np.zeros((2, 2)))
    m = DissimilarityMatrix.from_upper(3, {(0, 2): 4.0})
    assert m.n == 3 and m.r[2, 0] == 4 and m.r[0, 1] == BOTTOM


def test_two_points():
    p = clustering_to_problem(DissimilarityMatrix.from_upper(2, {(0, 1): 5.0}))
    assert p.num_labels == 2
    assert p.pair(0, 1).tolist() == [[5, BOTTOM], [BOTTOM, 5]]


def test_all_bottom_is_constant():
    p = clustering_to_problem(DissimilarityMatrix.from_upper(4, {}))
    assert (objective_pairwise_batch(p, all_labelings(4, 2)) == BOTTOM).all()


def test_one_large_entry_is_separated():
    vals = {(s, t): 1.0 for s, t in itertools.combinations(range(4), 2)}
    vals[0, 1] = 9.0
    p = clustering_to_problem(DissimilarityMatrix.from_upper(4, vals))
    sol = solve(p)
    x, w = sol.labellings[0]
    assert x[0] != x[1] and w == 1


def test_partition_helpers():
    assert labeling_to_partition((0, 0, 1)) == ({0, 1}, {2})
    assert labeling_to_partition((0, 0, 0)) == ({0, 1, 2}, set())
    with pytest.raises(ValueError):
        labeling_to_partition((0, 2))


def test_objective_is_partition_quality_exhaustive(rng):
    for n in range(2, 13):
        m = random_matrix(rng, n)
        p = clustering_to_problem(m)
        xs = all_labelings(n, 2)
        vals = objective_pairwise_batch(p, xs)
        step = max(1, len(xs) // 300)  # the full 4096 rows would be slow in pure Python for n = 12
        for x, v in zip(xs[::step], vals[::step]):
            assert v == partition_quality(m, *labeling_to_partition(x))
        complement = objective_pairwise_batch(p, 1 - xs)
        assert np.array_equal(vals, complement)


def test_clustering_has_median_polymorphism(rng):
    for n in range(2, 6):
        p = clustering_to_problem(random_matrix(rng, n))
        assert find_majority_polymorphism(p) is not None


def test_label_count_constraint():
    c = LabelCountConstraint(1, 1)
    assert c((0, 1, 0)) and c((0, 0, 0)) and not c((1, 1, 0))


def test_filter_trivial_predicates(rng):
    p = random_pairwise(rng, 4, 2)
    sol = solve(p, SolverConfig(d=3))
    hit = filter_dbest(sol, lambda x: True)
    assert hit.certified and hit.rank == 1 and hit.labeling == sol.labellings[0][0]
    miss = filter_dbest(sol, lambda x: False)
    assert not miss.certified and miss.labeling is None


def test_filter_rejects_declined():
    from minimax_labeling.core import Decline, SolutionSet, Status

    sol = SolutionSet(Status.DECLINED, 1, decline=Decline(0, (0,), 0.0, 1.0))
    with pytest.raises(ValueError):
        filter_dbest(sol, lambda x: True)


def test_filter_equals_constrained_brute_force(rng):
    pred = LabelCountConstraint(1, 1)
    for _ in range(20):
        p = random_pairwise(rng, 3, 2)
        hit = filter_dbest(solve(p, SolverConfig(d=8)), pred)
        feasible = [(objective_pairwise(p, x), x) for x in itertools.product(range(2), repeat=3) if pred(x)]
        assert hit.certified and hit.value == min(feasible)[0]


def test_filter_hit_is_optimal_among_feasible_for_small_d(rng):
    pred = LabelCountConstraint(0, 2)
    for _ in range(20):
        p = random_pairwise(rng, 5, 2)
        hit = filter_dbest(solve(p, SolverConfig(d=4)), pred)
        if hit.certified:
            full = brute_force_dbest(p, 32)
            best = min(w for x, w in full.labellings if pred(x))
            assert hit.value == best
