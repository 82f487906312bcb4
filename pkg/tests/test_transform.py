import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minimax_labeling import BOTTOM, PairwiseProblem, equivalent_transform
from minimax_labeling.core import all_labelings, objective_pairwise_batch, objective_table, project
from minimax_labeling.transform import pivot_transform, star_to_simplex, star_to_simplex_entry

from conftest import random_pairwise


def test_constant_star_collapses():
    c = np.full((3, 3), 4.0)
    q = np.full(3, 4.0)
    for xi, xj in itertools.product(range(3), repeat=2):
        assert star_to_simplex_entry(c, c, q, xi, xj) == 4


def brute_star_projection(stars, m, n, xm, xn):
    """min over the pivot label and every other leaf of the star objective."""
    s, k = len(stars), stars[0].shape[0]
    best = np.inf
    for kt in range(k):
        for rest in itertools.product(range(k), repeat=s):
            if rest[m] != xm or rest[n] != xn:
                continue
            best = min(best, max(stars[i][kt, rest[i]] for i in range(s)))
    return best


def test_two_leaf_example():
    phi_tm = np.array([[1.0, 4.0], [2.0, 0.0]])
    phi_tn = np.array([[3.0, 0.0], [1.0, 5.0]])
    q = np.maximum(phi_tm.min(axis=1), phi_tn.min(axis=1))
    assert q.tolist() == [1, 1]
    assert star_to_simplex_entry(phi_tm, phi_tn, q, 0, 0) == 2
    assert brute_star_projection([phi_tm, phi_tn], 0, 1, 0, 0) == 2


def test_entry_lower_bound(rng):
    for _ in range(50):
        a, b = rng.integers(0, 9, size=(2, 3, 3)).astype(float)
        q = rng.integers(0, 9, size=3).astype(float)
        for xi, xj in itertools.product(range(3), repeat=2):
            assert star_to_simplex_entry(a, b, q, xi, xj) >= max(a[:, xi].min(), b[:, xj].min())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_star_to_simplex_is_exact_projection(seed):
    rng = np.random.default_rng(seed)
    s = int(rng.integers(2, 6))
    k = int(rng.integers(2, 4))
    if k ** (s + 1) > 3000:
        s = 3
    star = rng.integers(0, 6, size=(s, k, k)).astype(float)
    psi = star_to_simplex(star)
    for m, n in itertools.combinations(range(s), 2):
        for xm, xn in itertools.product(range(k), repeat=2):
            assert psi[m, n, xm, xn] == brute_star_projection(list(star), m, n, xm, xn)
    assert (psi[np.arange(s), np.arange(s)] == BOTTOM).all()


def test_q_recomputable(rng):
    p = random_pairwise(rng, 5, 3)
    pt = pivot_transform(p, 2)
    expected = [max(p.pair(2, i)[k].min() for i in pt.others) for k in range(3)]
    assert pt.q.tolist() == expected


def test_empty_star_changes_nothing(rng):
    p = random_pairwise(rng, 4, 3)
    phi = np.array(p.phi)
    phi[3, :] = BOTTOM
    phi[:, 3] = BOTTOM
    p = PairwiseProblem(4, 3, phi)
    assert equivalent_transform(p, 3) == p


def test_three_objects_exhaustive(rng):
    p = random_pairwise(rng, 3, 2)
    xs = all_labelings(3, 2)
    for t in range(3):
        omega = equivalent_transform(p, t)
        assert np.array_equal(objective_pairwise_batch(p, xs), objective_pairwise_batch(omega, xs))


def test_idempotent_on_second_application(rng):
    for _ in range(10):
        p = random_pairwise(rng, 4, 3)
        once = equivalent_transform(p, 1)
        twice = equivalent_transform(once, 1)
        assert twice == once
        assert np.array_equal(objective_table(twice), objective_table(p))


def test_monotone_and_pivot_rows_kept(rng):
    p = random_pairwise(rng, 5, 3)
    omega = equivalent_transform(p, 0)
    assert (omega.phi >= p.phi).all()
    assert np.array_equal(omega.phi[0], p.phi[0])


def test_argument_checks(rng):
    with pytest.raises(ValueError):
        equivalent_transform(random_pairwise(rng, 3, 2), 3)
    with pytest.raises(ValueError):
        equivalent_transform(random_pairwise(rng, 2, 2), 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_equivalence_for_every_pivot(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 7))
    k = int(rng.integers(2, 4))
    if k**n > 4096:
        n = 5
    p = random_pairwise(rng, n, k)
    table = objective_table(p)
    for t in range(n):
        assert np.array_equal(objective_table(equivalent_transform(p, t)), table)


def test_projection_identity_on_median_invariant(rng):
    # binary pairwise problems always have the median as a polymorphism
    for _ in range(20):
        n = int(rng.integers(3, 7))
        p = random_pairwise(rng, n, 2)
        table = objective_table(p)
        for t in range(n):
            omega = equivalent_transform(p, t)
            keep = [i for i in range(n) if i != t]
            restricted = PairwiseProblem(n - 1, 2, omega.phi[np.ix_(keep, keep)])
            assert np.array_equal(project(table, keep), objective_table(restricted))
