import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minimax_labeling import RankedItem, argmind


def test_strictly_smaller_values_win():
    out = argmind([("a", 5), ("b", 3), ("c", 3)], 2)
    assert {it.payload for it in out} == {"b", "c"}


def test_d_at_least_size_returns_everything():
    items = [("a", 5), ("b", 3), ("c", 4)]
    assert sorted(argmind(items, 3)) == sorted(RankedItem(*i) for i in items)
    assert len(argmind(items, 10)) == 3


def test_tie_break_is_lexicographic():
    items = [("p3", 7), ("p1", 2), ("p2", 2), ("p0", 2)]
    out = argmind(items, 2)
    assert [it.payload for it in out] == ["p0", "p1"]
    # every 2-subset has max >= 2, the chosen one attains it
    best = min(max(v for _, v in pair) for pair in itertools.combinations(items, 2))
    assert max(it.value for it in out) == best


def test_d_zero_rejected():
    with pytest.raises(ValueError):
        argmind([("a", 1)], 0)


def test_output_sorted_by_value_then_payload():
    out = argmind([((1, 0), 2.0), ((0, 1), 2.0), ((0, 0), 3.0), ((1, 1), 1.0)], 4)
    assert [it.payload for it in out] == [(1, 1), (0, 1), (1, 0), (0, 0)]


@given(
    st.lists(st.integers(0, 6), min_size=1, max_size=12),
    st.integers(1, 13),
    st.randoms(use_true_random=False),
)
def test_subset_property_cardinality_and_determinism(values, d, rnd):
    items = [(i, v) for i, v in enumerate(values)]
    out = argmind(items, d)
    assert len(out) == min(d, len(items))
    chosen_max = max(it.value for it in out)
    # max over the chosen set is no worse than over any other d-subset
    size = len(out)
    assert all(chosen_max <= max(v for _, v in sub) for sub in itertools.combinations(items, size))
    shuffled = list(items)
    rnd.shuffle(shuffled)
    assert argmind(shuffled, d) == out
