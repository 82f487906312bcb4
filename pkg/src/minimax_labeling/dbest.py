"""Selection of the d best elements of a weighted collection."""

from __future__ import annotations

import heapq
import math
from typing import Hashable, Iterable, NamedTuple

from .core import tally


class RankedItem(NamedTuple):
    payload: Hashable
    value: float


def argmind(items: Iterable[RankedItem | tuple], d: int) -> list[RankedItem]:
    """Return ``min(d, len(items))`` items none of which is worse than any item left out.

    Ties at the threshold go to the lexicographically smaller payload, and the
    result is sorted by ``(value, payload)``, so the answer does not depend on
    the input order.  Payloads must be pairwise distinct and mutually comparable.
    """
    if d < 1:
        raise ValueError(f"d must be a positive integer, got {d}")
    items = [RankedItem(*it) for it in items]
    n = len(items)
    if n == 0:
        return []
    if d >= n:
        best = sorted(items, key=_key)
        tally("select", n * math.ceil(math.log2(n)) if n > 1 else 0)
    else:
        best = heapq.nsmallest(d, items, key=_key)
        tally("select", n * max(1, math.ceil(math.log2(d + 1))))
    return best


def _key(item: RankedItem):
    return item.value, item.payload
