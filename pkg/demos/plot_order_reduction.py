"""
From higher-order tables to pairwise ones
=========================================

A table over three or more objects can be replaced by its projections onto
pairs when it equals their max.  If it does not, the reduction refuses and
names one labeling where the pairwise max disagrees.
"""

import itertools

import numpy as np

from minimax_labeling import TOP, GeneralProblem, ScopeTable, reduce_order, solve
from minimax_labeling.core import all_labelings, objective_batch

rng = np.random.default_rng(2)
k = 3

# a table built as the max of three pairwise tables: always reducible
a, b, c = (rng.integers(0, 9, size=(k, k)).astype(float) for _ in range(3))
values = np.maximum(np.maximum(a[:, :, None], b[:, None, :]), c[None, :, :])
g = GeneralProblem(3, k, (ScopeTable((0, 1, 2), values),))
outcome = reduce_order(g)
print("decomposable table declined?", outcome.declined)

xs = all_labelings(3, k)
same = np.array_equal(objective_batch(g, xs), objective_batch(outcome.pairwise, xs))
print("objectives agree on all", len(xs), "labellings:", same)
print("best labeling:", solve(outcome.pairwise).labellings[0])

# even parity over three binary objects: every pair of labels extends to an
# even triple, so all pair projections are flat and their max cannot tell the
# odd triples apart
parity = np.full((2, 2, 2), TOP)
for x in itertools.product((0, 1), repeat=3):
    if sum(x) % 2 == 0:
        parity[x] = 1
w = reduce_order(GeneralProblem(3, 2, (ScopeTable((0, 1, 2), parity),))).witness
print(f"parity declined at labeling {w.labeling}: table {w.value}, pairwise max {w.reconstructed}")
