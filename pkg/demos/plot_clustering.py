"""
Two-way clustering with the smallest worst diameter
===================================================

Split points into two groups so that the largest distance inside either group
is as small as possible.  Each point gets a binary label; the pairwise weight
between two points is their distance when they share a label and BOTTOM
otherwise, so the max over all pairs is exactly the worse of the two diameters.
"""

import itertools

import numpy as np

from minimax_labeling import SolverConfig, solve
from minimax_labeling.reductions import (
    DissimilarityMatrix,
    clustering_to_problem,
    labeling_to_partition,
    partition_quality,
)

rng = np.random.default_rng(4)

# two blobs in the plane, five points each
pts = np.vstack([rng.normal(0, 1, size=(5, 2)), rng.normal(6, 1, size=(5, 2))])
dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1)).round(2)
np.fill_diagonal(dist, -np.inf)  # a point is never "far" from itself
m = DissimilarityMatrix(dist)

# the solver returns the d best labellings; labellings come in complementary
# pairs (swap the names of the groups), so d=4 shows two distinct partitions
sol = solve(clustering_to_problem(m), SolverConfig(d=4))
print("status:", sol.status.value)
for rank, (x, w) in enumerate(sol.labellings, start=1):
    first, second = labeling_to_partition(x)
    print(f"{rank}: worst diameter {w:5.2f}  {sorted(first)} | {sorted(second)}")

# cross-check the winner against all 2^(n-1) partitions
n = m.n
best = min(
    partition_quality(m, {0} | {i + 1 for i, b in enumerate(bits) if b}, {i + 1 for i, b in enumerate(bits) if not b})
    for bits in itertools.product((0, 1), repeat=n - 1)
)
print("exhaustive optimum:", best)
assert best == sol.values[0]
