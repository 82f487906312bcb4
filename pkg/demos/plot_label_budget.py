"""
Constraints the solver cannot express: filter the d best
========================================================

A global rule such as "label 1 at most once" does not fit into pairwise
tables.  Instead, ask for the d best labellings and keep the first one that
obeys the rule.  Everything not listed is at least as bad as the whole list,
so a hit is optimal among the labellings that obey the rule; a miss only means
d was too small.
"""

import numpy as np

from minimax_labeling import PairwiseProblem, SolverConfig, solve
from minimax_labeling.oracle import brute_force_dbest
from minimax_labeling.reductions import LabelCountConstraint, filter_dbest

rng = np.random.default_rng(11)
n, k = 6, 2
phi = rng.integers(0, 10, size=(n, n, k, k)).astype(float)
problem = PairwiseProblem(n, k, phi)

rule = LabelCountConstraint(label=1, max_count=1)
for d in (1, 4, 16, 64):
    hit = filter_dbest(solve(problem, SolverConfig(d=d)), rule)
    if hit.certified:
        print(f"d={d:2d}: rank {hit.rank} labeling {hit.labeling} value {hit.value}")
    else:
        print(f"d={d:2d}: no labeling in the list obeys the rule")

# the same answer from full enumeration
full = brute_force_dbest(problem, k**n)
print("brute force:", min(w for x, w in full.labellings if rule(x)))
