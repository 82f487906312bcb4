"""
When the solver says no
=======================

The solver removes objects one at a time.  Before extending a partial answer
by the removed object it checks that no extension could have been cheaper
than something it kept.  If that check fails it declines rather than guess.

With the star-to-pair transformation switched off (greedy mode) this happens
easily; with it switched on it never happens when the problem has a majority
polymorphism.
"""

import numpy as np

from minimax_labeling import PairwiseProblem, SolverConfig, solve
from minimax_labeling.oracle import find_majority_polymorphism

# object 2 is expensive (5) whenever object 0 takes label 0
star = PairwiseProblem.from_pairs(
    3, 2, {(0, 1): np.zeros((2, 2)), (0, 2): [[5, 5], [0, 0]], (1, 2): np.zeros((2, 2))}
)
greedy = solve(star, SolverConfig(use_equivalent_transform=False))
print("greedy:", greedy.status.value, greedy.decline)
print("with transform:", solve(star).labellings)

# random ternary problems: declines only happen without a majority polymorphism
rng = np.random.default_rng(0)
tally = {"accepted": 0, "declined, no polymorphism": 0, "declined with polymorphism": 0}
for _ in range(150):
    phi = rng.integers(0, 3, size=(4, 4, 3, 3)).astype(float)
    p = PairwiseProblem(4, 3, phi)
    sol = solve(p, SolverConfig(d=2))
    if sol.accepted:
        tally["accepted"] += 1
    elif find_majority_polymorphism(p) is None:
        tally["declined, no polymorphism"] += 1
    else:
        tally["declined with polymorphism"] += 1
print(tally)
