"""d-best labellings of min-max labeling problems: max-aggregated constraint tables, minimized."""

from .core import (
    BOTTOM,
    TOP,
    Decline,
    GeneralProblem,
    NonUniformOperator,
    PairwiseProblem,
    ScopeTable,
    SolutionSet,
    Status,
    apply_operator,
    counting,
    median_operator,
    objective,
    objective_general,
    objective_pairwise,
    validate,
)
from .dbest import RankedItem, argmind
from .reduce import ReduceOutcome, Witness, reduce_order
from .solver import SolverConfig, solve
from .transform import equivalent_transform

__version__ = "0.1.0"

__all__ = [
    "BOTTOM",
    "TOP",
    "Decline",
    "GeneralProblem",
    "NonUniformOperator",
    "PairwiseProblem",
    "ScopeTable",
    "SolutionSet",
    "Status",
    "apply_operator",
    "counting",
    "median_operator",
    "objective",
    "objective_general",
    "objective_pairwise",
    "validate",
    "RankedItem",
    "argmind",
    "ReduceOutcome",
    "Witness",
    "reduce_order",
    "SolverConfig",
    "solve",
    "equivalent_transform",
]
