"""Ranking-problem toolkit: exact linear ordering with alternate optima,
rankability measures, Massey/Colley ratings, instance generators and
canonical JSON model cards."""

from .core import DominanceMatrix, Measures, OptimalSet, Ranking, kendall_tau, rank_vector
from .lop import CostProblem, hillside_problem, k_problem, lop_problem, solve_enumerate

__all__ = [
    "CostProblem",
    "DominanceMatrix",
    "Measures",
    "OptimalSet",
    "Ranking",
    "hillside_problem",
    "k_problem",
    "kendall_tau",
    "lop_problem",
    "rank_vector",
    "solve_enumerate",
]
