"""Exact maxmin strategies for discrete Colonel Blotto games."""

from .best_response import Certificate, best_response_table, best_response_value, certify, certify_maxmin, weight_table
from .experiments import NotApplicable, continuous_value
from .extract import decompose_flow
from .formulation import build_maxmin_lp, constraint_census, starting_basis
from .game import (
    Auctionary,
    GameError,
    GameSpec,
    Marginals,
    MixedStrategy,
    PureStrategy,
    Tabular,
    expected_payoff,
    load_game,
    marginals_of,
)
from .layered import Flow, LayeredGraph, count_long_edges, flow_of_mixed, path_of_pure, pure_of_path
from .lp import StandardLP, solve_lp
from .oracle import matrix_game_value
from .solver import SolveResult, SolverFailure, solve_game

__all__ = [
    "Auctionary", "Certificate", "Flow", "GameError", "GameSpec", "LayeredGraph", "Marginals",
    "MixedStrategy", "NotApplicable", "PureStrategy", "SolveResult", "SolverFailure", "StandardLP",
    "Tabular", "best_response_table", "best_response_value", "build_maxmin_lp", "certify",
    "certify_maxmin", "constraint_census", "continuous_value", "count_long_edges", "decompose_flow",
    "expected_payoff", "flow_of_mixed", "load_game", "marginals_of", "matrix_game_value",
    "path_of_pure", "pure_of_path", "solve_game", "solve_lp", "starting_basis", "weight_table",
]
