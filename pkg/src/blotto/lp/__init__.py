"""Linear-programming core: model, embedded simplex, external adapter, LP-file output."""

from .lpfile import format_lp, write_lp
from .model import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    LPBuilder,
    LPError,
    LPSolution,
    LPStallError,
    StandardLP,
    dense_lp,
)
from .simplex import SimplexSolver, simplex

SOLVERS = ("embedded", "external")


def solve_lp(lp: StandardLP, solver: str = "embedded", **options) -> LPSolution:
    """Solve ``lp`` (a maximisation) and return an :class:`LPSolution`.

    ``solver="embedded"`` runs the built-in two-phase simplex; ``"external"``
    hands the same model to SciPy's HiGHS. Options go to the embedded solver.
    """
    if solver == "embedded":
        return simplex(lp, **options)
    if solver == "external":
        from .external import highs

        return highs(lp)
    raise ValueError(f"unknown solver {solver!r}; choose from {SOLVERS}")


__all__ = [
    "EQ", "GE", "LE", "INFEASIBLE", "OPTIMAL", "UNBOUNDED", "SOLVERS",
    "LPBuilder", "LPError", "LPSolution", "LPStallError", "StandardLP",
    "SimplexSolver", "dense_lp", "format_lp", "simplex", "solve_lp", "write_lp",
]
