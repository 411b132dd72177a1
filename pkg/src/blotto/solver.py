"""End-to-end maxmin solving: build the LP, solve it, extract and certify a strategy."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from .best_response import Certificate, certify
from .extract import decompose_flow
from .formulation import BlottoLP, build_maxmin_lp, starting_basis
from .game import GameError, GameSpec, Marginals, MixedStrategy, PureStrategy, check_player, marginals_of
from .layered import Flow
from .lp import LPSolution, solve_lp

SOLUTION_TOL = 1e-7


class SolverFailure(RuntimeError):
    """The LP did not reach an optimum (infeasible, unbounded, or stalled)."""


@dataclass(frozen=True, eq=False)
class SolveResult:
    spec: GameSpec
    player: str
    value: float
    flow: Flow
    strategy: MixedStrategy
    marginals: Marginals
    certificate: Certificate
    blp: BlottoLP
    solution: LPSolution
    build_seconds: float
    solve_seconds: float  # wall clock of the LP solve only

    @property
    def support_size(self) -> int:
        return len(self.strategy)


def solve_game(spec: GameSpec, player: str = "A", solver: str = "embedded", **lp_options) -> SolveResult:
    """Maxmin strategy and guaranteed value for ``player``."""
    check_player(player)
    t0 = time.perf_counter()
    blp = build_maxmin_lp(spec, player)
    if solver == "embedded" and "initial_basis" not in lp_options:
        lp_options["initial_basis"] = starting_basis(blp)
    t1 = time.perf_counter()
    sol = solve_lp(blp.lp, solver=solver, **lp_options)
    t2 = time.perf_counter()
    if not sol.optimal:
        raise SolverFailure(f"LP for player {player} ended {sol.status} after {sol.iterations} iterations")

    x = sol.x
    flow = Flow.from_vector(blp.graph, blp.flow_values(x))
    problems = flow.violations(SOLUTION_TOL)
    if problems:
        raise SolverFailure("LP flow is not a unit flow: " + ", ".join(problems[:5]))
    strategy = decompose_flow(flow, spec, player)
    marginals = marginals_of(strategy, spec)
    value = float(x[blp.u_index])
    return SolveResult(
        spec=spec,
        player=player,
        value=value,
        flow=flow,
        strategy=strategy,
        marginals=marginals,
        certificate=certify(value, marginals, spec),
        blp=blp,
        solution=sol,
        build_seconds=t1 - t0,
        solve_seconds=t2 - t1,
    )


# -- strategy files -------------------------------------------------------------


def strategy_document(result: SolveResult) -> dict:
    return {
        "player": result.player,
        "value": result.value,
        "support": [
            {"allocation": list(s.allocation), "probability": p} for s, p in result.strategy.support
        ],
        "marginals": result.marginals.p.tolist(),
        "certificate": result.certificate.to_dict(),
    }


def write_strategy(result: SolveResult, path):
    with open(path, "w") as fh:
        json.dump(strategy_document(result), fh, indent=2)
        fh.write("\n")


@dataclass(frozen=True, eq=False)
class StoredStrategy:
    player: str
    value: float
    strategy: MixedStrategy
    marginals: Marginals
    certificate: dict


def read_strategy(path_or_doc, spec: GameSpec) -> StoredStrategy:
    """Load a strategy file; the marginals are recomputed from the support and cross-checked."""
    if isinstance(path_or_doc, dict):
        doc = path_or_doc
    else:
        with open(path_or_doc) as fh:
            doc = json.load(fh)
    try:
        player = check_player(doc["player"])
        strategy = MixedStrategy(
            tuple((PureStrategy(tuple(e["allocation"]), player), e["probability"]) for e in doc["support"]),
            player,
        )
        value = float(doc["value"])
        stored = np.asarray(doc["marginals"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise GameError(f"malformed strategy file: {exc}") from None
    marginals = marginals_of(strategy, spec)
    if stored.shape != marginals.p.shape or np.max(np.abs(stored - marginals.p)) > SOLUTION_TOL:
        raise GameError("stored marginals disagree with the support")
    return StoredStrategy(player, value, strategy, marginals, doc.get("certificate", {}))
