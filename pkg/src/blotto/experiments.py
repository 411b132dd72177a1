"""Payoff sweeps, scale benchmarks and the continuous-model reference curve."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .formulation import build_maxmin_lp, constraint_census
from .game import GameSpec
from .oracle import make_game
from .solver import solve_game

# (K, A, B, constraints, running time in seconds) as published
TABLE1 = (
    (10, 20, 20, 3595, 3.575),
    (10, 20, 25, 4855, 3.993),
    (10, 20, 30, 6365, 6.695),
    (10, 25, 25, 5295, 8.245),
    (10, 25, 30, 6805, 7.502),
    (10, 30, 30, 7320, 30.955),
    (15, 20, 20, 5065, 14.965),
    (15, 20, 25, 6950, 11.842),
    (15, 20, 30, 9210, 24.196),
    (15, 25, 25, 7440, 46.165),
    (15, 25, 30, 9700, 31.714),
    (15, 30, 30, 10265, 140.776),
    (20, 20, 20, 6535, 46.282),
    (20, 20, 25, 9045, 35.758),
    (20, 20, 30, 12055, 38.507),
    (20, 25, 25, 9585, 98.367),
    (20, 25, 30, 12595, 51.795),
    (20, 30, 30, 13210, 553.288),
)


@dataclass(frozen=True)
class NotApplicable:
    """Marker for parameters outside the continuous formula's validity range."""

    reason: str

    def __bool__(self):
        return False


def continuous_value(K: int, A: float, B: float) -> float | NotApplicable:
    """Equilibrium payoff of the stronger player A in the continuous game with unit weights.

    ``K (1 - B/A)`` for ``2/K <= B/A <= 1``. With two battlefields the same
    expression holds for every ``0 < B/A <= 1``. Anything else is reported as
    not applicable rather than extrapolated.
    """
    if K < 1 or B < 0 or A < B:
        return NotApplicable(f"need K >= 1 and A >= B >= 0, got K={K}, A={A}, B={B}")
    if A == B:
        return 0.0
    ratio = B / A
    low = 0.0 if K == 2 else 2.0 / K
    if ratio < low or (K == 2 and ratio == 0):
        return NotApplicable(f"B/A = {ratio:.4g} is outside [{low:.4g}, 1] for K={K}")
    return K * (1.0 - ratio)


def sweep_game(K: int, A: int, B: int, payoff: str = "auctionary", seed: int = 0) -> GameSpec:
    if payoff == "auctionary":
        return GameSpec.auctionary(K, A, B)
    if payoff == "tabular":
        return make_game(K, A, B, "tabular", seed)
    raise ValueError(f"unknown payoff {payoff!r}")


@dataclass(frozen=True)
class SweepRow:
    K: int
    A: int
    B: int
    value: float
    time_ms: float
    rows: int
    cols: int
    certified: bool

    HEADER = ("K", "A", "B", "value", "time_ms", "rows", "cols")

    def csv_row(self) -> tuple:
        return (self.K, self.A, self.B, repr(self.value), f"{self.time_ms:.3f}", self.rows, self.cols)


def sweep_point(K: int, A: int, B: int, payoff: str = "auctionary", seed: int = 0,
                solver: str = "embedded") -> SweepRow:
    r = solve_game(sweep_game(K, A, B, payoff, seed), "A", solver=solver)
    lp = r.blp.lp
    return SweepRow(K, A, B, r.value, 1000 * r.solve_seconds, lp.num_rows, lp.num_cols, r.certificate.passed)


def _sweep_point(args):
    return sweep_point(*args)


def sweep(K: int, B: int, a_values, payoff: str = "auctionary", seed: int = 0,
          solver: str = "embedded", workers: int = 1):
    """Yield one row per A in ``a_values``, in that order."""
    jobs = [(K, int(A), B, payoff, seed, solver) for A in a_values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(_sweep_point, jobs)
    else:
        for job in jobs:
            yield sweep_point(*job)


@dataclass(frozen=True)
class BenchRow:
    K: int
    A: int
    B: int
    rows_excl_nonneg: int
    rows_total: int
    cols: int
    nonzeros: int
    build_s: float
    solve_s: float
    iterations: int
    value: float
    certified: bool

    HEADER = ("K", "A", "B", "rows_excl_nonneg", "rows_total", "cols", "nonzeros",
              "build_s", "solve_s", "iterations", "value", "certified")

    def csv_row(self) -> tuple:
        return (self.K, self.A, self.B, self.rows_excl_nonneg, self.rows_total, self.cols, self.nonzeros,
                f"{self.build_s:.3f}", f"{self.solve_s:.3f}", self.iterations, repr(self.value),
                int(self.certified))


def bench_point(K: int, A: int, B: int, solver: str = "embedded") -> BenchRow:
    r = solve_game(GameSpec.auctionary(K, A, B), "A", solver=solver)
    c = constraint_census(r.blp)
    return BenchRow(K, A, B, c.rows_excl_nonneg, c.rows_total, c.cols, c.nonzeros,
                    r.build_seconds, r.solve_seconds, r.solution.iterations, r.value, r.certificate.passed)


def _bench_point(args):
    return bench_point(*args)


def bench(triples, solver: str = "embedded", workers: int = 1):
    jobs = [(int(K), int(A), int(B), solver) for K, A, B in triples]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(_bench_point, jobs)
    else:
        for job in jobs:
            yield bench_point(*job)


def census_ratio(K: int, n: int, factor: int = 2, player: str = "A") -> float:
    """Growth of the constraint count when both budgets are multiplied by ``factor``."""
    small = constraint_census(build_maxmin_lp(GameSpec.auctionary(K, n, n), player))
    big = constraint_census(build_maxmin_lp(GameSpec.auctionary(K, factor * n, factor * n), player))
    return big.rows_excl_nonneg / small.rows_excl_nonneg
