"""Brute-force ground truth for small games: enumerate pure strategies, solve the matrix game."""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .game import GameError, GameSpec, MixedStrategy, PureStrategy, Tabular, count_pure_strategies
from .lp import GE, EQ, LPBuilder, solve_lp
from .solver import solve_game

DEFAULT_CAP = 100_000
FAMILIES = ("auctionary-unit", "auctionary-random", "tabular")


def compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All ways to write ``n`` as ``k`` ordered nonnegative parts, lexicographically."""
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def enumerate_pure(spec: GameSpec, player: str, cap: int = DEFAULT_CAP) -> list[PureStrategy]:
    count = count_pure_strategies(spec, player)
    if count > cap:
        raise GameError(f"player {player} has {count} pure strategies, above the cap of {cap}")
    return [PureStrategy(a, player) for a in compositions(spec.budget(player), spec.battlefields)]


def payoff_matrix(spec: GameSpec, cap: int = DEFAULT_CAP) -> tuple[np.ndarray, list, list]:
    """``M[a, b]`` = A's payoff for A's a-th and B's b-th pure strategy."""
    sa, sb = enumerate_pure(spec, "A", cap), enumerate_pure(spec, "B", cap)
    xa = np.array([s.allocation for s in sa])
    xb = np.array([s.allocation for s in sb])
    U = spec.payoff_table()
    M = np.zeros((len(sa), len(sb)))
    for k in range(spec.battlefields):
        M += U[k][xa[:, k][:, None], xb[:, k][None, :]]
    return M, sa, sb


def solve_matrix_game(M: np.ndarray, **lp_options) -> tuple[float, np.ndarray]:
    """Value and optimal row mixture of the zero-sum game where the row player receives ``M``."""
    M = np.asarray(M, dtype=float)
    rows, cols = M.shape
    b = LPBuilder()
    x0 = b.add_vars(rows, lower=0.0)
    v = b.add_vars(1, lower=-np.inf, obj=1.0)
    for j in range(cols):
        nz = np.flatnonzero(M[:, j])
        b.add_row([x0 + i for i in nz] + [v], list(M[nz, j]) + [-1.0], GE, 0.0)
    b.add_row(list(range(x0, x0 + rows)), [1.0] * rows, EQ, 1.0)
    sol = solve_lp(b.build(), **lp_options)
    if not sol.optimal:
        raise RuntimeError(f"matrix game LP ended {sol.status}")
    return float(sol.x[v]), sol.x[x0:x0 + rows]


def mixture(strategies: list, probs: np.ndarray, owner: str, tol: float = 1e-12) -> MixedStrategy:
    keep = np.flatnonzero(probs > tol)
    total = math.fsum(probs[keep])
    return MixedStrategy(tuple((strategies[i], probs[i] / total) for i in keep), owner)


def matrix_game_value(spec: GameSpec, cap: int = DEFAULT_CAP) -> tuple[float, MixedStrategy]:
    M, sa, _ = payoff_matrix(spec, cap)
    value, x = solve_matrix_game(M)
    return value, mixture(sa, x, "A")


def exact_game_value(M) -> Fraction:
    """Exact value of a small matrix game with rational arithmetic.

    Shifts the matrix positive and solves ``max 1.y s.t. M y <= 1, y >= 0``
    (the column player's normalised program) by a dense tableau with Bland's
    rule; the value is ``1 / sum(y) - shift``.
    """
    M = [[Fraction(x) for x in row] for row in M]
    shift = 1 - min(min(row) for row in M)
    T = [[x + shift for x in row] for row in M]
    m, n = len(T), len(T[0])
    # tableau rows: [coefficients of y (n), slacks (m), rhs]
    tab = [T[i] + [Fraction(int(i == r)) for r in range(m)] + [Fraction(1)] for i in range(m)]
    obj = [Fraction(-1)] * n + [Fraction(0)] * (m + 1)
    basis = list(range(n, n + m))
    while True:
        q = next((j for j in range(n + m) if obj[j] < 0), None)
        if q is None:
            break
        ratios = [(tab[i][-1] / tab[i][q], basis[i], i) for i in range(m) if tab[i][q] > 0]
        _, _, r = min(ratios)
        piv = tab[r][q]
        tab[r] = [x / piv for x in tab[r]]
        for i in range(m):
            if i != r and tab[i][q] != 0:
                f = tab[i][q]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[r])]
        f = obj[q]
        obj = [a - f * b for a, b in zip(obj, tab[r])]
        basis[r] = q
    return 1 / obj[-1] - shift


# -- sweep -------------------------------------------------------------------------


def make_game(K: int, A: int, B: int, family: str, seed: int) -> GameSpec:
    """Instance of a payoff family; randomness is keyed on (seed, K, A, B, family)."""
    if family not in FAMILIES:
        raise ValueError(f"unknown payoff family {family!r}")
    if family == "auctionary-unit":
        return GameSpec.auctionary(K, A, B)
    rng = np.random.default_rng(np.random.SeedSequence([seed, K, A, B, FAMILIES.index(family)]))
    if family == "auctionary-random":
        return GameSpec.auctionary(K, A, B, weights=rng.uniform(0.5, 2.0, size=K))
    return GameSpec(K, A, B, Tabular(rng.uniform(-1.0, 1.0, size=(K, A + 1, B + 1))))


@dataclass(frozen=True)
class SweepRecord:
    K: int
    A: int
    B: int
    payoff_family: str
    seed: int
    value_lp: float
    value_oracle: float
    gap: float
    certified: bool


def compare_instance(K: int, A: int, B: int, family: str, seed: int) -> SweepRecord:
    spec = make_game(K, A, B, family, seed)
    result = solve_game(spec, "A")
    oracle, _ = matrix_game_value(spec)
    return SweepRecord(K, A, B, family, seed, result.value, oracle, abs(result.value - oracle),
                       result.certificate.passed)


def _compare(args):
    return compare_instance(*args)


def oracle_sweep(max_k: int = 3, max_n: int = 6, families=FAMILIES, seed: int = 0,
                 workers: int = 1) -> list[SweepRecord]:
    """Flow-LP value against the matrix-game value on every small instance, sorted by parameters."""
    jobs = [(K, A, B, fam, seed)
            for fam in families for K in range(1, max_k + 1)
            for A in range(max_n + 1) for B in range(max_n + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_compare, jobs, chunksize=8))
    return [compare_instance(*job) for job in jobs]


SWEEP_HEADER = ("K", "A", "B", "payoff_family", "seed", "value_lp", "value_oracle", "gap")


def write_sweep_csv(records, fh):
    w = csv.writer(fh)
    w.writerow(SWEEP_HEADER)
    for r in records:
        w.writerow((r.K, r.A, r.B, r.payoff_family, r.seed, repr(r.value_lp), repr(r.value_oracle), repr(r.gap)))
