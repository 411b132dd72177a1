"""Discrete Colonel Blotto instances, strategies and payoff evaluation.

Payoffs are always stored from player A's point of view; player B's payoff on
a battlefield is the negation. Strategies come in three flavours:

* ``PureStrategy``  - an integer allocation of one player's troops,
* ``MixedStrategy`` - a finite support of pure strategies with probabilities,
* ``Marginals``     - the K x (N+1) table ``p[k, j]`` of the probability that
  ``j`` troops land on battlefield ``k``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

PLAYERS = ("A", "B")

# Exact integers are unbounded in Python; this cap mirrors a fixed-width
# platform integer so that absurd instances fail loudly.
MAX_EXACT_INT = 2**63 - 1


class GameError(ValueError):
    """Raised for malformed games or strategies."""


def check_player(player: str) -> str:
    if player not in PLAYERS:
        raise GameError(f"player must be 'A' or 'B', got {player!r}")
    return player


def other(player: str) -> str:
    return "B" if check_player(player) == "A" else "A"


@dataclass(frozen=True)
class Auctionary:
    """Winner-take-all battlefields: A gets +w if it sends more troops, -w if fewer."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise GameError("auctionary payoff needs at least one weight")
        if not all(math.isfinite(x) and x > 0 for x in w):
            raise GameError("auctionary weights must be finite and strictly positive")
        object.__setattr__(self, "weights", w)

    @classmethod
    def unit(cls, battlefields: int) -> "Auctionary":
        return cls((1.0,) * battlefields)


@dataclass(frozen=True, eq=False)
class Tabular:
    """Explicit table ``values[k, i, j]`` = payoff to A when A sends i and B sends j to field k."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 3:
            raise GameError(f"tabular payoff must be K x (A+1) x (B+1), got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise GameError("tabular payoff values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        return isinstance(other, Tabular) and np.array_equal(self.values, other.values)


PayoffSpec = Auctionary | Tabular


@dataclass(frozen=True)
class GameSpec:
    battlefields: int
    troops_a: int
    troops_b: int
    payoff: PayoffSpec

    def __post_init__(self):
        for name in ("battlefields", "troops_a", "troops_b"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise GameError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.battlefields < 1:
            raise GameError("battlefields must be >= 1")
        if self.troops_a < 0 or self.troops_b < 0:
            raise GameError("troop budgets must be >= 0")
        if isinstance(self.payoff, Auctionary):
            if len(self.payoff.weights) != self.battlefields:
                raise GameError(
                    f"expected {self.battlefields} auctionary weights, got {len(self.payoff.weights)}"
                )
        elif isinstance(self.payoff, Tabular):
            want = (self.battlefields, self.troops_a + 1, self.troops_b + 1)
            if self.payoff.values.shape != want:
                raise GameError(f"tabular payoff shape {self.payoff.values.shape} != {want}")
        else:
            raise GameError(f"unknown payoff specification {self.payoff!r}")

    @classmethod
    def auctionary(cls, battlefields: int, troops_a: int, troops_b: int, weights=None) -> "GameSpec":
        payoff = Auctionary.unit(battlefields) if weights is None else Auctionary(tuple(weights))
        return cls(battlefields, troops_a, troops_b, payoff)

    def budget(self, player: str) -> int:
        return self.troops_a if check_player(player) == "A" else self.troops_b

    def payoff_table(self) -> np.ndarray:
        """Dense ``U[k, i, j]``: A's payoff on field k when A sends i and B sends j."""
        if isinstance(self.payoff, Tabular):
            return self.payoff.values
        i = np.arange(self.troops_a + 1)[:, None]
        j = np.arange(self.troops_b + 1)[None, :]
        sign = np.sign(i - j).astype(float)
        w = np.asarray(self.payoff.weights)
        return w[:, None, None] * sign[None, :, :]

    def payoff_table_for(self, player: str) -> np.ndarray:
        """``U[k, s, o]``: payoff to ``player`` when it sends s and the opponent sends o."""
        table = self.payoff_table()
        if check_player(player) == "A":
            return table
        return -np.transpose(table, (0, 2, 1))

    def total_weight(self) -> float:
        """Largest absolute payoff any outcome can produce."""
        return float(np.abs(self.payoff_table()).max(axis=(1, 2)).sum())

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        if isinstance(self.payoff, Auctionary):
            payoff = {"type": "auctionary", "weights": list(self.payoff.weights)}
        else:
            payoff = {"type": "tabular", "values": self.payoff.values.tolist()}
        return {
            "battlefields": self.battlefields,
            "troops_a": self.troops_a,
            "troops_b": self.troops_b,
            "payoff": payoff,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameSpec":
        if not isinstance(data, dict):
            raise GameError("game description must be a JSON object")
        _reject_unknown(data, {"battlefields", "troops_a", "troops_b", "payoff"}, "game")
        try:
            payoff = payoff_from_dict(data["payoff"])
            return cls(data["battlefields"], data["troops_a"], data["troops_b"], payoff)
        except KeyError as exc:
            raise GameError(f"missing field {exc.args[0]!r}") from None


def payoff_from_dict(data: dict) -> PayoffSpec:
    if not isinstance(data, dict) or "type" not in data:
        raise GameError("payoff must be an object with a 'type' field")
    kind = data["type"]
    if kind == "auctionary":
        _reject_unknown(data, {"type", "weights"}, "auctionary payoff")
        return Auctionary(tuple(data["weights"]))
    if kind == "tabular":
        _reject_unknown(data, {"type", "values"}, "tabular payoff")
        try:
            return Tabular(np.array(data["values"], dtype=float))
        except (TypeError, ValueError) as exc:
            raise GameError(f"bad tabular values: {exc}") from None
    raise GameError(f"unknown payoff type {kind!r}")


def _reject_unknown(data: dict, allowed: set, what: str):
    extra = set(data) - allowed
    if extra:
        raise GameError(f"unknown field(s) in {what}: {sorted(extra)}")


def load_game(path) -> GameSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GameError(f"{path}: invalid JSON ({exc})") from None
    return GameSpec.from_dict(data)


def dump_game(spec: GameSpec, path):
    with open(path, "w") as fh:
        json.dump(spec.to_dict(), fh, indent=2)


# -- strategies ---------------------------------------------------------------


@dataclass(frozen=True)
class PureStrategy:
    allocation: tuple[int, ...]
    owner: str = "A"

    def __post_init__(self):
        alloc = tuple(int(a) for a in self.allocation)
        if any(a < 0 for a in alloc):
            raise GameError(f"negative allocation {alloc}")
        object.__setattr__(self, "allocation", alloc)
        check_player(self.owner)

    @property
    def troops(self) -> int:
        return sum(self.allocation)

    def validate(self, spec: GameSpec) -> "PureStrategy":
        if len(self.allocation) != spec.battlefields:
            raise GameError(f"allocation {self.allocation} has wrong length for K={spec.battlefields}")
        if self.troops != spec.budget(self.owner):
            raise GameError(
                f"allocation {self.allocation} uses {self.troops} troops, "
                f"player {self.owner} has {spec.budget(self.owner)}"
            )
        return self


@dataclass(frozen=True)
class MixedStrategy:
    support: tuple[tuple[PureStrategy, float], ...]
    owner: str = "A"

    def __post_init__(self):
        support = tuple((s, float(p)) for s, p in self.support)
        if not support:
            raise GameError("mixed strategy needs a non-empty support")
        for s, p in support:
            if s.owner != self.owner:
                raise GameError("support entries must belong to the strategy's owner")
            if not (-1e-12 <= p <= 1 + 1e-12):
                raise GameError(f"probability {p} outside [0, 1]")
        total = math.fsum(p for _, p in support)
        if abs(total - 1.0) > 1e-9:
            raise GameError(f"probabilities sum to {total}, not 1")
        if len({s.allocation for s, _ in support}) != len(support):
            raise GameError("support entries must be pairwise distinct")
        object.__setattr__(self, "support", support)

    @classmethod
    def pure(cls, strategy: PureStrategy) -> "MixedStrategy":
        return cls(((strategy, 1.0),), strategy.owner)

    @classmethod
    def from_allocations(cls, allocations: Iterable[Sequence[int]], probs: Iterable[float], owner="A"):
        return cls(tuple((PureStrategy(tuple(a), owner), p) for a, p in zip(allocations, probs)), owner)

    def validate(self, spec: GameSpec) -> "MixedStrategy":
        for s, _ in self.support:
            s.validate(spec)
        return self

    def __len__(self):
        return len(self.support)


@dataclass(frozen=True, eq=False)
class Marginals:
    """``p[k, j]`` = probability of sending j troops to battlefield k."""

    p: np.ndarray
    owner: str = "A"

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 2:
            raise GameError(f"marginals must be a K x (N+1) matrix, got shape {p.shape}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)
        check_player(self.owner)

    @property
    def battlefields(self) -> int:
        return self.p.shape[0]

    @property
    def troops(self) -> int:
        return self.p.shape[1] - 1

    def check(self, row_tol: float = 1e-9, budget_tol: float = 1e-6) -> "Marginals":
        if np.any(self.p < -row_tol) or np.any(self.p > 1 + row_tol):
            raise GameError("marginal probabilities outside [0, 1]")
        rows = self.p.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > row_tol:
            raise GameError(f"marginal rows sum to {rows}, not 1")
        expected = float(self.p @ np.arange(self.troops + 1) @ np.ones(self.battlefields))
        if abs(expected - self.troops) > budget_tol:
            raise GameError(f"expected troops {expected} differ from budget {self.troops}")
        return self


def count_pure_strategies(spec: GameSpec, player: str) -> int:
    """Number of ways to split the player's budget over the battlefields, C(N+K-1, K-1)."""
    n = spec.budget(player)
    count = math.comb(n + spec.battlefields - 1, spec.battlefields - 1)
    if count > MAX_EXACT_INT:
        raise OverflowError(f"pure strategy count C({n + spec.battlefields - 1}, "
                            f"{spec.battlefields - 1}) exceeds 64-bit range")
    return count


def marginals_of(strategy: MixedStrategy, spec: GameSpec) -> Marginals:
    strategy.validate(spec)
    n = spec.budget(strategy.owner)
    p = np.zeros((spec.battlefields, n + 1))
    rows = np.arange(spec.battlefields)
    for s, prob in strategy.support:
        p[rows, s.allocation] += prob
    return Marginals(p, strategy.owner)


def expected_payoff(ma: Marginals, mb: Marginals, spec: GameSpec) -> float:
    """Expected payoff to A when A and B play strategies with marginals ``ma`` and ``mb``."""
    table = spec.payoff_table()
    if ma.p.shape != table.shape[:2] or mb.p.shape != (table.shape[0], table.shape[2]):
        raise GameError(
            f"marginal shapes {ma.p.shape}, {mb.p.shape} do not match game {table.shape}"
        )
    return float(np.einsum("ki,kij,kj->", ma.p, table, mb.p))


def expected_payoff_b(ma: Marginals, mb: Marginals, spec: GameSpec) -> float:
    return -expected_payoff(ma, mb, spec)


def pure_payoff(x: PureStrategy, y: PureStrategy, spec: GameSpec) -> float:
    """Payoff to A for a pair of pure strategies, summed battlefield by battlefield."""
    table = spec.payoff_table()
    return float(sum(table[k, i, j] for k, (i, j) in enumerate(zip(x.allocation, y.allocation))))
