"""Exact best pure responses by dynamic programming over the responder's layered graph.

Against fixed marginals of one player, the responder's payoff separates over
battlefields, so the best pure response is a maximum-weight source-to-sink
path: ``d[k, i] = max_j d[k-1, j] + w[k, i-j]`` with ``d[0, 0] = 0``. Vertices
``v[0, i>0]`` are not sources and carry ``-inf``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import GameError, GameSpec, Marginals, PureStrategy, check_player, other

CERT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class WeightTable:
    """``w[k, i]``: responder's expected payoff on battlefield k when sending i troops."""

    w: np.ndarray
    responder: str = "B"

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise GameError(f"weight table must be K x (N+1), got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise GameError("weight table has non-finite entries")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        check_player(self.responder)


@dataclass(frozen=True, eq=False)
class BestResponseTable:
    """DP values ``d[k, i]`` and backpointers ``choice[k, i]`` (troops spent before field k)."""

    d: np.ndarray
    choice: np.ndarray
    responder: str = "B"

    @property
    def value(self) -> float:
        return float(self.d[-1, -1])

    def allocation(self, spent: int | None = None) -> PureStrategy:
        K = self.d.shape[0] - 1
        i = self.d.shape[1] - 1 if spent is None else spent
        if not np.isfinite(self.d[K, i]):
            raise GameError(f"no path reaches v[{K},{i}]")
        alloc = []
        for k in range(K, 0, -1):
            j = int(self.choice[k, i])
            alloc.append(i - j)
            i = j
        return PureStrategy(tuple(reversed(alloc)), self.responder)


def weight_table(ma: Marginals, spec: GameSpec, responder: str) -> WeightTable:
    check_player(responder)
    if ma.owner != other(responder):
        raise GameError(f"marginals belong to {ma.owner}, responder must be the other player")
    U = spec.payoff_table_for(responder)  # U[k, i, l]: responder sends i against l
    if ma.p.shape != (U.shape[0], U.shape[2]):
        raise GameError(f"marginals shape {ma.p.shape} does not fit the game {U.shape}")
    return WeightTable(np.einsum("kil,kl->ki", U, ma.p), responder)


def best_response_table(w: WeightTable, n_opp: int) -> BestResponseTable:
    """Run the DP; ties go to the smallest ``j`` (fewest troops on earlier fields)."""
    K, width = w.w.shape
    if width != n_opp + 1:
        raise GameError(f"weight table has {width} columns, budget {n_opp} needs {n_opp + 1}")
    d = np.full((K + 1, n_opp + 1), -np.inf)
    d[0, 0] = 0.0
    choice = np.full((K + 1, n_opp + 1), -1, dtype=np.int64)
    i = np.arange(n_opp + 1)
    spend = i[:, None] - i[None, :]  # spend[i, j] = i - j
    valid = spend >= 0
    for k in range(1, K + 1):
        cand = np.where(valid, d[k - 1][None, :] + w.w[k - 1][np.where(valid, spend, 0)], -np.inf)
        choice[k] = np.argmax(cand, axis=1)  # first maximum = smallest j
        d[k] = cand[i, choice[k]]
    return BestResponseTable(d, choice, w.responder)


def best_response_value(w: WeightTable, n_opp: int) -> tuple[float, PureStrategy]:
    table = best_response_table(w, n_opp)
    return table.value, table.allocation()


@dataclass(frozen=True)
class Certificate:
    best_response_value: float
    gap: float
    passed: bool
    response: PureStrategy
    tol: float = CERT_TOL

    def to_dict(self) -> dict:
        return {"best_response_value": self.best_response_value, "gap": self.gap, "pass": self.passed}

    def describe(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        text = f"certificate {verdict}: opponent best response {self.best_response_value:.9g}, gap {self.gap:.3g}"
        if not self.passed:
            text += f"; violating response {list(self.response.allocation)}"
        return text


def certify(value: float, marginals: Marginals, spec: GameSpec, tol: float = CERT_TOL) -> Certificate:
    """Check that no opponent pure strategy earns more than ``-value`` against ``marginals``."""
    responder = other(marginals.owner)
    w = weight_table(marginals, spec, responder)
    v_star, response = best_response_value(w, spec.budget(responder))
    return Certificate(v_star, v_star + value, bool(v_star <= -value + tol), response, tol)


def certify_maxmin(result, spec: GameSpec, tol: float = CERT_TOL) -> Certificate:
    """Certificate for anything with ``.value`` and ``.marginals`` (e.g. a solve result)."""
    return certify(result.value, result.marginals, spec, tol)
