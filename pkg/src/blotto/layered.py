"""Layered graphs, canonical paths and unit flows.

The layered graph of a player with N troops on K battlefields has vertices
``v[k, i]`` for ``0 <= k <= K`` and ``0 <= i <= N``; vertex ``v[k, i]`` means
"``i`` troops spent on the first ``k`` battlefields". Edge ``(k, i, l)`` runs
from ``v[k-1, i]`` to ``v[k, l]`` whenever ``i <= l`` and puts ``l - i`` troops
on battlefield ``k``. Source-to-sink paths are exactly the pure strategies and
unit flows are (many-to-one) images of mixed strategies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .game import GameError, GameSpec, MixedStrategy, PureStrategy

Edge = tuple[int, int, int]

FLOW_TOL = 1e-9
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class LayeredGraph:
    battlefields: int
    troops: int

    def __post_init__(self):
        if self.battlefields < 1 or self.troops < 0:
            raise GameError(f"bad layered graph shape K={self.battlefields}, N={self.troops}")

    @property
    def edges_per_layer(self) -> int:
        n = self.troops
        return (n + 1) * (n + 2) // 2

    @property
    def num_edges(self) -> int:
        return self.battlefields * self.edges_per_layer

    def edge_index(self, k: int, i: int, l: int) -> int:
        """Flat index of edge ``(k, i, l)``; layers are 1-based, rows ordered by i then l."""
        n = self.troops
        if not (1 <= k <= self.battlefields and 0 <= i <= l <= n):
            raise IndexError(f"no edge {(k, i, l)} in graph K={self.battlefields}, N={n}")
        return (k - 1) * self.edges_per_layer + i * (n + 1) - i * (i - 1) // 2 + (l - i)

    def edges(self) -> Iterator[Edge]:
        for k in range(1, self.battlefields + 1):
            for i in range(self.troops + 1):
                for l in range(i, self.troops + 1):
                    yield (k, i, l)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """``(num_edges, 3)`` int array of ``(k, i, l)`` in flat-index order."""
        arr = np.array(list(self.edges()), dtype=np.int64).reshape(-1, 3)
        arr.setflags(write=False)
        return arr


@dataclass(frozen=True)
class Flow:
    """Nonnegative edge values on a layered graph; zero edges are implicit."""

    graph: LayeredGraph
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for edge, f in self.values.items():
            edge = tuple(int(x) for x in edge)
            self.graph.edge_index(*edge)
            f = float(f)
            if f < -ZERO_TOL:
                raise GameError(f"negative flow {f} on edge {edge}")
            if f > ZERO_TOL:
                cleaned[edge] = f
        object.__setattr__(self, "values", dict(sorted(cleaned.items())))

    @classmethod
    def from_vector(cls, graph: LayeredGraph, vec) -> "Flow":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (graph.num_edges,):
            raise GameError(f"flow vector has shape {vec.shape}, want ({graph.num_edges},)")
        nz = np.flatnonzero(vec > ZERO_TOL)
        edges = graph.edge_array[nz]
        return cls(graph, {tuple(e): vec[j] for e, j in zip(edges.tolist(), nz)})

    def to_vector(self) -> np.ndarray:
        vec = np.zeros(self.graph.num_edges)
        for edge, f in self.values.items():
            vec[self.graph.edge_index(*edge)] = f
        return vec

    def __getitem__(self, edge: Edge) -> float:
        return self.values.get(tuple(edge), 0.0)

    def vertex_balance(self) -> np.ndarray:
        """``inflow - outflow`` for every vertex, shape ``(K+1, N+1)``."""
        g = self.graph
        bal = np.zeros((g.battlefields + 1, g.troops + 1))
        for (k, i, l), f in self.values.items():
            bal[k - 1, i] -= f
            bal[k, l] += f
        return bal

    def violations(self, tol: float = FLOW_TOL) -> list[str]:
        g = self.graph
        want = np.zeros((g.battlefields + 1, g.troops + 1))
        want[0, 0] = -1.0
        want[g.battlefields, g.troops] += 1.0
        bad = np.argwhere(np.abs(self.vertex_balance() - want) > tol)
        return [f"imbalance at v[{k},{i}]" for k, i in bad]

    def check(self, tol: float = FLOW_TOL) -> "Flow":
        problems = self.violations(tol)
        if problems:
            raise GameError("invalid unit flow: " + ", ".join(problems[:5]))
        return self

    def marginals(self) -> np.ndarray:
        """``p[k-1, j]`` = flow on layer-k edges that spend j troops."""
        g = self.graph
        p = np.zeros((g.battlefields, g.troops + 1))
        for (k, i, l), f in self.values.items():
            p[k - 1, l - i] += f
        return p

    def to_dict(self) -> dict:
        return {
            "battlefields": self.graph.battlefields,
            "troops": self.graph.troops,
            "edges": [{"k": k, "i": i, "l": l, "f": f} for (k, i, l), f in self.values.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Flow":
        graph = LayeredGraph(int(data["battlefields"]), int(data["troops"]))
        return cls(graph, {(e["k"], e["i"], e["l"]): e["f"] for e in data["edges"]})


def path_of_pure(s: PureStrategy) -> list[Edge]:
    """Canonical path of a pure strategy: edge ``(k, s_{k-1}, s_k)`` with prefix sums ``s_k``."""
    prefix = np.concatenate([[0], np.cumsum(s.allocation)]).tolist()
    return [(k, prefix[k - 1], prefix[k]) for k in range(1, len(s.allocation) + 1)]


def pure_of_path(path: Sequence[Edge], spec: GameSpec, player: str) -> PureStrategy:
    """Inverse of :func:`path_of_pure`; rejects anything that is not a canonical path."""
    k_max, n = spec.battlefields, spec.budget(player)
    path = [tuple(int(x) for x in e) for e in path]
    if len(path) != k_max:
        raise GameError(f"canonical path must have {k_max} edges, got {len(path)}")
    at = 0
    alloc = []
    for step, (k, i, l) in enumerate(path, start=1):
        if k != step or i != at or not (i <= l <= n):
            raise GameError(f"edge {(k, i, l)} does not continue the path at v[{step - 1},{at}]")
        alloc.append(l - i)
        at = l
    if at != n:
        raise GameError(f"path ends at v[{k_max},{at}], not at the sink v[{k_max},{n}]")
    return PureStrategy(tuple(alloc), player)


def flow_of_mixed(m: MixedStrategy) -> Flow:
    """Probability-weighted sum of the support's canonical-path indicator flows."""
    first = m.support[0][0]
    k, n = len(first.allocation), first.troops
    for s, _ in m.support:
        if len(s.allocation) != k or s.troops != n:
            raise GameError("support strategies disagree on battlefields or budget")
    values: dict = {}
    for s, prob in m.support:
        for edge in path_of_pure(s):
            values[edge] = values.get(edge, 0.0) + prob
    return Flow(LayeredGraph(k, n), values)


def long_edge_threshold(n: int, rule: str = "formula") -> float:
    """Minimum excess of ``l - i`` over which an edge counts as long.

    ``"formula"`` uses ``ceil((N+1)/2)``, which reproduces the closed-form count;
    ``"text"`` uses ``N/2``. The two disagree by one column of edges for most N.
    """
    if rule == "formula":
        return math.ceil((n + 1) / 2)
    if rule == "text":
        return n / 2
    raise ValueError(f"unknown threshold rule {rule!r}")


def count_long_edges(n: int, k: int, threshold_rule: str = "formula") -> int:
    """Closed-form number of edges with ``l - i`` above the threshold."""
    if n < 0 or k < 1:
        raise ValueError("need N >= 0 and K >= 1")
    t = math.floor(long_edge_threshold(n, threshold_rule))
    m = max(n - t, 0)
    return k * m * (m + 1) // 2


def long_edges(graph: LayeredGraph, threshold_rule: str = "formula") -> list[Edge]:
    t = long_edge_threshold(graph.troops, threshold_rule)
    return [e for e in graph.edges() if e[2] - e[1] > t]
