"""Multi-resource Colonel Blotto: vector budgets, generalized layered graphs and their LP.

Each player holds ``c`` kinds of resources with budgets ``N_1..N_c`` and sends
a vector to every battlefield. Vertex ``v[k, r]`` of the generalized layered
graph means "``r_m`` units of resource m spent on the first k fields"; an edge
joins ``v[k-1, r]`` to ``v[k, r']`` whenever ``r <= r'`` componentwise, so
source-to-sink paths are again exactly the pure strategies.

Vectors are stored by their C-order flat index into the box
``prod(N_m + 1)``. Flattening is linear, so the flat index of ``r' - r`` is
the difference of the flat indices, and ``r <= r'`` implies ``flat(r) <=
flat(r')``: the lexicographic peeling rule of the scalar game carries over.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .best_response import CERT_TOL
from .extract import RESIDUAL_TOL, normalise, peel_paths
from .formulation import SizeLimitError, balanced_allocation
from .game import GameError, GameSpec, Tabular, _reject_unknown, check_player, other
from .lp import EQ, GE, LE, LPBuilder, LPSolution, StandardLP, solve_lp
from .oracle import DEFAULT_CAP, compositions, solve_matrix_game

MAX_RESOURCES = 3
DEFAULT_MAX_EDGES = 2_000_000
FLOW_TOL = 1e-7


@dataclass(frozen=True)
class MajorityAuctionary:
    """A wins field k (+w_k) when it outspends B on more resource types than B outspends A."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w or not all(math.isfinite(x) and x > 0 for x in w):
            raise GameError("majority weights must be a nonempty list of positive numbers")
        object.__setattr__(self, "weights", w)


def _budgets(values, name) -> tuple[int, ...]:
    try:
        out = tuple(int(v) for v in values)
    except (TypeError, ValueError):
        raise GameError(f"{name} must be a list of integers") from None
    if any(isinstance(v, bool) or int(v) != v for v in values):
        raise GameError(f"{name} must be a list of integers")
    if any(v < 0 for v in out):
        raise GameError(f"{name} must be nonnegative")
    return out


@dataclass(frozen=True)
class MrcbSpec:
    battlefields: int
    budgets_a: tuple[int, ...]
    budgets_b: tuple[int, ...]
    payoff: MajorityAuctionary | Tabular
    max_resources: int = field(default=MAX_RESOURCES, compare=False)

    def __post_init__(self):
        if isinstance(self.battlefields, bool) or not isinstance(self.battlefields, (int, np.integer)):
            raise GameError(f"battlefields must be an integer, got {self.battlefields!r}")
        object.__setattr__(self, "battlefields", int(self.battlefields))
        if self.battlefields < 1:
            raise GameError("battlefields must be >= 1")
        a, b = _budgets(self.budgets_a, "budgets_a"), _budgets(self.budgets_b, "budgets_b")
        object.__setattr__(self, "budgets_a", a)
        object.__setattr__(self, "budgets_b", b)
        if len(a) < 1 or len(a) != len(b):
            raise GameError(f"both players need the same positive number of resource types, got {len(a)} and {len(b)}")
        if len(a) > self.max_resources:
            raise GameError(f"{len(a)} resource types exceed the configured cap of {self.max_resources}")
        if isinstance(self.payoff, MajorityAuctionary):
            if len(self.payoff.weights) != self.battlefields:
                raise GameError(f"expected {self.battlefields} weights, got {len(self.payoff.weights)}")
        elif isinstance(self.payoff, Tabular):
            want = (self.battlefields, self.size("A"), self.size("B"))
            if self.payoff.values.shape != want:
                raise GameError(f"tabular payoff shape {self.payoff.values.shape} != {want}")
        else:
            raise GameError(f"unknown payoff specification {self.payoff!r}")

    @classmethod
    def majority(cls, battlefields: int, budgets_a, budgets_b, weights=None) -> "MrcbSpec":
        w = (1.0,) * battlefields if weights is None else tuple(weights)
        return cls(battlefields, tuple(budgets_a), tuple(budgets_b), MajorityAuctionary(w))

    @classmethod
    def from_blotto(cls, spec: GameSpec) -> "MrcbSpec":
        """The same game with a single resource type (majority of one = plain comparison)."""
        return cls(spec.battlefields, (spec.troops_a,), (spec.troops_b,), Tabular(spec.payoff_table()))

    @property
    def resources(self) -> int:
        return len(self.budgets_a)

    def budgets(self, player: str) -> tuple[int, ...]:
        return self.budgets_a if check_player(player) == "A" else self.budgets_b

    def shape(self, player: str) -> tuple[int, ...]:
        return tuple(n + 1 for n in self.budgets(player))

    def size(self, player: str) -> int:
        return math.prod(self.shape(player))

    def payoff_table(self) -> np.ndarray:
        """``U[k, x, y]`` over flat vector indices, from A's point of view."""
        if isinstance(self.payoff, Tabular):
            return self.payoff.values
        xa = np.array(list(np.ndindex(self.shape("A")))).reshape(-1, self.resources)
        xb = np.array(list(np.ndindex(self.shape("B")))).reshape(-1, self.resources)
        votes = np.sign(xa[:, None, :] - xb[None, :, :]).sum(axis=2)
        sign = np.sign(votes).astype(float)
        w = np.asarray(self.payoff.weights)
        return w[:, None, None] * sign[None, :, :]

    def payoff_table_for(self, player: str) -> np.ndarray:
        table = self.payoff_table()
        if check_player(player) == "A":
            return table
        return -np.transpose(table, (0, 2, 1))

    def to_dict(self) -> dict:
        if isinstance(self.payoff, MajorityAuctionary):
            payoff = {"type": "majority", "weights": list(self.payoff.weights)}
        else:
            payoff = {"type": "tabular", "values": self.payoff.values.tolist()}
        return {
            "battlefields": self.battlefields,
            "resources": self.resources,
            "budgets_a": list(self.budgets_a),
            "budgets_b": list(self.budgets_b),
            "payoff": payoff,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MrcbSpec":
        if not isinstance(data, dict):
            raise GameError("game description must be a JSON object")
        _reject_unknown(data, {"battlefields", "resources", "budgets_a", "budgets_b", "payoff"}, "MRCB game")
        try:
            payoff = data["payoff"]
            if not isinstance(payoff, dict) or "type" not in payoff:
                raise GameError("payoff must be an object with a 'type' field")
            if payoff["type"] == "majority":
                _reject_unknown(payoff, {"type", "weights"}, "majority payoff")
                pay = MajorityAuctionary(tuple(payoff["weights"]))
            elif payoff["type"] == "tabular":
                _reject_unknown(payoff, {"type", "values"}, "tabular payoff")
                pay = Tabular(np.array(payoff["values"], dtype=float))
            else:
                raise GameError(f"unknown payoff type {payoff['type']!r}")
            spec = cls(data["battlefields"], tuple(data["budgets_a"]), tuple(data["budgets_b"]), pay)
        except KeyError as exc:
            raise GameError(f"missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, GameError):
                raise
            raise GameError(f"malformed MRCB game: {exc}") from None
        if "resources" in data and data["resources"] != spec.resources:
            raise GameError(f"resources = {data['resources']} but budgets have {spec.resources} entries")
        return spec


def load_mrcb(path) -> MrcbSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GameError(f"{path}: invalid JSON ({exc})") from None
    return MrcbSpec.from_dict(data)


# -- generalized layered graph -------------------------------------------------------

MrcbEdge = tuple[int, int, int]  # (layer k, flat tail, flat head)


@dataclass(frozen=True)
class GeneralizedLayeredGraph:
    battlefields: int
    budgets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "budgets", tuple(int(n) for n in self.budgets))
        if self.battlefields < 1 or not self.budgets or min(self.budgets) < 0:
            raise GameError(f"bad generalized graph K={self.battlefields}, budgets={self.budgets}")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(n + 1 for n in self.budgets)

    @property
    def layer_size(self) -> int:
        return math.prod(self.shape)

    @property
    def num_vertices(self) -> int:
        return (self.battlefields + 1) * self.layer_size

    @property
    def edges_per_layer(self) -> int:
        return math.prod((n + 1) * (n + 2) // 2 for n in self.budgets)

    @property
    def num_edges(self) -> int:
        return self.battlefields * self.edges_per_layer

    @property
    def sink(self) -> int:
        return self.layer_size - 1

    def flat(self, r) -> int:
        return int(np.ravel_multi_index(tuple(int(x) for x in r), self.shape))

    def vector(self, idx: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.unravel_index(idx, self.shape))

    @cached_property
    def layer_pairs(self) -> np.ndarray:
        """``(edges_per_layer, 2)`` array of flat ``(tail, head)`` with tail <= head componentwise."""
        V = np.array(list(np.ndindex(self.shape))).reshape(-1, len(self.budgets))
        le = np.all(V[:, None, :] <= V[None, :, :], axis=2)
        pairs = np.argwhere(le)
        pairs.setflags(write=False)
        return pairs

    @cached_property
    def _pair_index(self) -> dict:
        return {(int(a), int(b)): e for e, (a, b) in enumerate(self.layer_pairs)}

    def edge_index(self, k: int, a: int, b: int) -> int:
        e = self._pair_index.get((a, b)) if 1 <= k <= self.battlefields else None
        if e is None:
            raise IndexError(f"no edge {(k, a, b)} in generalized graph {self.battlefields}, {self.budgets}")
        return (k - 1) * self.edges_per_layer + e

    def edges(self):
        for k in range(1, self.battlefields + 1):
            for a, b in self.layer_pairs:
                yield (k, int(a), int(b))


Allocation = tuple[tuple[int, ...], ...]  # one resource vector per battlefield


def check_allocation(alloc, budgets, battlefields: int) -> Allocation:
    try:
        out = tuple(tuple(int(x) for x in vec) for vec in alloc)
    except (TypeError, ValueError):
        raise GameError(f"allocation {alloc!r} is not a list of integer vectors") from None
    if len(out) != battlefields or any(len(v) != len(budgets) for v in out):
        raise GameError(f"allocation must be {battlefields} vectors of length {len(budgets)}")
    if any(x < 0 for v in out for x in v):
        raise GameError("allocation has negative entries")
    totals = tuple(sum(col) for col in zip(*out))
    if totals != tuple(budgets):
        raise GameError(f"allocation spends {totals}, budgets are {tuple(budgets)}")
    return out


def mrcb_path_of_pure(alloc, graph: GeneralizedLayeredGraph) -> list[MrcbEdge]:
    """Edges ``(k, tail, head)`` of the path encoding ``alloc``; tail/head are flat vertex ids."""
    alloc = check_allocation(alloc, graph.budgets, graph.battlefields)
    r = np.zeros(len(graph.budgets), dtype=int)
    path = []
    for k, vec in enumerate(alloc, start=1):
        nxt = r + np.array(vec)
        path.append((k, graph.flat(r), graph.flat(nxt)))
        r = nxt
    return path


def mrcb_pure_of_path(path, graph: GeneralizedLayeredGraph) -> Allocation:
    path = [tuple(int(x) for x in e) for e in path]
    if len(path) != graph.battlefields:
        raise GameError(f"path has {len(path)} edges, expected {graph.battlefields}")
    at = 0
    alloc = []
    for expect_k, (k, a, b) in enumerate(path, start=1):
        if k != expect_k or a != at:
            raise GameError(f"edge {(k, a, b)} does not continue the path at layer {expect_k}")
        graph.edge_index(k, a, b)
        alloc.append(tuple(y - x for x, y in zip(graph.vector(a), graph.vector(b))))
        at = b
    if at != graph.sink:
        raise GameError("path does not end at the sink")
    return tuple(alloc)


# -- enumeration oracle ---------------------------------------------------------------


def count_mrcb_pure(spec: MrcbSpec, player: str) -> int:
    K = spec.battlefields
    return math.prod(math.comb(n + K - 1, K - 1) for n in spec.budgets(player))


def enumerate_mrcb_pure(spec: MrcbSpec, player: str, cap: int = DEFAULT_CAP) -> list[Allocation]:
    """Every pure strategy: one composition per resource type, transposed to per-field vectors."""
    count = count_mrcb_pure(spec, player)
    if count > cap:
        raise GameError(f"player {player} has {count} pure strategies, above the cap of {cap}")
    K = spec.battlefields
    per_resource = [list(compositions(n, K)) for n in spec.budgets(player)]
    return [tuple(zip(*combo)) for combo in itertools.product(*per_resource)]


def mrcb_pure_payoff(x: Allocation, y: Allocation, spec: MrcbSpec) -> float:
    U = spec.payoff_table()
    sa, sb = spec.shape("A"), spec.shape("B")
    return float(sum(U[k, np.ravel_multi_index(x[k], sa), np.ravel_multi_index(y[k], sb)]
                     for k in range(spec.battlefields)))


def mrcb_payoff_matrix(spec: MrcbSpec, cap: int = DEFAULT_CAP):
    sa, sb = enumerate_mrcb_pure(spec, "A", cap), enumerate_mrcb_pure(spec, "B", cap)
    U = spec.payoff_table()
    K = spec.battlefields
    fa = np.array([[np.ravel_multi_index(v, spec.shape("A")) for v in s] for s in sa]).reshape(len(sa), K)
    fb = np.array([[np.ravel_multi_index(v, spec.shape("B")) for v in s] for s in sb]).reshape(len(sb), K)
    M = np.zeros((len(sa), len(sb)))
    for k in range(K):
        M += U[k][fa[:, k][:, None], fb[:, k][None, :]]
    return M, sa, sb


def mrcb_matrix_game_value(spec: MrcbSpec, cap: int = DEFAULT_CAP) -> float:
    M, _, _ = mrcb_payoff_matrix(spec, cap)
    value, _ = solve_matrix_game(M)
    return value


# -- LP -------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MrcbLP:
    lp: StandardLP
    spec: MrcbSpec
    player: str
    graph: GeneralizedLayeredGraph  # solving player's graph
    opp_graph: GeneralizedLayeredGraph
    f_start: int
    p_start: int
    w_start: int
    d_start: int
    u_index: int
    families: dict = field(default_factory=dict)

    def p_index(self, k: int, j: int) -> int:
        return self.p_start + (k - 1) * self.graph.layer_size + j

    def w_index(self, k: int, i: int) -> int:
        return self.w_start + (k - 1) * self.opp_graph.layer_size + i

    def d_index(self, k: int, i: int) -> int:
        return self.d_start + k * self.opp_graph.layer_size + i

    def flow_values(self, x) -> np.ndarray:
        return np.asarray(x)[self.f_start:self.f_start + self.graph.num_edges]

    def p_values(self, x) -> np.ndarray:
        K, S = self.spec.battlefields, self.graph.layer_size
        return np.asarray(x)[self.p_start:self.p_start + K * S].reshape(K, S)


def build_mrcb_lp(spec: MrcbSpec, player: str = "A", max_edges: int = DEFAULT_MAX_EDGES) -> MrcbLP:
    """Maxmin program on generalized layered graphs; row and column order follow the scalar program."""
    check_player(player)
    opp = other(player)
    K = spec.battlefields
    graph = GeneralizedLayeredGraph(K, spec.budgets(player))
    og = GeneralizedLayeredGraph(K, spec.budgets(opp))
    if graph.num_edges > max_edges or og.num_edges > max_edges:
        raise SizeLimitError(
            f"MRCB LP for K={K}: own graph {graph.num_vertices} vertices / {graph.num_edges} edges, "
            f"opponent graph {og.num_vertices} vertices / {og.num_edges} edges (cap {max_edges} edges)"
        )
    S, T = graph.layer_size, og.layer_size
    u_opp = spec.payoff_table_for(opp)  # [k, opp vector, own vector]
    pairs, opairs = graph.layer_pairs, og.layer_pairs
    E = graph.edges_per_layer

    b = LPBuilder()
    f0 = b.add_vars(graph.num_edges, lower=0.0, names=[f"F_{k}_{a}_{h}" for k, a, h in graph.edges()])
    p0 = b.add_vars(K * S, lower=0.0, names=[f"p_{k}_{j}" for k in range(1, K + 1) for j in range(S)])
    w0 = b.add_vars(K * T, lower=-np.inf, names=[f"w_{k}_{i}" for k in range(1, K + 1) for i in range(T)])
    d0 = b.add_vars((K + 1) * T, lower=-np.inf, names=[f"d_{k}_{i}" for k in range(K + 1) for i in range(T)])
    u = b.add_vars(1, lower=-np.inf, obj=1.0, names=["u"])

    by_head = [np.flatnonzero(pairs[:, 1] == v) for v in range(S)]
    by_tail = [np.flatnonzero(pairs[:, 0] == v) for v in range(S)]
    by_diff = [np.flatnonzero(pairs[:, 1] - pairs[:, 0] == j) for j in range(S)]

    def F(k, e):
        return f0 + (k - 1) * E + e

    families = {}

    def open_family(name):
        families[name] = [b.num_rows, None]

    def close(name):
        families[name][1] = b.num_rows

    open_family("conservation")
    for k in range(1, K):
        for v in range(S):
            ins, outs = by_head[v], by_tail[v]
            b.add_row([F(k, e) for e in ins] + [F(k + 1, e) for e in outs],
                      [1.0] * len(ins) + [-1.0] * len(outs), EQ, 0.0, f"cons_{k}_{v}")
    close("conservation")
    open_family("source_sink")
    for v in range(1, S):
        b.add_row([F(1, e) for e in by_tail[v]], [1.0] * len(by_tail[v]), EQ, 0.0, f"src0_{v}")
    b.add_row([F(1, e) for e in by_tail[0]], [1.0] * len(by_tail[0]), EQ, 1.0, "source")
    b.add_row([F(K, e) for e in by_head[S - 1]], [1.0] * len(by_head[S - 1]), EQ, 1.0, "sink")
    close("source_sink")

    open_family("p_def")
    for k in range(1, K + 1):
        for j in range(S):
            es = by_diff[j]
            b.add_row([p0 + (k - 1) * S + j] + [F(k, e) for e in es], [1.0] + [-1.0] * len(es), EQ, 0.0,
                      f"pdef_{k}_{j}")
    close("p_def")
    open_family("w_def")
    for k in range(1, K + 1):
        for i in range(T):
            coef = u_opp[k - 1, i, :]
            nz = np.flatnonzero(coef)
            b.add_row([w0 + (k - 1) * T + i] + [p0 + (k - 1) * S + l for l in nz],
                      [1.0] + (-coef[nz]).tolist(), EQ, 0.0, f"wdef_{k}_{i}")
    close("w_def")
    open_family("d_init")
    b.add_row([d0], [1.0], EQ, 0.0, "dinit_0")
    close("d_init")
    open_family("d_recurrence")
    order = np.lexsort((opairs[:, 0], opairs[:, 1]))  # by head, then tail
    for k in range(1, K + 1):
        for e in order:
            j, i = int(opairs[e, 0]), int(opairs[e, 1])
            b.add_row([d0 + k * T + i, d0 + (k - 1) * T + j, w0 + (k - 1) * T + (i - j)],
                      [1.0, -1.0, -1.0], GE, 0.0, f"drec_{k}_{i}_{j}")
    close("d_recurrence")
    open_family("payoff_cap")
    b.add_row([d0 + K * T + T - 1, u], [1.0, 1.0], LE, 0.0, "cap")
    close("payoff_cap")

    return MrcbLP(b.build(), spec, player, graph, og, f0, p0, w0, d0, u,
                  {k: tuple(v) for k, v in families.items()})


def mrcb_starting_basis(mlp: MrcbLP, allocation=None) -> dict:
    """Feasible triangular basis from one pure strategy, as for the scalar program."""
    spec, K = mlp.spec, mlp.spec.battlefields
    g, og = mlp.graph, mlp.opp_graph
    S, T = g.layer_size, og.layer_size
    if allocation is None:
        allocation = tuple(zip(*(balanced_allocation(K, n) for n in g.budgets)))
    alloc = check_allocation(allocation, g.budgets, K)
    flat = [g.flat(v) for v in alloc]
    u_opp = spec.payoff_table_for(other(mlp.player))
    w = np.array([u_opp[k, :, flat[k]] for k in range(K)])

    fam = mlp.families
    tails, heads = og.layer_pairs[:, 0], og.layer_pairs[:, 1]
    order = np.lexsort((tails, heads))
    position = np.empty(len(order), dtype=np.int64)
    position[order] = np.arange(len(order))
    E_opp = og.edges_per_layer

    basis = {fam["payoff_cap"][0]: mlp.u_index, fam["d_init"][0]: mlp.d_index(0, 0)}
    d = np.zeros(T)
    rows_d = {}
    for k in range(1, K + 1):
        cand = d[tails] + w[k - 1, heads - tails]
        best = np.full(T, -np.inf)
        arg = np.zeros(T, dtype=np.int64)
        for e in order:  # by head, then tail: ties keep the smallest tail
            if cand[e] > best[heads[e]]:
                best[heads[e]], arg[heads[e]] = cand[e], e
        for i in range(T):
            rows_d[(k, i)] = fam["d_recurrence"][0] + (k - 1) * E_opp + position[arg[i]]
        d = best
    for k in range(K, 0, -1):
        for i in range(T):
            basis[rows_d[(k, i)]] = mlp.d_index(k, i)
    for k in range(1, K + 1):
        for i in range(T):
            basis[fam["w_def"][0] + (k - 1) * T + i] = mlp.w_index(k, i)
    for k in range(1, K + 1):
        for j in range(S):
            basis[fam["p_def"][0] + (k - 1) * S + j] = mlp.p_index(k, j)
    prefix = [0] + list(np.cumsum(flat))
    for k in range(K, 0, -1):
        tail = fam["source_sink"][0] + S - 1 if k == 1 else fam["conservation"][0] + (k - 2) * S + prefix[k - 1]
        basis[int(tail)] = mlp.f_start + g.edge_index(k, int(prefix[k - 1]), int(prefix[k]))
    return basis


def mrcb_census(mlp: MrcbLP) -> dict:
    lp = mlp.lp
    return {
        "families": {name: stop - start for name, (start, stop) in mlp.families.items()},
        "rows": lp.num_rows,
        "cols": lp.num_cols,
        "nonzeros": lp.nnz,
        "nonnegativity": int(np.sum((lp.lower == 0.0) & (lp.upper == np.inf))),
    }


# -- certificate ----------------------------------------------------------------------


def mrcb_best_response(p: np.ndarray, spec: MrcbSpec, responder: str) -> tuple[float, Allocation]:
    """Best pure response to marginals ``p[k, flat vector]`` of the other player, by DP."""
    check_player(responder)
    og = GeneralizedLayeredGraph(spec.battlefields, spec.budgets(responder))
    U = spec.payoff_table_for(responder)
    if p.shape != (U.shape[0], U.shape[2]):
        raise GameError(f"marginals shape {p.shape} does not fit the game {U.shape}")
    w = np.einsum("kil,kl->ki", U, p)
    K, T = spec.battlefields, og.layer_size
    tails, heads = og.layer_pairs[:, 0], og.layer_pairs[:, 1]
    d = np.full((K + 1, T), -np.inf)
    d[0, 0] = 0.0
    choice = np.zeros((K + 1, T), dtype=np.int64)
    for k in range(1, K + 1):
        cand = d[k - 1, tails] + w[k - 1, heads - tails]
        best = np.full(T, -np.inf)
        arg = np.zeros(T, dtype=np.int64)
        for e in range(len(tails)):  # strict > keeps the smallest tail on ties
            h = heads[e]
            if cand[e] > best[h]:
                best[h], arg[h] = cand[e], tails[e]
        d[k], choice[k] = best, arg
    alloc, at = [], T - 1
    for k in range(K, 0, -1):
        prev = int(choice[k, at])
        alloc.append(tuple(y - x for x, y in zip(og.vector(prev), og.vector(at))))
        at = prev
    return float(d[K, T - 1]), tuple(reversed(alloc))


# -- solving --------------------------------------------------------------------------


class MrcbSolverFailure(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class MrcbResult:
    spec: MrcbSpec
    player: str
    value: float
    support: tuple  # ((allocation, probability), ...)
    marginals: np.ndarray  # [k, flat vector]
    best_response_value: float
    gap: float
    passed: bool
    mlp: MrcbLP
    solution: LPSolution
    solve_seconds: float

    def document(self) -> dict:
        return {
            "player": self.player,
            "value": self.value,
            "support": [{"allocation": [list(v) for v in a], "probability": pr} for a, pr in self.support],
            "marginals": self.marginals.tolist(),
            "certificate": {"best_response_value": self.best_response_value, "gap": self.gap,
                            "pass": self.passed},
        }


def mrcb_marginals(support, spec: MrcbSpec, player: str) -> np.ndarray:
    shape = spec.shape(player)
    p = np.zeros((spec.battlefields, math.prod(shape)))
    for alloc, prob in support:
        for k, vec in enumerate(alloc):
            p[k, np.ravel_multi_index(vec, shape)] += prob
    return p


def decompose_mrcb_flow(values: np.ndarray, graph: GeneralizedLayeredGraph) -> tuple:
    """Peel a unit flow (edge vector in flat-index order) into ``((allocation, prob), ...)``."""
    E = graph.edges_per_layer
    edges = {}
    for idx in np.flatnonzero(values > 0):
        k, e = divmod(int(idx), E)
        a, h = graph.layer_pairs[e]
        edges[(k + 1, int(a), int(h))] = float(values[idx])
    paths, lost = peel_paths(edges, graph.battlefields, 0, graph.sink)
    if lost > RESIDUAL_TOL or not paths:
        raise GameError(f"flow does not decompose: {lost:.3g} of its mass is not on any path")
    support = []
    for heads, prob in normalise(paths):
        prefix = (0,) + heads
        alloc = tuple(tuple(y - x for x, y in zip(graph.vector(a), graph.vector(h)))
                      for a, h in zip(prefix, heads))
        support.append((alloc, prob))
    return tuple(support)


def solve_mrcb(spec: MrcbSpec, player: str = "A", solver: str = "embedded", **lp_options) -> MrcbResult:
    mlp = build_mrcb_lp(spec, player)
    if solver == "embedded" and "initial_basis" not in lp_options:
        lp_options["initial_basis"] = mrcb_starting_basis(mlp)
    t0 = time.perf_counter()
    sol = solve_lp(mlp.lp, solver=solver, **lp_options)
    elapsed = time.perf_counter() - t0
    if not sol.optimal:
        raise MrcbSolverFailure(f"MRCB LP for player {player} ended {sol.status}")
    residual = np.max(np.abs(mlp.lp.residuals(sol.x)), initial=0.0)
    if residual > FLOW_TOL:
        raise MrcbSolverFailure(f"LP solution violates its rows by {residual:.3g}")
    support = decompose_mrcb_flow(mlp.flow_values(sol.x), mlp.graph)
    p = mrcb_marginals(support, spec, player)
    value = float(sol.x[mlp.u_index])
    v_star, _ = mrcb_best_response(p, spec, other(player))
    return MrcbResult(spec, player, value, support, p, v_star, v_star + value,
                      bool(v_star <= -value + CERT_TOL), mlp, sol, elapsed)
