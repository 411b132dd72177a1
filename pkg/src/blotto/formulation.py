"""Polynomial-size maxmin LP for discrete Colonel Blotto.

For the solving player ``P`` (budget ``n``) against opponent ``O`` (budget ``m``)
on ``K`` battlefields the program is::

    max u
    (a) F is a unit flow from v[0,0] to v[K,n] on P's layered graph, F >= 0
    (b) p[k,j] = sum_i F[k,i,i+j]                    (P's marginals)
        w[k,i] = sum_l p[k,l] * U^O_k(i, l)          (O's expected payoff per field)
        d[0,0] = 0
        d[k,i] >= d[k-1,j] + w[k,i-j]   for 0 <= j <= i <= m, 1 <= k <= K
        d[K,m] <= -u

``d[k,i]`` upper-bounds the best payoff O can collect by spending ``i`` troops
on the first ``k`` fields, so ``-d[K,m]`` is a guarantee for P. The vertices
``d[0,i]`` with ``i > 0`` are left free: O cannot start a path there, and a
free variable that only appears on the small side of ``>=`` rows lets those
rows go slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import GameSpec, check_player, other
from .layered import LayeredGraph
from .lp import EQ, GE, LE, LPBuilder, StandardLP

DEFAULT_MAX_ROWS = 2_000_000

FAMILIES = (
    "conservation",
    "source_sink",
    "p_def",
    "w_def",
    "d_init",
    "d_recurrence",
    "payoff_cap",
)


class SizeLimitError(ValueError):
    """The requested program exceeds the configured size cap."""


@dataclass(frozen=True, eq=False)
class BlottoLP:
    lp: StandardLP
    spec: GameSpec
    player: str
    graph: LayeredGraph  # solving player's graph
    opp_troops: int
    f_start: int
    p_start: int
    w_start: int
    d_start: int
    u_index: int
    families: dict = field(default_factory=dict)  # family -> (first_row, stop_row)

    @property
    def battlefields(self) -> int:
        return self.spec.battlefields

    @property
    def troops(self) -> int:
        return self.graph.troops

    def f_index(self, k: int, i: int, l: int) -> int:
        return self.f_start + self.graph.edge_index(k, i, l)

    def p_index(self, k: int, j: int) -> int:
        return self.p_start + (k - 1) * (self.troops + 1) + j

    def w_index(self, k: int, i: int) -> int:
        return self.w_start + (k - 1) * (self.opp_troops + 1) + i

    def d_index(self, k: int, i: int) -> int:
        return self.d_start + k * (self.opp_troops + 1) + i

    # row positions
    def row(self, family: str, offset: int = 0) -> int:
        start, stop = self.families[family]
        if not 0 <= offset < stop - start:
            raise IndexError(f"{family} has no row {offset}")
        return start + offset

    def cons_row(self, k: int, l: int) -> int:
        return self.row("conservation", (k - 1) * (self.troops + 1) + l)

    def drec_row(self, k: int, i: int, j: int) -> int:
        m = self.opp_troops
        return self.row("d_recurrence", (k - 1) * (m + 1) * (m + 2) // 2 + i * (i + 1) // 2 + j)

    # solution views
    def flow_values(self, x) -> np.ndarray:
        return np.asarray(x)[self.f_start:self.f_start + self.graph.num_edges]

    def p_values(self, x) -> np.ndarray:
        K, n = self.battlefields, self.troops
        return np.asarray(x)[self.p_start:self.p_start + K * (n + 1)].reshape(K, n + 1)

    def w_values(self, x) -> np.ndarray:
        K, m = self.battlefields, self.opp_troops
        return np.asarray(x)[self.w_start:self.w_start + K * (m + 1)].reshape(K, m + 1)

    def d_values(self, x) -> np.ndarray:
        K, m = self.battlefields, self.opp_troops
        return np.asarray(x)[self.d_start:self.d_start + (K + 1) * (m + 1)].reshape(K + 1, m + 1)


def expected_rows(K: int, n: int, m: int) -> dict:
    """Closed-form row count of every constraint family."""
    return {
        "conservation": (K - 1) * (n + 1),
        "source_sink": n + 2,
        "p_def": K * (n + 1),
        "w_def": K * (m + 1),
        "d_init": 1,
        "d_recurrence": K * (m + 1) * (m + 2) // 2,
        "payoff_cap": 1,
    }


def build_maxmin_lp(spec: GameSpec, player: str = "A", max_rows: int = DEFAULT_MAX_ROWS) -> BlottoLP:
    """Maxmin program for ``player``; the opponent's best response is encoded by the d-rows."""
    check_player(player)
    opp = other(player)
    K, n, m = spec.battlefields, spec.budget(player), spec.budget(opp)
    rows_needed = sum(expected_rows(K, n, m).values())
    if rows_needed > max_rows:
        raise SizeLimitError(
            f"LP for K={K}, N_self={n}, N_opp={m} needs {rows_needed} rows (cap {max_rows})"
        )
    graph = LayeredGraph(K, n)
    # U_opp[k, i, l]: opponent's payoff sending i against our l
    u_opp = spec.payoff_table_for(opp)

    b = LPBuilder()
    f0 = b.add_vars(graph.num_edges, lower=0.0,
                    names=[f"F_{k}_{i}_{l}" for k, i, l in graph.edges()])
    p0 = b.add_vars(K * (n + 1), lower=0.0,
                    names=[f"p_{k}_{j}" for k in range(1, K + 1) for j in range(n + 1)])
    w0 = b.add_vars(K * (m + 1), lower=-np.inf,
                    names=[f"w_{k}_{i}" for k in range(1, K + 1) for i in range(m + 1)])
    d0 = b.add_vars((K + 1) * (m + 1), lower=-np.inf,
                    names=[f"d_{k}_{i}" for k in range(K + 1) for i in range(m + 1)])
    u = b.add_vars(1, lower=-np.inf, obj=1.0, names=["u"])

    def F(k, i, l):
        return f0 + graph.edge_index(k, i, l)

    def P(k, j):
        return p0 + (k - 1) * (n + 1) + j

    def W(k, i):
        return w0 + (k - 1) * (m + 1) + i

    def D(k, i):
        return d0 + k * (m + 1) + i

    families = {}

    def family(name):
        families[name] = [b.num_rows, None]

    def close(name):
        families[name][1] = b.num_rows

    # (a) membership: unit flow from v[0,0] to v[K,n]
    family("conservation")
    for k in range(1, K):
        for l in range(n + 1):
            cols = [F(k, i, l) for i in range(l + 1)] + [F(k + 1, l, j) for j in range(l, n + 1)]
            vals = [1.0] * (l + 1) + [-1.0] * (n + 1 - l)
            b.add_row(cols, vals, EQ, 0.0, f"cons_{k}_{l}")
    close("conservation")
    family("source_sink")
    for l in range(1, n + 1):
        b.add_row([F(1, l, j) for j in range(l, n + 1)], [1.0] * (n + 1 - l), EQ, 0.0, f"src0_{l}")
    b.add_row([F(1, 0, j) for j in range(n + 1)], [1.0] * (n + 1), EQ, 1.0, "source")
    b.add_row([F(K, j, n) for j in range(n + 1)], [1.0] * (n + 1), EQ, 1.0, "sink")
    close("source_sink")

    # (b) payoff constraints
    family("p_def")
    for k in range(1, K + 1):
        for j in range(n + 1):
            cols = [P(k, j)] + [F(k, i, i + j) for i in range(n - j + 1)]
            b.add_row(cols, [1.0] + [-1.0] * (n - j + 1), EQ, 0.0, f"pdef_{k}_{j}")
    close("p_def")
    family("w_def")
    for k in range(1, K + 1):
        for i in range(m + 1):
            coef = u_opp[k - 1, i, :]
            nz = np.flatnonzero(coef)
            cols = [W(k, i)] + [P(k, l) for l in nz]
            b.add_row(cols, [1.0] + (-coef[nz]).tolist(), EQ, 0.0, f"wdef_{k}_{i}")
    close("w_def")
    family("d_init")
    b.add_row([D(0, 0)], [1.0], EQ, 0.0, "dinit_0")
    close("d_init")
    family("d_recurrence")
    for k in range(1, K + 1):
        for i in range(m + 1):
            for j in range(i + 1):
                b.add_row([D(k, i), D(k - 1, j), W(k, i - j)], [1.0, -1.0, -1.0], GE, 0.0,
                          f"drec_{k}_{i}_{j}")
    close("d_recurrence")
    family("payoff_cap")
    b.add_row([D(K, m), u], [1.0, 1.0], LE, 0.0, "cap")
    close("payoff_cap")

    return BlottoLP(
        lp=b.build(),
        spec=spec,
        player=player,
        graph=graph,
        opp_troops=m,
        f_start=f0,
        p_start=p0,
        w_start=w0,
        d_start=d0,
        u_index=u,
        families={k: tuple(v) for k, v in families.items()},
    )


@dataclass(frozen=True)
class Census:
    K: int
    A: int
    B: int
    player: str
    families: dict
    nonnegativity: int
    cols: int
    nonzeros: int

    @property
    def rows_excl_nonneg(self) -> int:
        """Row count without simple ``x >= 0`` bounds (the convention of the published table)."""
        return sum(self.families.values())

    @property
    def rows_total(self) -> int:
        return self.rows_excl_nonneg + self.nonnegativity

    CSV_HEADER = ("K", "A", "B", "rows_excl_nonneg", "rows_total", "cols", "nonzeros")

    def csv_row(self) -> tuple:
        return (self.K, self.A, self.B, self.rows_excl_nonneg, self.rows_total, self.cols, self.nonzeros)


def constraint_census(blp: BlottoLP) -> Census:
    lp = blp.lp
    families = {name: stop - start for name, (start, stop) in blp.families.items()}
    nonneg = int(np.sum((lp.lower == 0.0) & (lp.upper == np.inf)))
    return Census(
        K=blp.spec.battlefields,
        A=blp.spec.troops_a,
        B=blp.spec.troops_b,
        player=blp.player,
        families=families,
        nonnegativity=nonneg,
        cols=lp.num_cols,
        nonzeros=lp.nnz,
    )


def balanced_allocation(K: int, n: int) -> tuple[int, ...]:
    base, extra = divmod(n, K)
    return tuple(base + (k < extra) for k in range(K))


def starting_basis(blp: BlottoLP, allocation=None) -> dict:
    """Feasible triangular basis ``{row: column}`` built from one pure strategy.

    The flow is the strategy's path and the opponent block holds its exact DP
    against it (with ``d[0, i] = 0``, the value the free nonbasic ``d[0, i]``
    take). Every listed column's row is untouched by the columns listed before
    it (u, d by decreasing layer, w, p, then path edges by decreasing layer),
    so the basis is nonsingular, and all rows hold at the start.
    """
    K, n, m = blp.battlefields, blp.troops, blp.opp_troops
    alloc = balanced_allocation(K, n) if allocation is None else tuple(int(a) for a in allocation)
    if len(alloc) != K or sum(alloc) != n or min(alloc) < 0:
        raise ValueError(f"{alloc} is not an allocation of {n} troops to {K} fields")
    u_opp = blp.spec.payoff_table_for(other(blp.player))
    w = np.array([u_opp[k, :, alloc[k]] for k in range(K)])  # opponent payoff vs the pure strategy

    basis = {blp.row("payoff_cap"): blp.u_index, blp.row("d_init"): blp.d_index(0, 0)}
    d = np.zeros(m + 1)
    rows_d = {}
    for k in range(1, K + 1):
        nxt = np.empty(m + 1)
        for i in range(m + 1):
            cand = d[:i + 1] + w[k - 1, i::-1]
            j = int(np.argmax(cand))
            nxt[i] = cand[j]
            rows_d[(k, i)] = blp.drec_row(k, i, j)
        d = nxt
    for k in range(K, 0, -1):
        for i in range(m + 1):
            basis[rows_d[(k, i)]] = blp.d_index(k, i)
    for k in range(1, K + 1):
        for i in range(m + 1):
            basis[blp.row("w_def", (k - 1) * (m + 1) + i)] = blp.w_index(k, i)
    for k in range(1, K + 1):
        for j in range(n + 1):
            basis[blp.row("p_def", (k - 1) * (n + 1) + j)] = blp.p_index(k, j)
    prefix = np.concatenate([[0], np.cumsum(alloc)]).astype(int)
    for k in range(K, 0, -1):
        tail = blp.row("source_sink", n) if k == 1 else blp.cons_row(k - 1, prefix[k - 1])
        basis[tail] = blp.f_index(k, prefix[k - 1], prefix[k])
    return basis
