import numpy as np
import pytest

from blotto.best_response import best_response_table, weight_table
from blotto.formulation import (
    SizeLimitError,
    balanced_allocation,
    build_maxmin_lp,
    constraint_census,
    expected_rows,
    starting_basis,
)
from blotto.game import GameSpec, Marginals, Tabular
from blotto.lp import OPTIMAL, solve_lp
from blotto.oracle import make_game
from blotto.solver import solve_game


def test_variable_counts():
    blp = build_maxmin_lp(GameSpec.auctionary(3, 3, 5), "A")
    K, n, m = 3, 3, 5
    assert blp.graph.num_edges == 30 == K * (n + 1) * (n + 2) // 2
    assert blp.p_start - blp.f_start == 30
    assert blp.w_start - blp.p_start == K * (n + 1)
    assert blp.d_start - blp.w_start == K * (m + 1)
    assert blp.u_index - blp.d_start == (K + 1) * (m + 1)
    assert blp.lp.num_cols == blp.u_index + 1


def test_player_b_uses_swapped_graphs():
    blp = build_maxmin_lp(GameSpec.auctionary(2, 5, 3), "B")
    assert blp.troops == 3 and blp.opp_troops == 5


def test_census_k1_by_hand():
    c = constraint_census(build_maxmin_lp(GameSpec.auctionary(1, 1, 1)))
    # no internal layers; src0 for v[0,1], source, sink; two p rows; two w rows;
    # d[0,0] = 0; d rows (i, j) in {(0,0), (1,0), (1,1)}; one cap row
    assert c.families == {"conservation": 0, "source_sink": 3, "p_def": 2, "w_def": 2,
                          "d_init": 1, "d_recurrence": 3, "payoff_cap": 1}
    assert c.rows_excl_nonneg == 12
    assert c.nonnegativity == 3 + 2  # F and p
    assert c.rows_total == 17


def test_census_k10_n20():
    c = constraint_census(build_maxmin_lp(GameSpec.auctionary(10, 20, 20)))
    assert c.families["d_recurrence"] == 2310
    assert max(c.families.values()) == c.families["d_recurrence"]
    assert c.families == expected_rows(10, 20, 20)
    assert 3595 / 1.5 <= c.rows_excl_nonneg <= 3595 * 1.5
    assert len(c.csv_row()) == len(c.CSV_HEADER)


def test_family_rows_match_closed_forms():
    for K, A, B in [(1, 0, 0), (2, 3, 1), (4, 2, 5), (3, 0, 4)]:
        for player in "AB":
            blp = build_maxmin_lp(GameSpec.auctionary(K, A, B), player)
            n, m = (A, B) if player == "A" else (B, A)
            assert constraint_census(blp).families == expected_rows(K, n, m)
            assert blp.lp.num_rows == sum(expected_rows(K, n, m).values())


def test_size_cap():
    with pytest.raises(SizeLimitError, match="rows"):
        build_maxmin_lp(GameSpec.auctionary(10, 20, 20), max_rows=100)


def test_single_cell_game():
    sol = solve_lp(build_maxmin_lp(GameSpec.auctionary(1, 0, 0)).lp)
    assert sol.status == OPTIMAL
    assert sol.objective == pytest.approx(0.0, abs=1e-12)
    spec = GameSpec(1, 0, 0, Tabular([[[0.7]]]))
    assert solve_lp(build_maxmin_lp(spec).lp).objective == pytest.approx(0.7)


def test_opponent_without_troops():
    r = solve_game(GameSpec.auctionary(3, 2, 0))
    assert r.value == pytest.approx(2.0)


@pytest.mark.parametrize("K,A,B,family", [
    (3, 4, 3, "auctionary-unit"), (2, 5, 4, "tabular"), (4, 3, 5, "auctionary-random"), (3, 6, 6, "tabular"),
])
def test_solution_invariants(K, A, B, family):
    spec = make_game(K, A, B, family, seed=3)
    for player in "AB":
        r = solve_game(spec, player)
        blp, x = r.blp, r.solution.x
        assert r.flow.violations(1e-7) == []
        p = blp.p_values(x)
        assert np.max(np.abs(p.sum(axis=1) - 1.0)) <= 1e-7
        d = blp.d_values(x)
        assert r.value == pytest.approx(-d[-1, -1], abs=1e-7)
        assert np.max(blp.lp.residuals(x)) <= 1e-7
        # the LP's d dominates the exact DP on every reachable vertex
        opp = "B" if player == "A" else "A"
        table = best_response_table(weight_table(Marginals(p, player), spec, opp), blp.opp_troops)
        reach = np.isfinite(table.d)
        assert np.all(d[reach] >= table.d[reach] - 1e-6)
        assert d[-1, -1] == pytest.approx(table.d[-1, -1], abs=1e-6)


def test_value_invariant_under_field_permutation():
    rng = np.random.default_rng(11)
    values = rng.uniform(-1, 1, size=(3, 4, 5))
    perm = [2, 0, 1]
    v1 = solve_game(GameSpec(3, 3, 4, Tabular(values))).value
    v2 = solve_game(GameSpec(3, 3, 4, Tabular(values[perm]))).value
    assert v1 == pytest.approx(v2, abs=1e-7)


def test_balanced_allocation():
    assert balanced_allocation(4, 10) == (3, 3, 2, 2)
    assert balanced_allocation(3, 0) == (0, 0, 0)


def test_starting_basis_is_feasible_and_square():
    blp = build_maxmin_lp(make_game(3, 4, 5, "tabular", 0), "A")
    basis = starting_basis(blp)
    # rows not listed keep their slack; every listed column is distinct
    assert len(set(basis.values())) == len(basis) <= blp.lp.num_rows
    sol = solve_lp(blp.lp, initial_basis=basis)
    assert sol.phase1_iterations == 0
    assert sol.objective == pytest.approx(solve_lp(blp.lp, solver="external").objective, abs=1e-7)
    with pytest.raises(ValueError):
        starting_basis(blp, allocation=(1, 1, 1))


def test_warm_and_cold_starts_agree():
    spec = make_game(3, 5, 4, "auctionary-random", 2)
    blp = build_maxmin_lp(spec)
    warm = solve_lp(blp.lp, initial_basis=starting_basis(blp)).objective
    cold = solve_lp(blp.lp).objective
    assert warm == pytest.approx(cold, abs=1e-9)
