import pytest

from blotto.experiments import (
    TABLE1,
    BenchRow,
    NotApplicable,
    SweepRow,
    bench,
    census_ratio,
    continuous_value,
    sweep,
    sweep_game,
)
from blotto.oracle import matrix_game_value
from blotto.solver import solve_game


def test_continuous_value():
    assert continuous_value(5, 7, 7) == 0.0
    assert continuous_value(2, 45, 30) == pytest.approx(2 / 3)
    assert continuous_value(6, 15, 10) == pytest.approx(2.0)
    out = continuous_value(6, 100, 10)
    assert isinstance(out, NotApplicable) and not out
    assert isinstance(continuous_value(3, 2, 5), NotApplicable)
    assert continuous_value(2, 300, 30) == pytest.approx(1.8)


def test_table1_constant():
    assert len(TABLE1) == 18
    assert TABLE1[0] == (10, 20, 20, 3595, 3.575)
    assert TABLE1[-1] == (20, 30, 30, 13210, 553.288)


def test_sweep_rows_match_single_solves():
    rows = list(sweep(3, 2, range(2, 6)))
    assert [r.A for r in rows] == [2, 3, 4, 5]
    for r in rows:
        assert r.value == solve_game(sweep_game(3, r.A, 2)).value
        assert len(r.csv_row()) == len(SweepRow.HEADER)
    assert rows[0].value == pytest.approx(0.0, abs=1e-9)
    assert rows[-1].value == pytest.approx(matrix_game_value(sweep_game(3, 5, 2))[0], abs=1e-9)
    assert list(sweep(3, 2, [9]))[0].value == pytest.approx(3.0)


def test_parallel_sweep_keeps_order():
    serial = [r.value for r in sweep(2, 1, range(1, 6), payoff="tabular", seed=3)]
    parallel = [r.value for r in sweep(2, 1, range(1, 6), payoff="tabular", seed=3, workers=2)]
    assert serial == parallel


def test_sweep_rejects_unknown_payoff():
    with pytest.raises(ValueError):
        list(sweep(2, 1, [2], payoff="linear"))


def test_bench_rows():
    rows = list(bench([(2, 3, 3), (3, 2, 4)]))
    assert [(r.K, r.A, r.B) for r in rows] == [(2, 3, 3), (3, 2, 4)]
    assert all(r.certified for r in rows)
    assert len(rows[0].csv_row()) == len(BenchRow.HEADER)
    assert list(bench([])) == []


def test_census_ratios():
    assert 1.7 <= census_ratio(10, 20, factor=1) * 2 <= 2.3  # sanity on the helper itself
    assert census_ratio(10, 20) > 3.0
