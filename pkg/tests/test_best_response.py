import itertools

import numpy as np
import pytest

from blotto.best_response import (
    WeightTable,
    best_response_table,
    best_response_value,
    certify,
    certify_maxmin,
    weight_table,
)
from blotto.game import GameError, GameSpec, Marginals, MixedStrategy, PureStrategy, Tabular, marginals_of
from blotto.oracle import compositions
from blotto.solver import solve_game


def exhaustive(w, n):
    K = w.shape[0]
    best = -np.inf
    for alloc in compositions(n, K):
        total = 0.0
        for k in range(K):
            total += w[k, alloc[k]]
        best = max(best, total)
    return best


def test_weight_table_uniform():
    spec = GameSpec.auctionary(2, 1, 1)
    w = weight_table(Marginals(np.full((2, 2), 0.5), "A"), spec, "B").w
    assert np.allclose(w, [[-0.5, 0.5], [-0.5, 0.5]])


def test_weight_table_one_hot_zero():
    spec = GameSpec.auctionary(3, 2, 3)
    w = weight_table(Marginals(np.eye(3)[[0, 0, 0]], "A"), spec, "B").w
    assert np.array_equal(w, np.array([[0, 1, 1, 1]] * 3, dtype=float))


def test_weight_table_matches_direct_expectation():
    rng = np.random.default_rng(4)
    spec = GameSpec(3, 3, 2, Tabular(rng.uniform(-1, 1, size=(3, 4, 3))))
    allocs = list(compositions(3, 3))
    probs = rng.dirichlet(np.ones(len(allocs)))
    mix = MixedStrategy.from_allocations(allocs, probs)
    w = weight_table(marginals_of(mix, spec), spec, "B").w
    U_b = spec.payoff_table_for("B")
    for k in range(3):
        for i in range(3):
            direct = sum(p * U_b[k, i, a[k]] for a, p in zip(allocs, probs))
            assert w[k, i] == pytest.approx(direct, abs=1e-12)


def test_weight_table_rejects_wrong_owner():
    spec = GameSpec.auctionary(2, 1, 1)
    with pytest.raises(GameError):
        weight_table(Marginals(np.full((2, 2), 0.5), "B"), spec, "B")
    with pytest.raises(GameError):
        WeightTable(np.array([[np.inf]]))


def test_hand_examples():
    value, alloc = best_response_value(WeightTable(np.array([[-0.5, 0.5], [-0.5, 0.5]])), 1)
    assert value == 0.0
    assert alloc.troops == 1
    value, _ = best_response_value(WeightTable(np.zeros((3, 4))), 3)
    assert value == 0.0


def test_dp_equals_enumeration_exactly():
    rng = np.random.default_rng(8)
    for K, n in itertools.product(range(1, 5), range(7)):
        for _ in range(3):
            w = rng.normal(size=(K, n + 1))
            value, alloc = best_response_value(WeightTable(w), n)
            assert value == exhaustive(w, n)
            assert sum(w[k, a] for k, a in enumerate(alloc.allocation)) == pytest.approx(value, abs=1e-12)


def test_ties_prefer_fewer_troops_early():
    table = best_response_table(WeightTable(np.zeros((2, 3))), 2)
    assert table.allocation().allocation == (0, 2)


def test_constant_shift():
    rng = np.random.default_rng(9)
    w = rng.normal(size=(3, 5))
    base, alloc = best_response_value(WeightTable(w), 4)
    shifted = w.copy()
    shifted[1] += 0.75
    value, alloc2 = best_response_value(WeightTable(shifted), 4)
    assert value == pytest.approx(base + 0.75, abs=1e-12)
    assert alloc2 == alloc


def test_unreachable_entries():
    table = best_response_table(WeightTable(np.zeros((2, 3))), 2)
    assert table.d[0, 0] == 0.0 and np.all(np.isneginf(table.d[0, 1:]))
    assert np.all(np.isfinite(table.d[1:]))


def test_certificate_symmetric_and_dominant():
    r = solve_game(GameSpec.auctionary(3, 4, 4))
    cert = certify_maxmin(r, r.spec)
    assert cert.passed and abs(r.value) <= 1e-6 and abs(cert.best_response_value) <= 1e-6
    r = solve_game(GameSpec.auctionary(3, 9, 2))
    assert r.value == pytest.approx(3.0)
    assert r.certificate.best_response_value == pytest.approx(-3.0)


def test_certificate_failure_reports_response():
    spec = GameSpec.auctionary(2, 2, 2)
    ma = marginals_of(MixedStrategy.pure(PureStrategy((2, 0))), spec)
    cert = certify(0.5, ma, spec)  # (2, 0) only guarantees 0
    assert not cert.passed
    assert cert.gap == pytest.approx(0.5)
    assert cert.response.owner == "B" and cert.response.troops == 2
    assert "violating response" in cert.describe()
    assert cert.to_dict()["pass"] is False
