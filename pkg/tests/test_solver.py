import json

import numpy as np
import pytest

from blotto.best_response import certify
from blotto.game import GameError, GameSpec
from blotto.layered import flow_of_mixed
from blotto.oracle import make_game
from blotto.solver import read_strategy, solve_game, strategy_document, write_strategy


def test_small_known_values():
    assert solve_game(GameSpec.auctionary(2, 2, 1)).value == pytest.approx(1.0)
    assert solve_game(GameSpec.auctionary(2, 2, 1), "B").value == pytest.approx(-1.0)
    assert solve_game(GameSpec.auctionary(5, 7, 7)).value == pytest.approx(0.0, abs=1e-9)


def test_result_consistency():
    spec = make_game(3, 5, 4, "tabular", 9)
    r = solve_game(spec)
    assert r.certificate.passed
    assert r.support_size <= spec.battlefields * 6 * 7 // 2
    f = flow_of_mixed(r.strategy)
    assert max(abs(f[e] - r.flow[e]) for e in set(f.values) | set(r.flow.values)) <= 1e-7
    assert np.allclose(r.marginals.p, r.flow.marginals(), atol=1e-7)
    assert r.solve_seconds >= 0 and r.build_seconds >= 0


def test_external_solver_matches():
    spec = make_game(3, 4, 5, "auctionary-random", 2)
    assert solve_game(spec, solver="external").value == pytest.approx(solve_game(spec).value, abs=1e-7)


def test_deterministic_documents():
    spec = make_game(2, 4, 3, "tabular", 0)
    assert strategy_document(solve_game(spec)) == strategy_document(solve_game(spec))


def test_strategy_file_round_trip(tmp_path):
    spec = GameSpec.auctionary(3, 5, 4)
    r = solve_game(spec)
    path = tmp_path / "s.json"
    write_strategy(r, path)
    doc = json.loads(path.read_text())
    assert set(doc) == {"player", "value", "support", "marginals", "certificate"}
    stored = read_strategy(path, spec)
    again = certify(stored.value, stored.marginals, spec)
    assert again.passed == stored.certificate["pass"] is True
    assert stored.value == r.value


def test_read_strategy_rejects_tampering():
    spec = GameSpec.auctionary(2, 3, 2)
    doc = strategy_document(solve_game(spec))
    doc["marginals"][0][0] += 0.1
    with pytest.raises(GameError):
        read_strategy(doc, spec)
    with pytest.raises(GameError):
        read_strategy({"player": "A"}, spec)
