import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blotto.game import GameError, GameSpec, MixedStrategy, PureStrategy
from blotto.layered import (
    Flow,
    LayeredGraph,
    count_long_edges,
    flow_of_mixed,
    long_edge_threshold,
    long_edges,
    path_of_pure,
    pure_of_path,
)
from blotto.oracle import compositions


def test_edge_index_is_dense_and_ordered():
    for K, n in itertools.product(range(1, 4), range(6)):
        g = LayeredGraph(K, n)
        idx = [g.edge_index(*e) for e in g.edges()]
        assert idx == list(range(g.num_edges))
        assert g.num_edges == K * (n + 1) * (n + 2) // 2
        assert np.array_equal(g.edge_array, np.array(list(g.edges())).reshape(-1, 3))


def test_edge_index_rejects_non_edges():
    g = LayeredGraph(2, 3)
    for e in [(0, 0, 0), (3, 0, 0), (1, 2, 1), (1, 0, 4)]:
        with pytest.raises(IndexError):
            g.edge_index(*e)


@pytest.mark.parametrize("alloc,want", [
    ((0, 1, 2), [(1, 0, 0), (2, 0, 1), (3, 1, 3)]),
    ((3,), [(1, 0, 3)]),
    ((2, 0, 1), [(1, 0, 2), (2, 2, 2), (3, 2, 3)]),
])
def test_path_of_pure(alloc, want):
    assert path_of_pure(PureStrategy(alloc)) == want
    spec = GameSpec.auctionary(len(alloc), sum(alloc), 0)
    assert pure_of_path(want, spec, "A").allocation == alloc


def test_path_bijection_exhaustive():
    for K, n in itertools.product(range(1, 4), range(6)):
        spec = GameSpec.auctionary(K, n, 0)
        paths = set()
        for alloc in compositions(n, K):
            s = PureStrategy(alloc)
            path = path_of_pure(s)
            assert len(path) == K
            assert pure_of_path(path, spec, "A") == s
            paths.add(tuple(path))
        assert len(paths) == len(list(compositions(n, K)))


@pytest.mark.parametrize("path", [
    [(1, 0, 1), (2, 2, 3), (3, 3, 3)],  # gap
    [(1, 0, 1), (2, 1, 2), (3, 2, 2)],  # wrong sink
    [(1, 0, 3), (2, 3, 3)],             # too short
    [(1, 1, 1), (2, 1, 2), (3, 2, 3)],  # wrong source
])
def test_pure_of_path_rejects(path):
    with pytest.raises(GameError):
        pure_of_path(path, GameSpec.auctionary(3, 3, 0), "A")


def test_long_edge_examples():
    assert count_long_edges(3, 3) == 3
    assert count_long_edges(1, 5) == 0
    assert count_long_edges(10, 10) == 100
    assert len([e for e in LayeredGraph(10, 10).edges() if e[2] - e[1] > 6]) == 100


def test_long_edge_threshold_rules():
    assert long_edge_threshold(10) == 6
    assert long_edge_threshold(10, "text") == 5
    with pytest.raises(ValueError):
        long_edge_threshold(3, "other")


def test_canonical_path_has_at_most_one_long_edge():
    for K, n in itertools.product(range(1, 4), range(6)):
        for alloc in compositions(n, K):
            long = [e for e in path_of_pure(PureStrategy(alloc)) if e[2] - e[1] > n / 2]
            assert len(long) <= 1


def test_flow_of_pure_is_indicator():
    f = flow_of_mixed(MixedStrategy.pure(PureStrategy((0, 1, 2))))
    assert f.values == {(1, 0, 0): 1.0, (2, 0, 1): 1.0, (3, 1, 3): 1.0}
    assert f.violations() == []


def test_flow_of_three_path_mixture():
    mix = MixedStrategy.from_allocations([(0, 1, 2), (1, 1, 1), (3, 0, 0)], [0.3, 0.4, 0.3])
    f = flow_of_mixed(mix)
    assert f[(1, 0, 0)] == pytest.approx(0.3)
    assert f[(1, 0, 1)] == pytest.approx(0.4)
    assert f[(1, 0, 3)] == pytest.approx(0.3)
    assert f[(2, 1, 2)] == pytest.approx(0.4)
    assert f.violations() == []
    assert np.allclose(f.marginals().sum(axis=1), 1.0)


def _uniform_pairs(K, n):
    allocs = list(compositions(n, K))
    for a, b, c, d in itertools.combinations(range(len(allocs)), 4):
        for first, second in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
            m1 = MixedStrategy.from_allocations([allocs[i] for i in first], [0.5, 0.5])
            m2 = MixedStrategy.from_allocations([allocs[i] for i in second], [0.5, 0.5])
            yield m1, m2


def test_flow_determines_mixture_on_three_fields():
    # with only two inner layers each middle edge belongs to one path
    for m1, m2 in _uniform_pairs(3, 2):
        assert flow_of_mixed(m1).values != flow_of_mixed(m2).values


def test_distinct_mixtures_can_share_a_flow():
    found = None
    for m1, m2 in _uniform_pairs(4, 2):
        f1, f2 = flow_of_mixed(m1), flow_of_mixed(m2)
        if f1.values == f2.values:
            found = (m1, m2)
            break
    assert found is not None
    m1, m2 = found
    assert {s.allocation for s, _ in m1.support} != {s.allocation for s, _ in m2.support}
    assert np.allclose(flow_of_mixed(m1).marginals(), flow_of_mixed(m2).marginals())


def test_flow_checks():
    g = LayeredGraph(2, 2)
    with pytest.raises(GameError):
        Flow(g, {(1, 0, 1): -0.5})
    bad = Flow(g, {(1, 0, 1): 1.0, (2, 1, 1): 1.0})
    assert bad.violations()
    with pytest.raises(GameError):
        bad.check()
    tiny = Flow(g, {(1, 0, 2): 1.0, (2, 2, 2): 1.0, (1, 0, 0): -1e-13})
    assert tiny.values == {(1, 0, 2): 1.0, (2, 2, 2): 1.0}


def test_flow_serialisation_round_trip():
    f = flow_of_mixed(MixedStrategy.from_allocations([(0, 1, 2), (2, 1, 0)], [0.25, 0.75]))
    assert Flow.from_dict(f.to_dict()).values == f.values
    assert Flow.from_vector(f.graph, f.to_vector()).values == f.values


@st.composite
def mixed_strategies(draw):
    K = draw(st.integers(1, 4))
    n = draw(st.integers(0, 6))
    allocs = list(compositions(n, K))
    idx = draw(st.lists(st.integers(0, len(allocs) - 1), min_size=1, max_size=6, unique=True))
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=len(idx), max_size=len(idx)))
    total = sum(weights)
    return MixedStrategy.from_allocations([allocs[i] for i in idx], [w / total for w in weights])


@settings(max_examples=1000, deadline=None)
@given(mixed_strategies())
def test_flow_of_mixed_always_valid(mix):
    f = flow_of_mixed(mix)
    assert f.violations() == []
    assert all(v >= 0 for v in f.values.values())
