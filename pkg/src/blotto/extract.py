"""Path decomposition of unit flows into explicit mixed strategies."""

from __future__ import annotations

import math

from .game import GameError, GameSpec, MixedStrategy, PureStrategy, check_player
from .layered import Flow

TRAVERSE_TOL = 1e-10
RESIDUAL_TOL = 1e-6
INPUT_TOL = 1e-6


def _check_shape(f: Flow, spec: GameSpec, player: str):
    g = f.graph
    if g.battlefields != spec.battlefields or g.troops != spec.budget(player):
        raise GameError(
            f"flow lives on K={g.battlefields}, N={g.troops} but player {player} "
            f"has K={spec.battlefields}, N={spec.budget(player)}"
        )


def peel_paths(values: dict, layers: int, source: int, sink: int) -> tuple[dict, float]:
    """Split layered edge values ``{(k, a, b): f}`` into source-to-sink paths.

    Vertices are integers per layer; edge ``(k, a, b)`` joins ``a`` on layer
    ``k-1`` to ``b`` on layer ``k``. Each step walks from the source, always
    taking the positive edge with the smallest head, and removes the bottleneck
    amount from every edge on the walk. At least one edge drops to zero per
    step, so there are never more paths than positive edges. Walks that hit a
    dead end or the wrong sink (round-off debris) are discarded.

    Returns ``({heads: amount}, unexplained_mass)`` where ``heads`` lists the
    vertex reached on layers 1..K.
    """
    residual = {e: v for e, v in values.items() if v > TRAVERSE_TOL}
    out: dict[tuple[int, int], list[int]] = {}
    for k, a, b in sorted(residual):
        out.setdefault((k, a), []).append(b)
    paths: dict[tuple[int, ...], float] = {}
    discarded = 0.0
    for _ in range(len(residual)):
        if not out.get((1, source)):
            break
        walk, at = [], source
        for k in range(1, layers + 1):
            heads = out.get((k, at))
            if not heads:
                break
            walk.append((k, at, heads[0]))
            at = heads[0]
        amount = min(residual[e] for e in walk)
        for e in walk:
            residual[e] -= amount
            if residual[e] <= TRAVERSE_TOL:
                del residual[e]
                out[(e[0], e[1])].remove(e[2])
        if len(walk) == layers and at == sink:
            key = tuple(b for _, _, b in walk)
            paths[key] = paths.get(key, 0.0) + amount
        else:
            discarded += amount
    left = sum(residual[(1, source, b)] for b in out.get((1, source), []))
    return paths, discarded + left


def normalise(paths: dict) -> list[tuple[tuple[int, ...], float]]:
    total = math.fsum(paths.values())
    return [(key, amount / total) for key, amount in paths.items()]


def decompose_flow(f: Flow, spec: GameSpec, player: str = "A") -> MixedStrategy:
    """Mixed strategy whose canonical-path flow reproduces ``f``.

    Paths are peeled off greedily (see :func:`peel_paths`); the same
    allocation found twice is merged, and probabilities are renormalised to
    absorb round-off.
    """
    check_player(player)
    _check_shape(f, spec, player)
    problems = f.violations(INPUT_TOL)
    if problems:
        raise GameError("not a unit flow: " + ", ".join(problems[:5]))
    K, n = spec.battlefields, spec.budget(player)
    paths, lost = peel_paths(f.values, K, 0, n)
    if lost > RESIDUAL_TOL:
        raise GameError(f"flow does not decompose: {lost:.3g} of its mass is not on any path")
    if not paths:
        raise GameError("flow carries no source-to-sink path")
    support = []
    for heads, prob in normalise(paths):
        prefix = (0,) + heads
        support.append((PureStrategy(tuple(b - a for a, b in zip(prefix, heads)), player), prob))
    return MixedStrategy(tuple(support), player)
