"""Iterated elimination of strictly dominated actions (pure dominance only)."""

from __future__ import annotations

import itertools
import random
from typing import NamedTuple, Sequence

from .game import Game, SpikitError, subgame


class Removal(NamedTuple):
    player: int
    removed: str
    dominator: str


def _dominates(g: Game, player: int, better: int, worse: int, alive: Sequence[Sequence[int]]) -> bool:
    others = [alive[j] if j != player else [None] for j in range(g.n)]
    for rest in itertools.product(*others):
        hi = list(rest)
        lo = list(rest)
        hi[player] = better
        lo[player] = worse
        if g.payoffs[tuple(hi)][player] <= g.payoffs[tuple(lo)][player]:
            return False
    return True


def _dominator(g: Game, player: int, action: int, alive: Sequence[Sequence[int]]) -> int | None:
    for b in alive[player]:
        if b != action and _dominates(g, player, b, action, alive):
            return b
    return None


def is_strictly_dominated(g: Game, player: int, action: int) -> int | None:
    """Index of the first action strictly dominating ``action``, else None."""
    if not 0 <= player < g.n or not 0 <= action < len(g.actions[player]):
        raise SpikitError(f"invalid player/action ({player}, {action})")
    alive = [list(range(k)) for k in g.shape]
    return _dominator(g, player, action, alive)


def surviving_actions(g: Game, rng: random.Random | None = None,
                      restrict: Sequence[Sequence[int]] | None = None,
                      players: Sequence[int] | None = None):
    """Run elimination and return (per-player surviving indices, trace).

    With ``rng`` the next removal is drawn uniformly from all currently
    dominated actions; otherwise the canonical order is used (lowest player,
    then lowest action index). ``restrict`` starts from a subgame and
    ``players`` limits which players may lose actions.
    """
    alive = [list(r) for r in restrict] if restrict is not None else [list(range(k)) for k in g.shape]
    movers = list(range(g.n)) if players is None else list(players)
    trace: list[tuple[int, int, int]] = []
    while True:
        if rng is None:
            hit = None
            for i in movers:
                for a in alive[i]:
                    b = _dominator(g, i, a, alive)
                    if b is not None:
                        hit = (i, a, b)
                        break
                if hit:
                    break
            if hit is None:
                break
        else:
            cands = []
            for i in movers:
                for a in alive[i]:
                    b = _dominator(g, i, a, alive)
                    if b is not None:
                        cands.append((i, a, b))
            if not cands:
                break
            hit = rng.choice(cands)
        i, a, b = hit
        alive[i].remove(a)
        trace.append(hit)
    return [tuple(x) for x in alive], trace


def reduce(g: Game, rng: random.Random | None = None) -> tuple[Game, list[Removal]]:
    """Reduced game plus the trace of removals as (player, removed, dominator) labels."""
    alive, trace = surviving_actions(g, rng)
    labelled = [Removal(i, g.actions[i][a], g.actions[i][b]) for i, a, b in trace]
    return subgame(g, alive), labelled


def check_trace(g: Game, trace: Sequence[Removal]) -> bool:
    """Replay a trace: each removal must be a strict dominance at its step."""
    alive = [list(range(k)) for k in g.shape]
    for i, removed, dom in trace:
        a = g.action_index(i, removed)
        b = g.action_index(i, dom)
        if a not in alive[i] or b not in alive[i] or not _dominates(g, i, b, a, alive):
            return False
        alive[i].remove(a)
    return True
