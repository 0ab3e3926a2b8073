"""Disarmament SPIs: verify a given removal set, or search all of them."""

from __future__ import annotations

import itertools
import math
from typing import Sequence

from . import config
from .game import Disarmament, Game, SizeCapExceeded, SpikitError, remove_actions
from .reduction import surviving_actions
from .spi import SpiCertificate, is_spi


def verify_disarmament(g: Game, d: Disarmament, players: Sequence[int] | None = None) -> SpiCertificate | None:
    """is_spi(g, g - d); ``players=(0,)`` gives the player-1-only variant."""
    cert = is_spi(g, remove_actions(g, d), players)
    if cert is not None:
        cert.extra["disarmament"] = d
    return cert


def _proper_subsets(k: int):
    """Subsets of range(k) leaving at least one action, smallest first."""
    for size in range(k):
        yield from (frozenset(c) for c in itertools.combinations(range(k), size))


def candidate_count(g: Game, unilateral: int | None = None) -> int:
    movers = range(g.n) if unilateral is None else [unilateral]
    return math.prod(2 ** g.shape[i] - 1 for i in movers)


def search_disarmament(g: Game, unilateral: int | None = None, max_subsets: int | None = None,
                       players: Sequence[int] | None = None) -> list[tuple[Disarmament, SpiCertificate]]:
    """Every disarmament (by everyone, or by one player) that is an SPI.

    Removal sets touching only actions that iterated dominance already
    eliminates are skipped: the reduced game of g - d then still contains
    the reduced game of g, so no strict improvement is possible.
    """
    if unilateral is not None and not 0 <= unilateral < g.n:
        raise SpikitError(f"no player {unilateral + 1}")
    cap = config.max_subsets() if max_subsets is None else max_subsets
    needed = candidate_count(g, unilateral)
    if needed > cap:
        raise SizeCapExceeded("disarmament search", needed, cap)
    alive, _ = surviving_actions(g)
    alive = [set(a) for a in alive]
    per_player = [list(_proper_subsets(k)) if unilateral is None or i == unilateral else [frozenset()]
                  for i, k in enumerate(g.shape)]
    found = []
    for removed in itertools.product(*per_player):
        if not any(removed):
            continue
        if all(not (r & alive[i]) for i, r in enumerate(removed)):
            continue
        d = Disarmament(tuple(removed))
        cert = verify_disarmament(g, d, players)
        if cert is not None:
            found.append((d, cert))
    return found
