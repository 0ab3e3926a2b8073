"""SPI decision between a default game and a candidate game via their reduced games."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .game import Game, Outcome, SpikitError, strictly_dominates, weakly_dominates
from .iso import Isomorphism, find_isomorphisms, forced_affine
from .reduction import Removal, reduce, surviving_actions

SIMPLE = "Simple"
ISOMORPHISM = "Isomorphism"


@dataclass
class SpiCertificate:
    """Witness that ``target`` is an SPI on ``source``.

    Simple: every reduced-target payoff weakly dominates every reduced-source
    payoff and ``witness`` is strictly dominated by all of them.
    Isomorphism: ``iso`` maps the reduced source onto the reduced target and
    improves everyone's utility, strictly at ``witness``.
    ``players`` lists whose utilities count for improvement.
    """

    kind: str
    source: Game
    target: Game
    source_reduced: Game
    target_reduced: Game
    source_trace: list[Removal]
    target_trace: list[Removal]
    witness: Outcome
    iso: Isomorphism | None = None
    players: tuple[int, ...] | None = None
    extra: dict = field(default_factory=dict)

    @property
    def m(self):
        return self.iso.m if self.iso else None

    @property
    def b(self):
        return self.iso.b if self.iso else None


def _check_players(default: Game, candidate: Game):
    if default.n != candidate.n:
        raise SpikitError(f"player-count mismatch: {default.n} vs {candidate.n}")


def _simple_witness(gr: Game, hr: Game, players) -> Outcome | None:
    tgt = list(hr.payoffs.values())
    for s_out in gr.outcomes():
        s = gr.payoffs[s_out]
        if not all(weakly_dominates(t, s, players) for t in tgt):
            return None
    for s_out in gr.outcomes():
        s = gr.payoffs[s_out]
        if all(strictly_dominates(t, s, players) for t in tgt):
            return s_out
    return None


def _iso_witness(gr: Game, hr: Game, players) -> tuple[Isomorphism, Outcome] | None:
    if gr.shape != hr.shape:
        return None
    affine = forced_affine(gr, hr)
    if affine is None:
        return None
    idx = range(gr.n) if players is None else players
    for i in idx:
        m, b = affine[i]
        if any(m * v[i] + b < v[i] for v in gr.payoffs.values()):
            return None
    witness = None
    for a in gr.outcomes():
        v = gr.payoffs[a]
        if any(affine[i][0] * v[i] + affine[i][1] > v[i] for i in idx):
            witness = a
            break
    if witness is None:
        return None
    found = find_isomorphisms(gr, hr, limit=1)
    if not found:
        return None
    return found[0], witness


def is_spi(default: Game, candidate: Game, players: Sequence[int] | None = None) -> SpiCertificate | None:
    """Certificate when the candidate is an SPI on the default game, else None.

    ``players`` restricts the improvement requirement (None = everyone).
    """
    _check_players(default, candidate)
    players = None if players is None else tuple(players)
    gr, gt = reduce(default)
    hr, ht = reduce(candidate)
    w = _simple_witness(gr, hr, players)
    if w is not None:
        return SpiCertificate(SIMPLE, default, candidate, gr, hr, gt, ht, w, players=players)
    found = _iso_witness(gr, hr, players)
    if found is not None:
        iso, w = found
        return SpiCertificate(ISOMORPHISM, default, candidate, gr, hr, gt, ht, w, iso, players=players)
    return None


def is_simple_spi(default: Game, candidate: Game) -> bool:
    _check_players(default, candidate)
    gr, _ = reduce(default)
    hr, _ = reduce(candidate)
    return _simple_witness(gr, hr, None) is not None


# --- outcome correspondences ------------------------------------------------

@dataclass(frozen=True, eq=False)
class OutcomeCorrespondence:
    """Multivalued map from outcomes of ``source`` to sets of outcomes of ``target``."""

    source: Game
    target: Game
    images: Mapping[Outcome, frozenset[Outcome]]

    def __call__(self, a: Outcome) -> frozenset[Outcome]:
        return self.images[a]

    def __eq__(self, other):
        return (isinstance(other, OutcomeCorrespondence) and self.source == other.source
                and self.target == other.target and dict(self.images) == dict(other.images))


def identity_correspondence(g: Game) -> OutcomeCorrespondence:
    return OutcomeCorrespondence(g, g, {a: frozenset([a]) for a in g.outcomes()})


def all_correspondence(g: Game, h: Game) -> OutcomeCorrespondence:
    everything = frozenset(h.outcomes())
    return OutcomeCorrespondence(g, h, {a: everything for a in g.outcomes()})


def elimination_correspondence(g: Game) -> OutcomeCorrespondence:
    """g to its reduced game: surviving outcomes map to themselves, others to nothing."""
    alive, _ = surviving_actions(g)
    red, _ = reduce(g)
    pos = [{k: t for t, k in enumerate(al)} for al in alive]
    images = {}
    for a in g.outcomes():
        if all(a[i] in pos[i] for i in range(g.n)):
            images[a] = frozenset([tuple(pos[i][a[i]] for i in range(g.n))])
        else:
            images[a] = frozenset()
    return OutcomeCorrespondence(g, red, images)


def isomorphism_correspondence(g: Game, h: Game, isos: Sequence[Isomorphism]) -> OutcomeCorrespondence:
    return OutcomeCorrespondence(g, h, {a: frozenset(iso.image(a) for iso in isos) for a in g.outcomes()})


def compose_correspondences(f: OutcomeCorrespondence, g: OutcomeCorrespondence) -> OutcomeCorrespondence:
    """Apply f, then g."""
    if f.target != g.source:
        raise SpikitError("cannot compose: first correspondence's target is not the second's source")
    images = {}
    for a, img in f.images.items():
        out = set()
        for b in img:
            out |= g.images[b]
        images[a] = frozenset(out)
    return OutcomeCorrespondence(f.source, g.target, images)
