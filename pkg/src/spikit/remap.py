"""Default-remapping SPIs: omnilateral (remap the whole default outcome) and unilateral (player 1 only)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import config
from .game import (CorrelatedProfile, Game, Outcome, SizeCapExceeded, SpikitError, strictly_dominates,
                   subgame, weakly_dominates)
from .iso import Isomorphism, find_partial_isomorphisms
from .lp import LinearProgram, solve, solve_lex
from .reduction import surviving_actions
from .results import Attained, NoSpi, Supremum
from .tokens import CORRELATED, PURE, Realization, _hull, _profile, as_profile, realized_payoff, reduced_view


@dataclass
class OmniRemap:
    """Committed replacement for each reduced default outcome (original indices)."""

    game: Game
    mode: str
    realizations: dict[Outcome, Realization]

    def payoff(self, a: Outcome):
        return realized_payoff(self.game, self.realizations[a])


def check_omni(om: OmniRemap) -> bool:
    """Weak improvement everywhere, strict somewhere, realizations exact and in range."""
    red = reduced_view(om.game)
    outs = [red.original(a) for a in red.game.outcomes()]
    if set(om.realizations) != set(outs):
        return False
    strict = False
    for a in outs:
        r = om.realizations[a]
        if om.mode == PURE and isinstance(r, CorrelatedProfile) and len(r.support) != 1:
            return False
        w, v = om.payoff(a), om.game.payoffs[a]
        if not weakly_dominates(w, v):
            return False
        strict = strict or w != v
    return strict


def _default_outcomes(g: Game):
    red = reduced_view(g)
    return red, [red.original(a) for a in red.game.outcomes()]


def _search_order(g: Game, outs):
    """Reduced outcomes first, then the rest in row-major order."""
    inside = set(outs)
    return list(outs) + [a for a in g.outcomes() if a not in inside]


def omni_exists(g: Game, mode: str = PURE) -> OmniRemap | None:
    red, outs = _default_outcomes(g)
    if mode == PURE:
        order = _search_order(g, outs)
        reals: dict[Outcome, Realization] = {}
        strict = False
        for a in outs:
            v = g.payoffs[a]
            hit = next((c for c in order if strictly_dominates(g.payoffs[c], v)), None)
            reals[a] = hit if hit is not None else a
            strict = strict or hit is not None
        return OmniRemap(g, PURE, reals) if strict else None
    if mode != CORRELATED:
        raise SpikitError(f"unknown mode {mode!r}")
    lp, gain, base, U, reps = _omni_lp(g, outs)
    lp.maximize(gain)
    res = solve(lp)
    if res.value - base <= 0:
        return None
    return OmniRemap(g, CORRELATED, _omni_reals(g, outs, U, reps, res.x))


def _omni_lp(g: Game, outs):
    U, reps = _hull(g)
    lp = LinearProgram()
    gain = {}
    base = Fraction(0)
    for j, a in enumerate(outs):
        v = g.payoffs[a]
        base += sum(v)
        for k in range(len(U)):
            lp.var((j, k))
            gain[(j, k)] = sum(U[k])
        lp.add({(j, k): 1 for k in range(len(U))}, "=", 1)
        for i in range(g.n):
            lp.add({(j, k): U[k][i] for k in range(len(U))}, ">=", v[i])
    return lp, gain, base, U, reps


def _omni_reals(g, outs, U, reps, x):
    reals = {}
    for j, a in enumerate(outs):
        prof = _profile([x[(j, k)] for k in range(len(U))], reps)
        reals[a] = a if realized_payoff(g, prof) == g.payoffs[a] else prof
    return reals


def _weights(outs, n, weights):
    if weights is None:
        return [(Fraction(1),) * n for _ in outs]
    if len(weights) != len(outs) or any(len(w) != n for w in weights):
        raise SpikitError(f"weights must give {n} entries for each of the {len(outs)} reduced outcomes")
    return [tuple(Fraction(x) for x in w) for w in weights]


def omni_value(om: OmniRemap, weights=None) -> Fraction:
    """Weighted utility gain of a remap over the default outcomes."""
    _, outs = _default_outcomes(om.game)
    W = _weights(outs, om.game.n, weights)
    total = Fraction(0)
    for a, w in zip(outs, W):
        p, v = om.payoff(a), om.game.payoffs[a]
        total += sum(w[i] * (p[i] - v[i]) for i in range(om.game.n))
    return total


def omni_optimize(g: Game, mode: str = PURE, weights=None):
    """Maximize the weighted gain over omnilateral remapping SPIs (weights per reduced outcome)."""
    red, outs = _default_outcomes(g)
    W = _weights(outs, g.n, weights)
    if mode == PURE:
        best, best_strict = [], []
        for a, w in zip(outs, W):
            v = g.payoffs[a]
            order = _search_order(g, outs)

            def score(c):
                return sum(w[i] * g.payoffs[c][i] for i in range(g.n))
            ok = [c for c in order if weakly_dominates(g.payoffs[c], v)]
            strict = [c for c in ok if g.payoffs[c] != v]
            best.append(max(ok, key=score))  # max keeps the first of equal scores
            best_strict.append(max(strict, key=score) if strict else None)
        if all(s is None for s in best_strict):
            return NoSpi()
        choice = list(best)
        if all(g.payoffs[c] == g.payoffs[a] for c, a in zip(choice, outs)):
            # none of the per-outcome optima is strict: switch the cheapest outcome
            loss = []
            for j, (a, w) in enumerate(zip(outs, W)):
                if best_strict[j] is None:
                    continue
                drop = sum(w[i] * (g.payoffs[best[j]][i] - g.payoffs[best_strict[j]][i]) for i in range(g.n))
                loss.append((drop, j))
            _, j = min(loss)
            choice[j] = best_strict[j]
        om = OmniRemap(g, PURE, {a: (c if g.payoffs[c] != g.payoffs[a] else a) for a, c in zip(outs, choice)})
        return Attained(om, omni_value(om, weights))
    if mode != CORRELATED:
        raise SpikitError(f"unknown mode {mode!r}")
    strict_remap = omni_exists(g, CORRELATED)
    if strict_remap is None:
        return NoSpi()
    lp, gain, base, U, reps = _omni_lp(g, outs)
    lp.var("mu", lower=None)
    row = {k: -c for k, c in gain.items()}
    row["mu"] = 1
    lp.add(row, "<=", -base)
    primary = {}
    for j, w in enumerate(W):
        for k in range(len(U)):
            primary[(j, k)] = sum(w[i] * U[k][i] for i in range(g.n))
    lp.maximize(primary, {"mu": 1})
    res = solve_lex(lp)
    star = OmniRemap(g, CORRELATED, _omni_reals(g, outs, U, reps, res.x))
    if res.values[1] > 0:
        return Attained(star, omni_value(star, weights))

    def family(eps: Fraction) -> OmniRemap:
        eps = Fraction(eps)
        if not 0 < eps < 1:
            raise SpikitError("eps must lie in (0, 1)")
        reals = {a: as_profile(star.realizations[a]).mix(as_profile(strict_remap.realizations[a]), eps)
                 for a in outs}
        return OmniRemap(g, CORRELATED, reals)

    return Supremum(omni_value(star, weights), family, star)


# --- unilateral remapping --------------------------------------------------

@dataclass
class UniCertificate:
    """Player 1's remapping psi1 is an SPI under the commitment assumptions.

    ``target_alive`` lists the actions surviving under commitment, ``isos``
    every partial isomorphism from the reduced default game onto that
    target (empty for the all-dominating case), ``witness`` a reduced
    outcome strictly improved however the others respond.
    """

    kind: str
    game: Game
    psi1: dict[int, int]
    reduced_alive: list[tuple[int, ...]]
    target_alive: list[tuple[int, ...]]
    isos: list[Isomorphism]
    witness: Outcome
    notes: list[str] = field(default_factory=list)

    @property
    def reduced(self) -> Game:
        return subgame(self.game, self.reduced_alive)

    @property
    def target(self) -> Game:
        return subgame(self.game, self.target_alive)


def commitment_target(g: Game, image) -> list[tuple[int, ...]]:
    """Surviving actions once player 1 is limited to ``image`` and the others eliminate dominated actions."""
    start = [sorted(image)] + [list(range(k)) for k in g.shape[1:]]
    alive, _ = surviving_actions(g, restrict=start, players=range(1, g.n))
    return alive


def _normalize_psi(g: Game, reduced_alive, psi1: Mapping) -> dict[int, int]:
    psi = {}
    for k, t in psi1.items():
        k = g.action_index(0, k) if isinstance(k, str) else int(k)
        t = g.action_index(0, t) if isinstance(t, str) else int(t)
        if not 0 <= t < g.shape[0]:
            raise SpikitError(f"psi1 image {t} is not an action of player 1")
        psi[k] = t
    if set(psi) != set(reduced_alive[0]):
        raise SpikitError("psi1 must be defined on exactly the reduced default actions of player 1")
    return psi


def _all_dominate(gr: Game, tr: Game) -> Outcome | None:
    tgt = list(tr.payoffs.values())
    if not all(weakly_dominates(t, s) for t in tgt for s in gr.payoffs.values()):
        return None
    return next((a for a in gr.outcomes() if all(strictly_dominates(t, gr.payoffs[a]) for t in tgt)), None)


def uni_assess(g: Game, psi1: Mapping, _cache=None) -> tuple[UniCertificate | None, list[str]]:
    """uni_verify plus notes on cases the characterization leaves out."""
    reduced_alive, _ = surviving_actions(g)
    psi = _normalize_psi(g, reduced_alive, psi1)
    image = frozenset(psi.values())
    if _cache is not None and image in _cache:
        target_alive = _cache[image]
    else:
        target_alive = commitment_target(g, image)
        if _cache is not None:
            _cache[image] = target_alive
    gr, tr = subgame(g, reduced_alive), subgame(g, target_alive)
    notes: list[str] = []
    if len(image) == 1:
        w = _all_dominate(gr, tr)
        if w is None:
            return None, notes
        return UniCertificate("Simple", g, psi, reduced_alive, target_alive, [], w), notes
    pos = {t: k for k, t in enumerate(target_alive[0])}
    psi_red = [pos[psi[k]] for k in reduced_alive[0]]
    isos = find_partial_isomorphisms(gr, tr, psi_red) if gr.shape[1:] == tr.shape[1:] else []
    ok = bool(isos)
    for iso in isos:
        if any(not weakly_dominates(tr.payoffs[iso.image(a)], gr.payoffs[a]) for a in gr.outcomes()):
            ok = False
            break
    witness = None
    if ok:
        witness = next((a for a in gr.outcomes()
                        if all(strictly_dominates(tr.payoffs[iso.image(a)], gr.payoffs[a]) for iso in isos)), None)
    if witness is None:
        if _all_dominate(gr, tr) is not None:
            notes.append("every surviving outcome dominates the default, but psi1 is not constant; "
                         "not certified")
        return None, notes
    return UniCertificate("Isomorphism", g, psi, reduced_alive, target_alive, isos, witness), notes


def uni_verify(g: Game, psi1: Mapping) -> UniCertificate | None:
    """Certificate when player 1 committing to psi1 (reduced default action -> action) is an SPI."""
    return uni_assess(g, psi1)[0]


def uni_search(g: Game, max_remaps: int | None = None) -> list[tuple[dict[int, int], UniCertificate]]:
    """All psi1 passing uni_verify, in lexicographic order of images."""
    cap = config.max_remaps() if max_remaps is None else max_remaps
    reduced_alive, _ = surviving_actions(g)
    dom = reduced_alive[0]
    needed = g.shape[0] ** len(dom)
    if needed > cap:
        raise SizeCapExceeded("unilateral remapping search", needed, cap)
    cache: dict = {}
    found = []
    others = tuple(len(a) for a in reduced_alive[1:])
    for img in itertools.product(range(g.shape[0]), repeat=len(dom)):
        image = frozenset(img)
        if image not in cache:
            cache[image] = commitment_target(g, image)
        if len(image) > 1 and tuple(len(a) for a in cache[image][1:]) != others:
            continue
        cert, _ = uni_assess(g, dict(zip(dom, img)), cache)
        if cert is not None:
            found.append((cert.psi1, cert))
    return found


def psi_labels(g: Game, psi: Mapping[int, int]) -> dict[str, str]:
    return {g.actions[0][k]: g.actions[0][t] for k, t in sorted(psi.items())}


__all__ = ["OmniRemap", "UniCertificate", "omni_exists", "omni_optimize", "omni_value", "check_omni",
           "uni_verify", "uni_assess", "uni_search", "commitment_target", "psi_labels"]
