"""Token-game SPIs: simple, pure isomorphism, correlated isomorphism, vector remapping."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .game import (CorrelatedProfile, Game, Outcome, PayoffVector, SpikitError, expected_payoff,
                   first_outcome_with_payoff, strictly_dominates, subgame, weakly_dominates)
from .generators import VectorRemapInstance
from .iso import Isomorphism
from .lp import LinearProgram, solve, solve_lex
from .reduction import surviving_actions
from .results import Attained, NoSpi, Supremum
from .spi import SpiCertificate, is_spi

PURE = "pure"
CORRELATED = "correlated"
HALF = Fraction(1, 2)

Realization = Union[Outcome, CorrelatedProfile]


def realized_payoff(g: Game, r: Realization) -> PayoffVector:
    if isinstance(r, CorrelatedProfile):
        return expected_payoff(g, r)
    return g.payoffs[tuple(r)]


def as_profile(r: Realization) -> CorrelatedProfile:
    return r if isinstance(r, CorrelatedProfile) else CorrelatedProfile.point(r)


@dataclass
class UtilityRemap:
    """Entrywise positive affine map on reduced payoffs, with a realization per payoff."""

    m: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    realizations: dict[PayoffVector, Realization] = field(default_factory=dict)

    def apply(self, v: PayoffVector) -> PayoffVector:
        return tuple(m * x + b for x, m, b in zip(v, self.m, self.b))


@dataclass
class TokenSpi:
    """Token game announced in place of g, plus how each token outcome is realized in g."""

    kind: str  # "simple" or "isomorphism"
    mode: str
    game: Game
    reduced: Game
    token: Game
    realizations: dict[Outcome, Realization]
    iso: Isomorphism | None = None
    remap: UtilityRemap | None = None


@dataclass
class Reduced:
    game: Game
    alive: list[tuple[int, ...]]
    V: list[PayoffVector]

    def original(self, a: Outcome) -> Outcome:
        return tuple(self.alive[i][k] for i, k in enumerate(a))

    def outcome_for(self, v: PayoffVector) -> Outcome:
        """First reduced outcome (in original indices) with payoff v."""
        return self.original(first_outcome_with_payoff(self.game, v))


def reduced_view(g: Game) -> Reduced:
    alive, _ = surviving_actions(g)
    gr = subgame(g, alive)
    return Reduced(gr, alive, sorted(set(gr.payoffs.values())))


def _hull(g: Game):
    """Distinct payoff vectors of g with a representative outcome each."""
    U = sorted(set(g.payoffs.values()))
    return U, [first_outcome_with_payoff(g, u) for u in U]


def _profile(weights: Sequence[Fraction], reps: Sequence[Outcome]) -> CorrelatedProfile:
    return CorrelatedProfile({reps[k]: w for k, w in enumerate(weights) if w})


# --- simple token SPIs -------------------------------------------------------

def _single_token(g: Game, red: Reduced, payoff: PayoffVector, realization: Realization, mode: str) -> TokenSpi:
    token = Game.build([["Token"]] * g.n, lambda a: payoff, g.players)
    return TokenSpi("simple", mode, g, red.game, token, {(0,) * g.n: realization})


def simple_token_spi(g: Game, mode: str = PURE) -> TokenSpi | None:
    """Single-outcome token game whose payoff weakly dominates all reduced payoffs."""
    red = reduced_view(g)
    top = tuple(max(v[i] for v in red.V) for i in range(g.n))
    if mode == PURE:
        for a in g.outcomes():
            p = g.payoffs[a]
            if weakly_dominates(p, top) and any(p != v for v in red.V):
                return _single_token(g, red, p, a, mode)
        return None
    if mode != CORRELATED:
        raise SpikitError(f"unknown mode {mode!r}")
    U, reps = _hull(g)
    lp = LinearProgram()
    for k in range(len(U)):
        lp.var(k)
    lp.add({k: 1 for k in range(len(U))}, "=", 1)
    for i in range(g.n):
        lp.add({k: U[k][i] for k in range(len(U))}, ">=", top[i])
    lp.maximize({k: len(red.V) * sum(U[k]) for k in range(len(U))})
    res = solve(lp)
    if not res.optimal or res.value - sum(sum(v) for v in red.V) <= 0:
        return None
    prof = _profile([res.x[k] for k in range(len(U))], reps)
    return _single_token(g, red, expected_payoff(g, prof), prof, mode)


# --- isomorphism token SPIs ----------------------------------------------------

def token_from_remap(g: Game, red: Reduced, remap: UtilityRemap, mode: str) -> TokenSpi:
    gr = red.game
    labels = [[f"Token {x}" for x in acts] for acts in gr.actions]
    token = Game.build(labels, lambda a: remap.apply(gr.payoffs[a]), g.players)
    reals = {a: remap.realizations[gr.payoffs[a]] for a in gr.outcomes()}
    iso = Isomorphism(tuple(tuple(range(k)) for k in gr.shape), remap.m, remap.b)
    return TokenSpi("isomorphism", mode, g, gr, token, reals, iso, remap)


def remap_is_valid(g: Game, V: Sequence[PayoffVector], remap: UtilityRemap) -> bool:
    """Positive coefficients, weak improvement everywhere, strict somewhere, exact realizations."""
    if any(m <= 0 for m in remap.m):
        return False
    strict = False
    for v in V:
        w = remap.apply(v)
        if not weakly_dominates(w, v):
            return False
        strict = strict or w != v
        if v not in remap.realizations or realized_payoff(g, remap.realizations[v]) != w:
            return False
    return strict


def _fit(pairs) -> tuple[Fraction, Fraction] | None:
    """Positive affine map through the (x, y) pairs; constant x pins m = 1."""
    seen: dict[Fraction, Fraction] = {}
    for x, y in pairs:
        if seen.setdefault(x, y) != y:
            return None
    xs = list(seen)
    if len(xs) == 1:
        return Fraction(1), seen[xs[0]] - xs[0]
    x0, x1 = xs[0], xs[1]
    m = (seen[x1] - seen[x0]) / (x1 - x0)
    if m <= 0:
        return None
    b = seen[x0] - m * x0
    if any(seen[x] != m * x + b for x in xs):
        return None
    return m, b


def anchor_set(V: Sequence[PayoffVector]) -> list[PayoffVector]:
    """First payoff, then the first payoff differing in each dimension that still lacks a second value."""
    anchors = [V[0]]
    for i in range(len(V[0])):
        if len({v[i] for v in V}) > 1 and len({a[i] for a in anchors}) == 1:
            anchors.append(next(v for v in V if v[i] != anchors[0][i]))
    return anchors


def iter_pure_remaps(g: Game) -> Iterator[UtilityRemap]:
    """Every valid pure utility remapping, by enumerating images of the anchor set.

    An anchor image outside I(v') can never pass the improvement test, so the
    enumeration ranges over I(v') rather than all of u(A); the set of accepted
    remaps is the same.
    """
    red = reduced_view(g)
    V = red.V
    U = sorted(set(g.payoffs.values()))
    Uset = set(U)
    n = g.n
    anchors = anchor_set(V)
    choices = [[w for w in U if weakly_dominates(w, v)] for v in anchors]
    for img in itertools.product(*choices):
        fits = []
        for i in range(n):
            f = _fit([(v[i], w[i]) for v, w in zip(anchors, img)])
            if f is None:
                break
            fits.append(f)
        else:
            m = tuple(f[0] for f in fits)
            b = tuple(f[1] for f in fits)
            strict = False
            ok = True
            for v in V:
                w = tuple(m[i] * v[i] + b[i] for i in range(n))
                if w not in Uset or not weakly_dominates(w, v):
                    ok = False
                    break
                strict = strict or w != v
            if ok and strict:
                reals = {v: first_outcome_with_payoff(g, tuple(m[i] * v[i] + b[i] for i in range(n))) for v in V}
                yield UtilityRemap(m, b, reals)


def pure_iso_token_spi(g: Game) -> TokenSpi | None:
    for remap in iter_pure_remaps(g):
        return token_from_remap(g, reduced_view(g), remap, PURE)
    return None


def _remap_lp(g: Game, V, U):
    lp = LinearProgram()
    n = g.n
    for i in range(n):
        lp.var(("m", i))
        lp.var(("b", i), lower=None)
    for j in range(len(V)):
        for k in range(len(U)):
            lp.var(("p", j, k))
    for j, v in enumerate(V):
        lp.add({("p", j, k): 1 for k in range(len(U))}, "=", 1)
        for i in range(n):
            row = {("p", j, k): U[k][i] for k in range(len(U))}
            row[("m", i)] = -v[i]
            row[("b", i)] = -1
            lp.add(row, "=", 0)
            lp.add({("m", i): v[i], ("b", i): 1}, ">=", v[i])
    gain = {}
    for i in range(n):
        gain[("m", i)] = sum(v[i] for v in V)
        gain[("b", i)] = len(V)
    return lp, gain


def _remap_from_solution(g: Game, V, U, reps, x) -> UtilityRemap:
    n = g.n
    m = tuple(x[("m", i)] for i in range(n))
    b = tuple(x[("b", i)] for i in range(n))
    reals = {v: _profile([x[("p", j, k)] for k in range(len(U))], reps) for j, v in enumerate(V)}
    return UtilityRemap(m, b, reals)


def repair(remap: UtilityRemap, red: Reduced, eps: Fraction = HALF) -> UtilityRemap:
    """(1 - eps) * remap + eps * identity: makes every coefficient positive."""
    m = tuple((1 - eps) * x + eps for x in remap.m)
    b = tuple((1 - eps) * x for x in remap.b)
    reals = {v: as_profile(r).mix(CorrelatedProfile.point(red.outcome_for(v)), eps)
             for v, r in remap.realizations.items()}
    return UtilityRemap(m, b, reals)


def correlated_remap(g: Game) -> UtilityRemap | None:
    red = reduced_view(g)
    U, reps = _hull(g)
    lp, gain = _remap_lp(g, red.V, U)
    lp.maximize(gain)
    res = solve(lp)
    base = sum(sum(v) for v in red.V)
    if not res.optimal or res.value - base <= 0:
        return None
    remap = _remap_from_solution(g, red.V, U, reps, res.x)
    if any(x == 0 for x in remap.m):
        remap = repair(remap, red)
    return remap


def correlated_iso_token_spi(g: Game) -> TokenSpi | None:
    """Correlated isomorphism token SPI via the remapping LP; SPI iff its optimum is positive."""
    remap = correlated_remap(g)
    if remap is None:
        return None
    return token_from_remap(g, reduced_view(g), remap, CORRELATED)


# --- two-player characterization -------------------------------------------

def _improvable(U, v) -> bool:
    lp = LinearProgram()
    for k in range(len(U)):
        lp.var(k)
    lp.add({k: 1 for k in range(len(U))}, "=", 1)
    for i in range(len(v)):
        lp.add({k: U[k][i] for k in range(len(U))}, ">=", v[i])
    lp.maximize({k: sum(U[k]) for k in range(len(U))})
    res = solve(lp)
    return res.value > sum(v)


def _pushable(U, v, i) -> bool:
    """Is (v_i + eps, v_-i) in the correlated hull for some eps > 0?"""
    lp = LinearProgram()
    for k in range(len(U)):
        lp.var(k)
    lp.var("eps")
    lp.add({k: 1 for k in range(len(U))}, "=", 1)
    for j in range(len(v)):
        row = {k: U[k][j] for k in range(len(U))}
        if j == i:
            row["eps"] = -1
        lp.add(row, "=", v[j])
    lp.maximize({"eps": 1})
    res = solve(lp)
    return res.optimal and res.value > 0


def characterize_2p(g: Game) -> tuple[str, bool]:
    """Case label and decision for correlated isomorphism token SPIs in two-player games."""
    if g.n != 2:
        raise SpikitError("characterization applies to two-player games only")
    V = reduced_view(g).V
    U = sorted(set(g.payoffs.values()))
    if len(V) == 1:
        return "SingletonV", _improvable(U, V[0])
    vstar = [v for v in V if not _improvable(U, v)]
    if not vstar:
        return "C1", True
    if len(vstar) >= 2:
        return "C3", False
    vs = vstar[0]
    extreme = [i for i in range(2) if vs[i] in (min(v[i] for v in V), max(v[i] for v in V))]
    if len(extreme) == 2:
        return "C2a", True
    if not extreme:
        return "C2c", False
    i = extreme[0]
    return "C2b", all(_pushable(U, v, i) for v in V if v[i] != vs[i])


# --- abstract vector remapping ----------------------------------------------

@dataclass
class GprSolution:
    mapping: dict[PayoffVector, PayoffVector]
    m: tuple[Fraction, ...]
    b: tuple[Fraction, ...]


def gpr_decide(inst: VectorRemapInstance) -> GprSolution | None:
    """Entrywise positive affine, strictly Pareto improving map S -> S ∪ T, by backtracking."""
    n = inst.n
    for v in inst.S + inst.T:
        if len(v) != n:
            raise SpikitError("dimension mismatch")
    S = list(inst.S)
    if not S:
        return None
    targets = sorted(set(inst.S) | set(inst.T))
    cands = {s: [t for t in targets if weakly_dominates(t, s)] for s in S}
    order = sorted(S, key=lambda s: (len(cands[s]), s))
    chosen: dict = {}

    def allowed(s, t, state):
        for i in range(n):
            pairs, mb = state[i]
            if mb is not None:
                if mb[0] * s[i] + mb[1] != t[i]:
                    return False
            elif s[i] in pairs:
                if pairs[s[i]] != t[i]:
                    return False
            elif pairs:
                x0, y0 = next(iter(pairs.items()))
                if (t[i] - y0) * (s[i] - x0) <= 0:
                    return False
        return True

    def extend(s, t, state):
        new = []
        for i in range(n):
            pairs, mb = state[i]
            if mb is not None or s[i] in pairs:
                new.append(state[i])
                continue
            if pairs:
                x0, y0 = next(iter(pairs.items()))
                m = (t[i] - y0) / (s[i] - x0)
                new.append(({**pairs, s[i]: t[i]}, (m, y0 - m * x0)))
            else:
                new.append(({s[i]: t[i]}, None))
        return new

    def rec(pos, state):
        if pos == len(order):
            if all(chosen[s] == s for s in S):
                return None
            m, b = [], []
            for i in range(n):
                pairs, mb = state[i]
                if mb is None:
                    x0, y0 = next(iter(pairs.items()))
                    mb = (Fraction(1), y0 - x0)
                m.append(mb[0])
                b.append(mb[1])
            return GprSolution(dict(chosen), tuple(m), tuple(b))
        s = order[pos]
        for t in cands[s]:
            if allowed(s, t, state):
                chosen[s] = t
                found = rec(pos + 1, extend(s, t, state))
                if found is not None:
                    return found
                del chosen[s]
        return None

    return rec(0, [({}, None) for _ in range(n)])


# --- optimization -------------------------------------------------------------

def _weights(V, n, weights) -> list[tuple[Fraction, ...]]:
    if weights is None:
        return [(Fraction(1),) * n for _ in V]
    if len(weights) != len(V) or any(len(w) != n for w in weights):
        raise SpikitError(f"weights must give {n} entries for each of the {len(V)} reduced payoffs")
    return [tuple(Fraction(x) for x in w) for w in weights]


def _gain(remap: UtilityRemap, V, W) -> Fraction:
    return sum((w[i] * (remap.apply(v)[i] - v[i]) for v, w in zip(V, W) for i in range(len(v))), Fraction(0))


def mix_remaps(parts: Sequence[tuple[Fraction, UtilityRemap]], V) -> UtilityRemap:
    """Convex combination of remaps, coefficients and realizations alike."""
    n = len(parts[0][1].m)
    m = tuple(sum(c * r.m[i] for c, r in parts) for i in range(n))
    b = tuple(sum(c * r.b[i] for c, r in parts) for i in range(n))
    reals = {}
    for v in V:
        acc: dict = {}
        for c, r in parts:
            for a, p in as_profile(r.realizations[v]).support.items():
                acc[a] = acc.get(a, Fraction(0)) + c * p
        reals[v] = CorrelatedProfile(acc)
    return UtilityRemap(m, b, reals)


def optimize_token(g: Game, mode: str = CORRELATED, weights=None):
    """Maximize the weighted utility gain sum_v w_v . (psi(v) - v) over token SPIs.

    ``weights`` lists per-player weights for each reduced payoff in canonical
    order (None = utilitarian).
    """
    red = reduced_view(g)
    V = red.V
    W = _weights(V, g.n, weights)
    if mode == PURE:
        best = None
        for remap in iter_pure_remaps(g):
            val = _gain(remap, V, W)
            if best is None or val > best[1]:
                best = (remap, val)
        if best is None:
            return NoSpi()
        return Attained(token_from_remap(g, red, best[0], PURE), best[1])
    if mode != CORRELATED:
        raise SpikitError(f"unknown mode {mode!r}")
    strict = correlated_remap(g)
    if strict is None:
        return NoSpi()
    U, reps = _hull(g)
    lp, gain = _remap_lp(g, V, U)
    lp.var("mu", lower=None)
    for i in range(g.n):
        lp.add({"mu": 1, ("m", i): -1}, "<=", 0)
    row = {k: -c for k, c in gain.items()}
    row["mu"] = 1
    lp.add(row, "<=", -sum(sum(v) for v in V))
    primary = {}
    for i in range(g.n):
        primary[("m", i)] = sum(w[i] * v[i] for v, w in zip(V, W))
        primary[("b", i)] = sum(w[i] for w in W)
    lp.maximize(primary, {"mu": 1})
    res = solve_lex(lp)
    star = _remap_from_solution(g, V, U, reps, res.x)
    value = _gain(star, V, W)
    if res.values[1] > 0:
        return Attained(token_from_remap(g, red, star, CORRELATED), value)

    ident = UtilityRemap((Fraction(1),) * g.n, (Fraction(0),) * g.n,
                         {v: CorrelatedProfile.point(red.outcome_for(v)) for v in V})

    def family(eps: Fraction) -> TokenSpi:
        eps = Fraction(eps)
        if not 0 < eps < HALF:
            raise SpikitError("eps must lie in (0, 1/2)")
        mixed = mix_remaps([(1 - 2 * eps, star), (eps, strict), (eps, ident)], V)
        return token_from_remap(g, red, mixed, CORRELATED)

    return Supremum(value, family, star)


# --- checking ---------------------------------------------------------------

def check_token_spi(ts: TokenSpi) -> bool:
    """Re-verify a TokenSpi from its games and realizations."""
    g, token = ts.game, ts.token
    for a in token.outcomes():
        r = ts.realizations.get(a)
        if r is None or realized_payoff(g, r) != token.payoffs[a]:
            return False
        if ts.mode == PURE and isinstance(r, CorrelatedProfile) and len(r.support) != 1:
            return False
    return is_spi(g, token) is not None


def verify_token_spi(g: Game, token: Game, realizations: dict[Outcome, Realization]) -> SpiCertificate | None:
    """Certificate for a user-supplied token game and realization of each token outcome."""
    for a in token.outcomes():
        r = realizations.get(a)
        if r is None or realized_payoff(g, r) != token.payoffs[a]:
            return None
    cert = is_spi(g, token)
    if cert is not None:
        cert.extra["realizations"] = dict(realizations)
    return cert


__all__ = [
    "PURE", "CORRELATED", "UtilityRemap", "TokenSpi", "GprSolution", "simple_token_spi", "pure_iso_token_spi",
    "correlated_iso_token_spi", "characterize_2p", "gpr_decide", "optimize_token", "iter_pure_remaps",
    "check_token_spi", "verify_token_spi", "remap_is_valid",
]
