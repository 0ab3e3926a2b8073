"""Game isomorphism search: full, Pareto-improving, coefficient-(1,0), subgame and partial."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .game import Game, Outcome, PayoffVector, SpikitError

ALL_PLAYERS = "all"
OTHERS = "others"  # player 1 fixed by a given map, utilities of players 2..n matched


@dataclass(frozen=True)
class Isomorphism:
    """Per-player action maps plus per-player positive affine utility maps.

    ``maps[i][k]`` is the target index of source action k of player i. For
    scope OTHERS, player 1's map is the supplied remapping and its (m, b)
    entries are None.
    """

    maps: tuple[tuple[int, ...], ...]
    m: tuple[Fraction | None, ...]
    b: tuple[Fraction | None, ...]
    scope: str = ALL_PLAYERS

    def image(self, a: Outcome) -> Outcome:
        return tuple(self.maps[i][k] for i, k in enumerate(a))

    def utility(self, v: PayoffVector) -> PayoffVector:
        return tuple(x if m is None else m * x + b for x, m, b in zip(v, self.m, self.b))

    @property
    def affine(self) -> tuple[tuple[Fraction | None, Fraction | None], ...]:
        return tuple(zip(self.m, self.b))

    def labels(self, g: Game, h: Game) -> list[dict[str, str]]:
        return [{g.actions[i][k]: h.actions[i][t] for k, t in enumerate(mp)} for i, mp in enumerate(self.maps)]


def forced_affine(g: Game, h: Game) -> tuple[tuple[Fraction, Fraction], ...] | None:
    """The only utility map an isomorphism g -> h can use, from min/max matching.

    Constant players get m = 1, b = u(h) - u(g). None when no positive affine
    map can match the value ranges.
    """
    out = []
    for i in range(g.n):
        gv = [v[i] for v in g.payoffs.values()]
        hv = [v[i] for v in h.payoffs.values()]
        glo, ghi, hlo, hhi = min(gv), max(gv), min(hv), max(hv)
        if glo == ghi:
            if hlo != hhi:
                return None
            out.append((Fraction(1), hlo - glo))
        else:
            if hlo == hhi:
                return None
            m = (hhi - hlo) / (ghi - glo)
            out.append((m, hlo - m * glo))
    return tuple(out)


def is_isomorphism(g: Game, h: Game, iso: Isomorphism) -> bool:
    """Exact re-check of the payoff equation (and bijectivity for non-fixed players)."""
    if g.n != h.n or len(iso.maps) != g.n:
        return False
    for i, mp in enumerate(iso.maps):
        if len(mp) != len(g.actions[i]) or any(not 0 <= t < len(h.actions[i]) for t in mp):
            return False
        if iso.scope == ALL_PLAYERS or i > 0:
            if len(set(mp)) != len(mp) or len(mp) != len(h.actions[i]):
                return False
            if iso.m[i] is None or iso.m[i] <= 0:
                return False
    for a in g.outcomes():
        if iso.utility(g.payoffs[a]) != tuple(
                y if iso.m[j] is not None else g.payoffs[a][j]
                for j, y in enumerate(h.payoffs[iso.image(a)])):
            return False
    return True


# --- backtracking engine ---------------------------------------------------

_FIXED, _FREE, _IGNORE = "fixed", "free", "ignore"


def _search(g: Game, h: Game, cands, preset, modes, injective=True, limit=None):
    """Enumerate action maps g -> h satisfying the per-player utility modes.

    cands[i][k]: allowed target indices for source action k of player i.
    preset[i]: fixed map for player i (tuple) or None.
    modes[i]: (_FIXED, m, b) | (_FREE,) | (_IGNORE,)
    Yields (maps, fits) where fits[i] = (m, b) for non-ignored players.
    """
    n = g.n
    order = []
    longest = max(len(a) for a in g.actions)
    for k in range(longest):
        for i in range(n):
            if preset[i] is None and k < len(g.actions[i]):
                order.append((i, k))
    assign: list[dict[int, int]] = [dict() if preset[i] is None else dict(enumerate(preset[i])) for i in range(n)]
    used = [set() for _ in range(n)]
    found = 0

    def check(i, k, fits):
        """Check outcomes completed by assigning (i, k); returns new fits or None."""
        pools = [[k] if j == i else list(assign[j]) for j in range(n)]
        if any(not p for p in pools):
            return fits
        for a in itertools.product(*pools):
            t = tuple(assign[j][a[j]] for j in range(n))
            fits = _check_pair(g.payoffs[a], h.payoffs[t], modes, fits)
            if fits is None:
                return None
        return fits

    def finish(fits):
        out = []
        for j in range(n):
            mode = modes[j]
            if mode[0] == _IGNORE:
                out.append((None, None))
            elif mode[0] == _FIXED:
                out.append((mode[1], mode[2]))
            else:
                x0, y0, m, b = fits[j]
                out.append((Fraction(1), y0 - x0) if m is None else (m, b))
        return out

    def current():
        return tuple(tuple(assign[j][k] for k in range(len(g.actions[j]))) for j in range(n))

    if not order:
        fits = [None] * n
        for a in g.outcomes():
            t = tuple(assign[j][a[j]] for j in range(n))
            fits = _check_pair(g.payoffs[a], h.payoffs[t], modes, fits)
            if fits is None:
                return
        yield current(), finish(fits)
        return

    def rec(pos, fits):
        nonlocal found
        if limit is not None and found >= limit:
            return
        if pos == len(order):
            found += 1
            yield current(), finish(fits)
            return
        i, k = order[pos]
        for c in cands[i][k]:
            if injective and c in used[i]:
                continue
            assign[i][k] = c
            used[i].add(c)
            nf = check(i, k, fits)
            if nf is not None:
                yield from rec(pos + 1, nf)
            del assign[i][k]
            used[i].discard(c)
            if limit is not None and found >= limit:
                return

    yield from rec(0, [None] * n)


def _check_pair(x, y, modes, fits):
    fits = list(fits)
    for j, mode in enumerate(modes):
        if mode[0] == _IGNORE:
            continue
        if mode[0] == _FIXED:
            if mode[1] * x[j] + mode[2] != y[j]:
                return None
            continue
        st = fits[j]
        if st is None:
            fits[j] = (x[j], y[j], None, None)
            continue
        x0, y0, m, b = st
        if m is None:
            if x[j] == x0:
                if y[j] != y0:
                    return None
            else:
                m = (y[j] - y0) / (x[j] - x0)
                if m <= 0:
                    return None
                fits[j] = (x0, y0, m, y0 - m * x0)
        elif m * x[j] + b != y[j]:
            return None
    return fits


def _signature(g: Game, player: int, action: int, affine=None):
    rows = []
    pools = [range(len(g.actions[j])) if j != player else [action] for j in range(g.n)]
    for a in itertools.product(*pools):
        v = g.payoffs[a]
        if affine is not None:
            v = tuple(m * x + b for x, (m, b) in zip(v, affine))
        rows.append(v)
    rows.sort()
    return tuple(rows)


def _signature_candidates(g: Game, h: Game, affine):
    """Bucket source actions by the multiset of their transformed payoff slices."""
    cands = []
    for i in range(g.n):
        hsig: dict = {}
        for c in range(len(h.actions[i])):
            hsig.setdefault(_signature(h, i, c), []).append(c)
        cands.append([hsig.get(_signature(g, i, k, affine), []) for k in range(len(g.actions[i]))])
    return cands


def _collect(gen, scope=ALL_PLAYERS):
    out = [Isomorphism(maps, tuple(m for m, _ in fit), tuple(b for _, b in fit), scope) for maps, fit in gen]
    out.sort(key=lambda iso: iso.maps)
    return out


def find_isomorphisms(g: Game, h: Game, limit: int | None = None) -> list[Isomorphism]:
    """All player-preserving isomorphisms g -> h (canonically ordered)."""
    if g.n != h.n or g.shape != h.shape:
        return []
    affine = forced_affine(g, h)
    if affine is None:
        return []
    cands = _signature_candidates(g, h, affine)
    modes = [(_FIXED, m, b) for m, b in affine]
    return _collect(_search(g, h, cands, [None] * g.n, modes, limit=limit))


def exists_pareto_improving_iso(g: Game, h: Game) -> tuple[Isomorphism, bool] | None:
    """A weakly Pareto-improving isomorphism g -> h plus whether it is strict.

    The utility map is forced, so improvement is decided on payoffs before
    any bijection search.
    """
    if g.n != h.n or g.shape != h.shape:
        return None
    affine = forced_affine(g, h)
    if affine is None:
        return None
    strict = False
    for i, (m, b) in enumerate(affine):
        for x in {v[i] for v in g.payoffs.values()}:
            y = m * x + b
            if y < x:
                return None
            if y > x:
                strict = True
    found = find_isomorphisms(g, h, limit=1)
    if not found:
        return None
    return found[0], strict


def exists_coeff10_iso(g: Game, h: Game) -> bool:
    if g.n != h.n or g.shape != h.shape:
        return False
    affine = tuple((Fraction(1), Fraction(0)) for _ in range(g.n))
    cands = _signature_candidates(g, h, affine)
    modes = [(_FIXED, Fraction(1), Fraction(0))] * g.n
    return any(True for _ in _search(g, h, cands, [None] * g.n, modes, limit=1))


def pareto_improving(g: Game, iso: Isomorphism, players: Sequence[int] | None = None) -> tuple[bool, bool]:
    """(weakly improving, strictly somewhere) for the utility map of ``iso`` on g's payoffs."""
    idx = range(g.n) if players is None else players
    strict = False
    for v in g.payoffs.values():
        w = iso.utility(v)
        for i in idx:
            if iso.m[i] is None:
                continue
            if w[i] < v[i]:
                return False, False
            if w[i] > v[i]:
                strict = True
    return True, strict


def find_subgame_isomorphisms(g: Game, h: Game, variant: str = "any",
                              limit: int | None = None) -> list[tuple[tuple[tuple[int, ...], ...], Isomorphism]]:
    """Embeddings of g into subgames of h.

    Returns (per-player sorted target subsets, isomorphism onto those subsets,
    indexed in h). ``variant`` is "any", "pareto" or "coeff10".
    """
    if variant not in ("any", "pareto", "coeff10"):
        raise SpikitError(f"unknown subgame variant {variant!r}")
    if g.n != h.n or any(x > y for x, y in zip(g.shape, h.shape)):
        return []
    cands = [[list(range(len(h.actions[i])))] * len(g.actions[i]) for i in range(g.n)]
    if variant == "coeff10":
        modes = [(_FIXED, Fraction(1), Fraction(0))] * g.n
    else:
        modes = [(_FREE,)] * g.n
    out = []
    for iso in _collect(_search(g, h, cands, [None] * g.n, modes)):
        if variant == "pareto":
            weak, _ = pareto_improving(g, iso)
            if not weak:
                continue
        out.append((tuple(tuple(sorted(mp)) for mp in iso.maps), iso))
        if limit is not None and len(out) >= limit:
            break
    return out


def find_partial_isomorphisms(g: Game, target: Game, psi1: Mapping[int, int] | Sequence[int]) -> list[Isomorphism]:
    """All (phi_2..phi_n) making (psi1, phi_2, ..., phi_n) an isomorphism in players 2..n's utilities."""
    if g.n != target.n:
        raise SpikitError("player-count mismatch")
    k1 = len(g.actions[0])
    if isinstance(psi1, Mapping):
        if set(psi1) != set(range(k1)):
            raise SpikitError("psi1 must be total on player 1's actions")
        fixed = tuple(psi1[k] for k in range(k1))
    else:
        fixed = tuple(psi1)
        if len(fixed) != k1:
            raise SpikitError("psi1 must be total on player 1's actions")
    if any(not 0 <= t < len(target.actions[0]) for t in fixed):
        raise SpikitError("psi1 image not within the target's player-1 actions")
    if g.shape[1:] != target.shape[1:]:
        return []
    cands = [None] + [[list(range(len(target.actions[i])))] * len(g.actions[i]) for i in range(1, g.n)]
    preset = [fixed] + [None] * (g.n - 1)
    modes = [(_IGNORE,)] + [(_FREE,)] * (g.n - 1)
    return _collect(_search(g, target, cands, preset, modes), scope=OTHERS)
