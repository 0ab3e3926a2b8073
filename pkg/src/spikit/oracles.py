"""Brute-force reference oracles.

Deliberately naive and independent of the solver modules: they share only
the game representation (and the LP engine for hull questions). Every oracle
refuses instances above a documented enumeration cap.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

from .game import Game, SizeCapExceeded, subgame
from .lp import LinearProgram, solve

BRUTE_CAP = 2_000_000


def _cap(what: str, needed: int, cap: int = BRUTE_CAP):
    if needed > cap:
        raise SizeCapExceeded(what, needed, cap)


def brute_reduce(g: Game) -> Game:
    """Remove every currently dominated action at once until nothing is dominated."""
    alive = [list(range(k)) for k in g.shape]
    while True:
        doomed = []
        for i in range(g.n):
            for a in alive[i]:
                for b in alive[i]:
                    if b == a:
                        continue
                    ok = True
                    for a_ in itertools.product(*alive):
                        if a_[i] != a:
                            continue
                        hi = a_[:i] + (b,) + a_[i + 1:]
                        if g.payoffs[hi][i] <= g.payoffs[a_][i]:
                            ok = False
                            break
                    if ok:
                        doomed.append((i, a))
                        break
        if not doomed:
            return subgame(g, alive)
        for i, a in doomed:
            alive[i].remove(a)


def _affine_ok(pairs) -> tuple[Fraction, Fraction] | None:
    """Positive affine y = m x + b through all (x, y) pairs, else None."""
    pts = sorted(set(pairs))
    xs = {}
    for x, y in pts:
        if xs.setdefault(x, y) != y:
            return None
    keys = sorted(xs)
    if len(keys) == 1:
        return Fraction(1), xs[keys[0]] - keys[0]
    m = (xs[keys[-1]] - xs[keys[0]]) / (keys[-1] - keys[0])
    if m <= 0:
        return None
    b = xs[keys[0]] - m * keys[0]
    if any(xs[x] != m * x + b for x in keys):
        return None
    return m, b


def _all_bijection_isos(g: Game, h: Game):
    if g.shape != h.shape:
        return
    _cap("bijections", math.prod(math.factorial(k) for k in g.shape))
    for perms in itertools.product(*(itertools.permutations(range(k)) for k in g.shape)):
        fits = []
        for i in range(g.n):
            fit = _affine_ok([(g.payoffs[a][i], h.payoffs[tuple(perms[j][a[j]] for j in range(g.n))][i])
                              for a in g.outcomes()])
            if fit is None:
                break
            fits.append(fit)
        else:
            yield perms, fits


def brute_coeff10_iso(g: Game, h: Game) -> bool:
    for perms, fits in _all_bijection_isos(g, h):
        if all(f == (1, 0) for f in fits):
            return True
    return False


def brute_is_spi(g: Game, h: Game, players: Sequence[int] | None = None) -> bool:
    """Both characterizing conditions by enumeration over reduced games."""
    gr, hr = brute_reduce(g), brute_reduce(h)
    idx = list(range(g.n)) if players is None else list(players)
    src = [gr.payoffs[a] for a in gr.outcomes()]
    tgt = [hr.payoffs[a] for a in hr.outcomes()]

    def geq(v, w):
        return all(v[i] >= w[i] for i in idx)

    def gt(v, w):
        return geq(v, w) and any(v[i] > w[i] for i in idx)

    if all(geq(t, s) for t in tgt for s in src) and any(all(gt(t, s) for t in tgt) for s in src):
        return True
    for perms, fits in _all_bijection_isos(gr, hr):
        weak = True
        strict = False
        for i in idx:
            m, b = fits[i]
            for s in src:
                y = m * s[i] + b
                if y < s[i]:
                    weak = False
                elif y > s[i]:
                    strict = True
        if weak and strict:
            return True
    return False


def _dominating(U, v):
    return [w for w in U if all(x >= y for x, y in zip(w, v))]


def brute_pure_token(g: Game) -> bool:
    """Exists psi: V -> u(A), entrywise positive affine and strictly Pareto improving."""
    V = sorted(set(brute_reduce(g).payoffs.values()))
    U = sorted(set(g.payoffs.values()))
    choices = [_dominating(U, v) for v in V]
    _cap("remaps", math.prod(len(c) for c in choices))
    n = g.n
    for img in itertools.product(*choices):
        if all(w == v for w, v in zip(img, V)):
            continue
        if all(_affine_ok([(v[i], w[i]) for v, w in zip(V, img)]) is not None for i in range(n)):
            return True
    return False


def brute_coloring(adj: Sequence[Sequence[int]]) -> bool:
    k = len(adj)
    _cap("colorings", 3 ** k)
    edges = [(i, j) for i in range(k) for j in range(i + 1, k) if adj[i][j] or adj[j][i]]
    return any(all(c[i] != c[j] for i, j in edges) for c in itertools.product(range(3), repeat=k))


def brute_subgraph_embeddings(adj: Sequence[Sequence[int]], adj2: Sequence[Sequence[int]]):
    """Injections phi with adj[i][j] == adj2[phi i][phi j] for all i != j."""
    k, k2 = len(adj), len(adj2)
    _cap("injections", math.perm(k2, k))
    for phi in itertools.permutations(range(k2), k):
        if all(adj[i][j] == adj2[phi[i]][phi[j]] for i in range(k) for j in range(k) if i != j):
            yield phi


def brute_subgame_coeff10(g: Game, h: Game) -> bool:
    """Some subgame of h is a (1,0)-isomorphic copy of g."""
    for subsets in itertools.product(*(itertools.combinations(range(kh), kg) for kg, kh in zip(g.shape, h.shape))):
        if brute_coeff10_iso(g, subgame(h, subsets)):
            return True
    return False


def brute_omni_pure(g: Game) -> bool:
    """Some reduced outcome strictly Pareto dominated by some outcome of g."""
    red = brute_reduce(g)
    for s in red.payoffs.values():
        for t in g.payoffs.values():
            if all(x >= y for x, y in zip(t, s)) and t != s:
                return True
    return False


def hull_improvable(g: Game, v) -> bool:
    """Is v strictly Pareto improvable by a correlated profile of g? (single-point LP)"""
    U = sorted(set(g.payoffs.values()))
    p = LinearProgram()
    for k in range(len(U)):
        p.var(k)
    p.add({k: 1 for k in range(len(U))}, "=", 1)
    for i in range(g.n):
        p.add({k: U[k][i] for k in range(len(U))}, ">=", v[i])
    p.maximize({k: sum(U[k]) for k in range(len(U))})
    res = solve(p)
    return res.optimal and res.value > sum(v)


def brute_omni_correlated(g: Game) -> bool:
    return any(hull_improvable(g, v) for v in set(brute_reduce(g).payoffs.values()))
