"""Instance generators: the worked example games and the hardness gadgets."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .game import Disarmament, Game, SpikitError, rational
from .oracles import brute_coeff10_iso

EPS = Fraction(1, 100)

_SEAWAY = [
    [(2, 2), (-1, 8), (-10, 10), (-10, 10)],
    [(8, -1), (-100, -100), (-10, 10), (-10, 10)],
    [(10, -10), (10, -10), (2, 2), (0, 5)],
    [(10, -10), (10, -10), (5, 0), (-10, -10)],
]

_SEAWAY_TOKEN = [
    [("3.2", "3.2"), (2, 5)],
    [(5, 2), (-4, -4)],
]

_NEGOTIATION = [
    [(2, 4), (2, 5), (1, 7), (4, 4), (4, 5), (3, 7)],
    [(3, 4), (3, 5), (0, 2), (5, 4), (5, 5), (2, 2)],
    [(5, 3), (0, 2), (0, 2), (7, 3), (2, 2), (2, 2)],
    [(3, 3), (3, 4), (2, 6), (5, 2), (6, 2), (6, 2)],
    [(4, 3), (4, 4), (1, 1), (6, 2), (7, 2), (3, 1)],
    [(6, 2), (1, 1), (1, 1), (8, 1), (3, 1), (3, 1)],
]

_TEMPTATION = [
    [(4, 2), (1, 1), (6, 0), (6, 0)],
    [(1, 1), (2, 4), (6, 0), (6, 0)],
    [(0, 0), (0, 0), (5, 3), (3, 2)],
    [(0, 0), (0, 0), (2, 2), (3, 5)],
]

_WHY_ISO = [
    [(-5, -5), (-5, -5), (-5, -5), (-3, -3), (-3, -3), (0, 5)],
    [(-5, -5), (-5, -5), (-5, -5), (2, 1), (4, 1), (-3, -3)],
    [(-3, -3), (-3, -3), (0, 5), (5, -5), (5, -5), (5, -5)],
    [(1, 1), (3, 1), (-3, -3), (5, -5), (5, -5), (5, -5)],
]


def from_matrix(rows: Sequence[Sequence[Sequence]], row_labels, col_labels, players=("P1", "P2")) -> Game:
    """Two-player game from a bimatrix written row by row."""
    return Game.build([row_labels, col_labels], lambda a: rows[a[0]][a[1]], players)


def gen_paper_game(name: str) -> Game:
    if name == "seaway":
        acts = ["FA", "FN", "PA", "PN"]
        return from_matrix(_SEAWAY, acts, acts)
    if name == "seaway_token":
        acts = ["Token PA", "Token PN"]
        return from_matrix(_SEAWAY_TOKEN, acts, acts)
    if name == "negotiation":
        rows = [f"({x},{y})" for y in ("nf", "f") for x in ("l", "m", "h")]
        cols = [f"({x},{y})" for y in ("s", "c") for x in ("l", "m", "h")]
        return from_matrix(_NEGOTIATION, rows, cols, ("Alice", "Bob"))
    if name == "temptation":
        return from_matrix(_TEMPTATION, ["T1", "T2", "R1", "R2"], ["C1", "C2", "F1", "F2"])
    if name == "why_iso":
        return from_matrix(_WHY_ISO, [f"r{i}" for i in range(1, 5)], [f"c{j}" for j in range(1, 7)])
    raise SpikitError(f"unknown named game {name!r}")


NAMED_GAMES = ("seaway", "seaway_token", "negotiation", "temptation", "why_iso")


def random_game(players: int, actions: int | Sequence[int], payoff_range=(-5, 5), seed=0) -> Game:
    """Seeded game with integer payoffs drawn uniformly from the inclusive range."""
    rng = random.Random(seed)
    shape = [actions] * players if isinstance(actions, int) else list(actions)
    lo, hi = payoff_range
    return Game.build([[f"a{k}" for k in range(s)] for s in shape],
                      lambda a: [rng.randint(lo, hi) for _ in range(players)])


def relabel(g: Game, perms: Sequence[Sequence[int]], affine=None) -> Game:
    """Game h with h(perm(a)) = m * u(a) + b; perms[i][k] is the new index of action k."""
    n = g.n
    inv = []
    for i, p in enumerate(perms):
        q = [0] * len(p)
        for k, t in enumerate(p):
            q[t] = k
        inv.append(q)
    acts = [[g.actions[i][inv[i][t]] for t in range(len(perms[i]))] for i in range(n)]

    def pay(t):
        v = g.payoffs[tuple(inv[i][x] for i, x in enumerate(t))]
        if affine is None:
            return v
        return tuple(m * x + b for x, (m, b) in zip(v, affine))

    return Game.build(acts, pay, g.players)


# --- 3-coloring gadget for the vector remapping problem -------------------

@dataclass(frozen=True)
class VectorRemapInstance:
    S: tuple[tuple[Fraction, ...], ...]
    T: tuple[tuple[Fraction, ...], ...]
    n: int

    def __post_init__(self):
        for v in self.S + self.T:
            if len(v) != self.n:
                raise SpikitError(f"vector {v} has dimension {len(v)}, expected {self.n}")

    @classmethod
    def of(cls, S, T, n=None) -> "VectorRemapInstance":
        S = tuple(sorted({tuple(rational(x) for x in v) for v in S}))
        T = tuple(sorted({tuple(rational(x) for x in v) for v in T}))
        if n is None:
            n = len((S + T)[0])
        return cls(S, T, n)


def pad_graph(adj: Sequence[Sequence[int]], minimum=5) -> list[list[int]]:
    k = len(adj)
    size = max(k, minimum)
    return [[int(adj[i][j]) if i < k and j < k else 0 for j in range(size)] for i in range(size)]


def gen_gpr_from_graph(adj: Sequence[Sequence[int]]) -> VectorRemapInstance:
    """S = unit pair vectors, T = half-vectors carrying a proper colour pair on edges."""
    adj = pad_graph(adj)
    n = len(adj)
    half = Fraction(1, 2)
    S, T = [], []
    for i, j in itertools.combinations(range(n), 2):
        s = [Fraction(0)] * n
        s[i] = s[j] = Fraction(1)
        S.append(tuple(s))
        for ci in (1, 2, 3):
            for cj in (1, 2, 3):
                if (adj[i][j] or adj[j][i]) and ci == cj:
                    continue
                t = [half] * n
                t[i], t[j] = Fraction(ci), Fraction(cj)
                T.append(tuple(t))
    return VectorRemapInstance.of(S, T, n)


def cycle_graph(n: int) -> list[list[int]]:
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        j = (i + 1) % n
        adj[i][j] = adj[j][i] = 1
    return adj


def wheel_graph(n: int) -> list[list[int]]:
    """Hub vertex 0 joined to a cycle on the remaining n - 1 vertices."""
    rim = cycle_graph(n - 1)
    adj = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        for j in range(n - 1):
            adj[i + 1][j + 1] = rim[i][j]
        adj[0][i + 1] = adj[i + 1][0] = 1
    return adj


def all_graphs(k: int):
    """Every labelled simple graph on k vertices."""
    pairs = list(itertools.combinations(range(k), 2))
    for mask in range(1 << len(pairs)):
        adj = [[0] * k for _ in range(k)]
        for bit, (i, j) in enumerate(pairs):
            if mask >> bit & 1:
                adj[i][j] = adj[j][i] = 1
        yield adj


# --- disarmament and remapping gadgets ------------------------------------

@dataclass
class Gadget:
    """A generated game together with what the construction guarantees."""

    game: Game
    kind: str
    spi_exists: bool | None
    planted: dict = field(default_factory=dict)


def _check_unit(g: Game):
    for v in g.payoffs.values():
        if any(x < 0 or x > 1 for x in v):
            raise SpikitError("component game utilities must lie in [0, 1]")


def disarm_verify_gadget(G: Game, Gp: Game, iso_exists: bool | None = None, eps: Fraction = EPS) -> Gadget:
    """Two-player game where disarming row x is an SPI iff G and Gp are (1,0)-isomorphic."""
    _check_unit(G)
    _check_unit(Gp)
    if G.n != 2 or Gp.n != 2 or G.shape != Gp.shape:
        raise SpikitError("verification gadget needs two-player games of equal shape")
    n, m = G.shape
    e = eps
    rows = [("a", k) for k in range(n)] + [("x",), ("x'",)] + [("a'", k) for k in range(n)] + [("y",), ("y'",)]
    cols = [("a", k) for k in range(m)] + [("x",), ("x'",)] + [("a'", k) for k in range(m)] + [("y",), ("y'",)]

    # payoff for (row kind, column kind); G-blocks handled separately
    table = {
        ("a", "x"): (0, 0), ("a", "x'"): (-100, 10), ("a", "a'"): (-e, -e), ("a", "y"): (-2 * e, -e),
        ("a", "y'"): (-100 - e, -e),
        ("x", "a"): (0, 10 + e), ("x", "x"): (10, 10 + e), ("x", "x'"): (10, 10), ("x", "a'"): (1 + 2 * e, 10 - e),
        ("x", "y"): (10 + 2 * e, 10 - 2 * e), ("x", "y'"): (10 + 2 * e, 10 - 2 * e),
        ("x'", "a"): (1, -100), ("x'", "x"): (0, -100), ("x'", "x'"): (-10, -10), ("x'", "a'"): (-e, -100 - e),
        ("x'", "y"): (-e, -100 - e), ("x'", "y'"): (-100 - e, -100 - e),
        ("a'", "a"): (-e, -100 - 2 * e), ("a'", "x"): (10 - e, -100 - 2 * e), ("a'", "x'"): (10 - e, -100 - e),
        ("a'", "y"): (e, e), ("a'", "y'"): (-100 + e, 10 + e),
        ("y", "a"): (-e, -100 - 2 * e), ("y", "x"): (10 - e, -100 - 2 * e), ("y", "x'"): (10 - e, -100 - e),
        ("y", "a'"): (e, 10 + 2 * e), ("y", "y"): (10 + e, 10 + 2 * e), ("y", "y'"): (10 + e, 10 + e),
        ("y'", "a"): (-e, -100 - 2 * e), ("y'", "x"): (10 - e, -100 - 2 * e), ("y'", "x'"): (10 - e, -100 - e),
        ("y'", "a'"): (1 + e, -100 + e), ("y'", "y"): (e, -100 + e), ("y'", "y'"): (-10 + e, -10 + e),
    }

    def pay(a):
        r, c = rows[a[0]], cols[a[1]]
        if r[0] == "a" and c[0] == "a":
            return G.payoffs[(r[1], c[1])]
        if r[0] == "a'" and c[0] == "a'":
            return tuple(x + e for x in Gp.payoffs[(r[1], c[1])])
        return table[(r[0], c[0])]

    def name(t, i):
        if len(t) == 1:
            return t[0]
        return f"G:{G.actions[i][t[1]]}" if t[0] == "a" else f"G':{Gp.actions[i][t[1]]}"

    if iso_exists is None:
        iso_exists = brute_coeff10_iso(G, Gp)
    game = Game.build([[name(r, 0) for r in rows], [name(c, 1) for c in cols]], pay)
    return Gadget(game, "disarm_verify", iso_exists,
                  {"disarmament": Disarmament.of([{n}, set()])})


def _search_rows_cols(G: Game, Gp: Game):
    n1, n2 = G.shape
    p1, p2 = Gp.shape
    rows = [("R1", k) for k in range(p1)] + [("R2", k) for k in range(p2)] + \
           [("T1", k) for k in range(n1)] + [("T2", k) for k in range(n2)]
    cols = [("D", k) for k in range(n2)] + [("Dbar",)] + [("P", k) for k in range(p2)] + [("Pbar",)]
    return rows, cols


def _search_layout(G: Game, Gp: Game, eps: Fraction) -> Game:
    """T/R rows against D/P columns; G sits in T x D, Gp + eps in R x P."""
    rows, cols = _search_rows_cols(G, Gp)
    e = eps

    def pay(a):
        r, c = rows[a[0]], cols[a[1]]
        if r[0] in ("R1", "R2") and c[0] in ("D", "Dbar"):
            return (-10, -10)
        if r[0] in ("T1", "T2") and c[0] in ("P", "Pbar"):
            return (10, -10)
        if r[0] == "R1":
            return tuple(x + e for x in Gp.payoffs[(r[1], c[1])]) if c[0] == "P" else (e, 2 + e)
        if r[0] == "R2":
            if c[0] == "Pbar":
                return (1 + e, 2 + e)
            return (-1 + e, 3 + e) if r[1] == c[1] else (-2 + e, -2 + e)
        if r[0] == "T1":
            return G.payoffs[(r[1], c[1])] if c[0] == "D" else (0, 2)
        if c[0] == "Dbar":
            return (1, 2)
        return (-1, 3) if r[1] == c[1] else (-2, -2)

    def rlab(r):
        if r[0] == "R1":
            return f"R:{Gp.actions[0][r[1]]}"
        if r[0] == "R2":
            return f"R:{Gp.actions[1][r[1]]}*"
        if r[0] == "T1":
            return f"T:{G.actions[0][r[1]]}"
        return f"T:{G.actions[1][r[1]]}*"

    def clab(c):
        if c[0] == "D":
            return f"D:{G.actions[1][c[1]]}"
        if c[0] == "P":
            return f"P:{Gp.actions[1][c[1]]}"
        return "D:bar" if c[0] == "Dbar" else "P:bar"

    return Game.build([[rlab(r) for r in rows], [clab(c) for c in cols]], pay)


def disarm_search_gadget(G: Game, Gp: Game, plant=None, eps: Fraction = EPS) -> Gadget:
    """Block game where a unilateral disarmament SPI exists iff Gp has a (1,0) copy of G.

    ``plant`` = (rows, cols) index lists of the copy of G inside Gp, when known.
    """
    _check_unit(G)
    _check_unit(Gp)
    if G.n != 2 or Gp.n != 2:
        raise SpikitError("search gadget needs two-player games")
    game = _search_layout(G, Gp, eps)
    planted = {}
    if plant is not None:
        rows, _ = _search_rows_cols(G, Gp)
        keep_r1, keep_c = set(plant[0]), set(plant[1])
        removed = {k for k, r in enumerate(rows)
                   if r[0] in ("T1", "T2") or (r[0] == "R1" and r[1] not in keep_r1)
                   or (r[0] == "R2" and r[1] not in keep_c)}
        planted = {"plant": plant, "disarmament": Disarmament.of([removed, set()])}
    return Gadget(game, "disarm_search", True if plant is not None else None, planted)


def _graph_game(adj: Sequence[Sequence[int]]) -> Game:
    labels = [str(v) for v in range(len(adj))]
    return Game.build([labels, labels],
                      lambda o: (Fraction(3, 2),) * 2 if o[0] == o[1] else (adj[o[0]][o[1]],) * 2)


def uni_remap_gadget(adj: Sequence[Sequence[int]], adj2: Sequence[Sequence[int]], embedding=None,
                     eps: Fraction = EPS) -> Gadget:
    """Block game where a unilateral remapping SPI exists iff adj embeds in adj2.

    Both players receive adjacency payoffs, 3/2 on the diagonal.
    ``embedding`` maps vertices of adj to vertices of adj2 when planted.
    """
    game = _search_layout(_graph_game(adj), _graph_game(adj2), eps)
    planted = {}
    if embedding is not None:
        k, kp = len(adj), len(adj2)
        # row blocks in order: R1 (kp), R2 (kp), T1 (k), T2 (k)
        psi = {}
        for v in range(k):
            psi[2 * kp + v] = embedding[v]
            psi[2 * kp + k + v] = kp + embedding[v]
        planted = {"embedding": list(embedding), "psi1": psi}
    return Gadget(game, "uni_remap", True if embedding is not None else None, planted)


def gen_hardness_game(kind: str, *args, **kwargs) -> Gadget:
    builders = {
        "disarm_verify_gadget": disarm_verify_gadget,
        "disarm_search_gadget": disarm_search_gadget,
        "uni_remap_gadget": uni_remap_gadget,
    }
    if kind not in builders:
        raise SpikitError(f"unknown gadget kind {kind!r}")
    return builders[kind](*args, **kwargs)
