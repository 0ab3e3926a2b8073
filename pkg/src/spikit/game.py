"""Exact-rational normal-form games and the elementary operations on them."""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Outcome = tuple[int, ...]
PayoffVector = tuple[Fraction, ...]


class SpikitError(Exception):
    """Base class for all errors raised by the toolkit."""


class GameFormatError(SpikitError):
    """Malformed game or instance file. Carries line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class SizeCapExceeded(SpikitError):
    """A search would enumerate more candidates than the configured cap."""

    def __init__(self, what: str, needed: int, cap: int):
        self.needed = needed
        self.cap = cap
        super().__init__(f"{what}: {needed} candidates exceeds cap {cap}")


def rational(value) -> Fraction:
    """Parse a rational literal: int, Fraction, "p/q" or an exact decimal string."""
    if isinstance(value, bool):
        raise GameFormatError(f"not a rational literal: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                p, q = int(num), int(den)
            except ValueError:
                raise GameFormatError(f"bad rational literal: {value!r}") from None
            if q <= 0:
                raise GameFormatError(f"denominator must be positive: {value!r}")
            return Fraction(p, q)
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise GameFormatError(f"bad rational literal: {value!r}") from None
    if isinstance(value, float):
        # only reachable for floats built in Python; JSON input is parsed exactly
        return Fraction(repr(value))
    raise GameFormatError(f"not a rational literal: {value!r}")


def format_rational(q: Fraction):
    """JSON-friendly form: plain int when integral, else "p/q"."""
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


class Pareto(enum.Enum):
    EQUAL = "Equal"
    WEAKLY_BELOW = "WeaklyBelow"
    STRICTLY_BELOW = "StrictlyBelow"
    WEAKLY_ABOVE = "WeaklyAbove"
    STRICTLY_ABOVE = "StrictlyAbove"
    INCOMPARABLE = "Incomparable"


def pareto_compare(v: Sequence[Fraction], w: Sequence[Fraction]) -> Pareto:
    """Compare v against w.

    Distinct vectors that are ordered always come back as the strict variant,
    so WEAKLY_ABOVE / WEAKLY_BELOW are never produced here; they exist for
    callers describing set-level relations.
    """
    if len(v) != len(w):
        raise ValueError(f"payoff length mismatch: {len(v)} vs {len(w)}")
    up = any(x > y for x, y in zip(v, w))
    down = any(x < y for x, y in zip(v, w))
    if up and down:
        return Pareto.INCOMPARABLE
    if up:
        return Pareto.STRICTLY_ABOVE
    if down:
        return Pareto.STRICTLY_BELOW
    return Pareto.EQUAL


def weakly_dominates(v: Sequence[Fraction], w: Sequence[Fraction], players=None) -> bool:
    idx = range(len(v)) if players is None else players
    return all(v[i] >= w[i] for i in idx)


def strictly_dominates(v: Sequence[Fraction], w: Sequence[Fraction], players=None) -> bool:
    """v ⪰ w on the given players with at least one strict entry."""
    idx = range(len(v)) if players is None else players
    return all(v[i] >= w[i] for i in idx) and any(v[i] > w[i] for i in idx)


@dataclass(frozen=True, eq=False)
class Game:
    """Finite normal-form game with a dense payoff table.

    ``payoffs`` maps every outcome (one action index per player) to a tuple of
    Fractions. Treat instances as immutable.
    """

    players: tuple[str, ...]
    actions: tuple[tuple[str, ...], ...]
    payoffs: Mapping[Outcome, PayoffVector]

    def __post_init__(self):
        n = len(self.players)
        if n < 1:
            raise GameFormatError("a game needs at least one player")
        if len(self.actions) != n:
            raise GameFormatError(f"{n} players but {len(self.actions)} action lists")
        for i, acts in enumerate(self.actions):
            if not acts:
                raise GameFormatError(f"player {i + 1} has no actions")
            if len(set(acts)) != len(acts):
                raise GameFormatError(f"player {i + 1} has duplicate action labels")
        for a in self.outcomes():
            v = self.payoffs.get(a)
            if v is None:
                raise GameFormatError(f"missing payoff for outcome {a}")
            if len(v) != n:
                raise GameFormatError(f"payoff at {a} has {len(v)} entries, expected {n}")
        if len(self.payoffs) != self.size:
            raise GameFormatError("payoff table has outcomes outside the action sets")

    @classmethod
    def build(cls, actions: Sequence[Sequence[str]], payoff, players: Sequence[str] | None = None) -> "Game":
        """Build from labels and either a mapping outcome -> vector or a callable."""
        acts = tuple(tuple(str(x) for x in a) for a in actions)
        n = len(acts)
        names = tuple(players) if players is not None else tuple(f"P{i + 1}" for i in range(n))
        table = {}
        for a in itertools.product(*(range(len(x)) for x in acts)):
            v = payoff(a) if callable(payoff) else payoff[a]
            table[a] = tuple(rational(x) for x in v)
        return cls(names, acts, table)

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.actions)

    @property
    def size(self) -> int:
        s = 1
        for k in self.shape:
            s *= k
        return s

    def outcomes(self) -> Iterator[Outcome]:
        """All outcomes in row-major order (player 1 outermost)."""
        return itertools.product(*(range(len(a)) for a in self.actions))

    def u(self, a: Outcome) -> PayoffVector:
        return self.payoffs[a]

    def action_index(self, player: int, label: str) -> int:
        try:
            return self.actions[player].index(label)
        except ValueError:
            raise SpikitError(f"player {player + 1} has no action {label!r}") from None

    def outcome_labels(self, a: Outcome) -> tuple[str, ...]:
        return tuple(self.actions[i][k] for i, k in enumerate(a))

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return (self.players == other.players and self.actions == other.actions
                and dict(self.payoffs) == dict(other.payoffs))

    def __hash__(self):
        return hash((self.players, self.actions, tuple(self.payoffs[a] for a in self.outcomes())))

    def __repr__(self):
        return f"Game(shape={self.shape}, players={self.players})"


def subgame(g: Game, keep: Sequence[Sequence[int]]) -> Game:
    """Restrict g to the given per-player action indices (kept in the given order)."""
    keep = [list(k) for k in keep]
    if len(keep) != g.n:
        raise SpikitError("subgame needs one index list per player")
    for i, k in enumerate(keep):
        if not k:
            raise SpikitError(f"player {i + 1} would have no actions")
        if len(set(k)) != len(k) or any(not 0 <= x < len(g.actions[i]) for x in k):
            raise SpikitError(f"invalid action indices for player {i + 1}: {k}")
    acts = tuple(tuple(g.actions[i][x] for x in k) for i, k in enumerate(keep))
    table = {}
    for a in itertools.product(*(range(len(k)) for k in keep)):
        table[a] = g.payoffs[tuple(keep[i][x] for i, x in enumerate(a))]
    return Game(g.players, acts, table)


@dataclass(frozen=True)
class Disarmament:
    """Per-player sets of removed action indices."""

    removed: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, removed: Sequence[Iterable[int]]) -> "Disarmament":
        return cls(tuple(frozenset(r) for r in removed))

    def is_empty(self) -> bool:
        return not any(self.removed)

    def union(self, other: "Disarmament") -> "Disarmament":
        return Disarmament(tuple(a | b for a, b in zip(self.removed, other.removed)))

    def labels(self, g: Game) -> list[list[str]]:
        return [[g.actions[i][k] for k in sorted(r)] for i, r in enumerate(self.removed)]


def remove_actions(g: Game, d: Disarmament) -> Game:
    if len(d.removed) != g.n:
        raise SpikitError("disarmament must list one removal set per player")
    keep = []
    for i, r in enumerate(d.removed):
        if any(not 0 <= k < len(g.actions[i]) for k in r):
            raise SpikitError(f"invalid removal index for player {i + 1}")
        kept = [k for k in range(len(g.actions[i])) if k not in r]
        if not kept:
            raise SpikitError(f"disarmament removes every action of player {i + 1}")
        keep.append(kept)
    return subgame(g, keep)


def payoff_set(g: Game) -> set[PayoffVector]:
    return set(g.payoffs.values())


def sorted_payoffs(g: Game) -> list[PayoffVector]:
    """Distinct payoff vectors in canonical (lexicographic) order."""
    return sorted(payoff_set(g))


class CorrelatedProfile:
    """Exact probability distribution over outcomes."""

    __slots__ = ("support",)

    def __init__(self, support: Mapping[Outcome, Fraction]):
        clean = {}
        for a, p in support.items():
            p = rational(p)
            if p < 0:
                raise SpikitError(f"negative probability {p} at {a}")
            if p > 0:
                clean[tuple(a)] = clean.get(tuple(a), Fraction(0)) + p
        if sum(clean.values(), Fraction(0)) != 1:
            raise SpikitError("probabilities must sum to exactly 1")
        self.support = dict(sorted(clean.items()))

    @classmethod
    def point(cls, a: Outcome) -> "CorrelatedProfile":
        return cls({tuple(a): Fraction(1)})

    def mix(self, other: "CorrelatedProfile", weight: Fraction) -> "CorrelatedProfile":
        """(1 - weight) * self + weight * other."""
        out: dict[Outcome, Fraction] = {}
        for a, p in self.support.items():
            out[a] = out.get(a, Fraction(0)) + (1 - weight) * p
        for a, p in other.support.items():
            out[a] = out.get(a, Fraction(0)) + weight * p
        return CorrelatedProfile(out)

    def __eq__(self, other):
        return isinstance(other, CorrelatedProfile) and self.support == other.support

    def __repr__(self):
        inner = ", ".join(f"{a}: {p}" for a, p in self.support.items())
        return f"CorrelatedProfile({{{inner}}})"


def expected_payoff(g: Game, c: CorrelatedProfile) -> PayoffVector:
    total = [Fraction(0)] * g.n
    for a, p in c.support.items():
        if a not in g.payoffs:
            raise SpikitError(f"outcome {a} is not an outcome of the game")
        for i, x in enumerate(g.payoffs[a]):
            total[i] += p * x
    return tuple(total)


def first_outcome_with_payoff(g: Game, v: PayoffVector) -> Outcome:
    for a in g.outcomes():
        if g.payoffs[a] == v:
            return a
    raise SpikitError(f"payoff {v} does not occur in the game")


# --- serialization ---------------------------------------------------------

def _nest(g: Game, prefix: tuple[int, ...]):
    if len(prefix) == g.n:
        return [format_rational(x) for x in g.payoffs[prefix]]
    return [_nest(g, prefix + (k,)) for k in range(len(g.actions[len(prefix)]))]


def game_to_dict(g: Game) -> dict:
    return {
        "players": list(g.players),
        "actions": [list(a) for a in g.actions],
        "payoffs": _nest(g, ()),
    }


def game_to_json(g: Game, indent: int | None = None) -> str:
    return json.dumps(game_to_dict(g), indent=indent)


def loads_json(text: str):
    """json.loads that keeps decimals exact and reports line/column on failure."""
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as e:
        raise GameFormatError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None


def game_from_dict(data) -> Game:
    if not isinstance(data, dict):
        raise GameFormatError("game must be a JSON object")
    for key in ("actions", "payoffs"):
        if key not in data:
            raise GameFormatError(f"missing key {key!r}")
    actions = data["actions"]
    if not isinstance(actions, list) or not all(isinstance(a, list) for a in actions):
        raise GameFormatError("'actions' must be an array of arrays")
    n = len(actions)
    players = data.get("players") or [f"P{i + 1}" for i in range(n)]
    if len(players) != n:
        raise GameFormatError(f"{len(players)} players but {n} action lists")
    shape = [len(a) for a in actions]
    table = {}

    def walk(node, prefix):
        depth = len(prefix)
        if depth == n:
            if not isinstance(node, list) or len(node) != n:
                raise GameFormatError(f"payoff at {list(prefix)} must be an array of {n} rationals")
            table[prefix] = tuple(rational(x) for x in node)
            return
        if not isinstance(node, list) or len(node) != shape[depth]:
            raise GameFormatError(
                f"payoffs at depth {depth} (prefix {list(prefix)}) must have {shape[depth]} entries")
        for k, child in enumerate(node):
            walk(child, prefix + (k,))

    walk(data["payoffs"], ())
    return Game(tuple(str(p) for p in players), tuple(tuple(str(x) for x in a) for a in actions), table)


def game_from_json(text: str) -> Game:
    return game_from_dict(loads_json(text))


def payoff_to_json(v: Sequence[Fraction]) -> list:
    return [format_rational(x) for x in v]
