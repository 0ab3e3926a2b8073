"""JSON certificates and an independent checker for them.

The checker works from the embedded payoff tables alone. It replays the
elimination traces, re-checks every isomorphism and realization, and
compares a SHA-256 fingerprint of each embedded game so that an edited
payoff is caught even when the edit happens to keep the claim true.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .game import (CorrelatedProfile, Game, GameFormatError, SpikitError, format_rational, game_from_dict,
                   game_to_dict, rational)

FORMAT = "spikit-certificate/1"


def fingerprint(g: Game) -> str:
    canon = json.dumps(game_to_dict(g), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _q(v):
    return [format_rational(Fraction(x)) for x in v]


def _embed(games: dict[str, Game]) -> dict:
    return {"games": {k: game_to_dict(g) for k, g in games.items()},
            "fingerprints": {k: fingerprint(g) for k, g in games.items()}}


def _trace(trace) -> list:
    return [[i + 1, removed, dom] for i, removed, dom in trace]


def _profile_json(g: Game, r) -> list:
    if isinstance(r, CorrelatedProfile):
        return [[list(g.outcome_labels(a)), format_rational(p)] for a, p in r.support.items()]
    return [[list(g.outcome_labels(tuple(r))), 1]]


# --- building certificates ---------------------------------------------------

def spi_to_dict(cert) -> dict:
    """Serialize an SpiCertificate (plain, disarmament or token-backed)."""
    src, tgt = cert.source_reduced, cert.target_reduced
    out = {
        "format": FORMAT,
        "certificate": "disarm" if "disarmament" in cert.extra else "spi",
        "kind": cert.kind,
        "players": None if cert.players is None else [i + 1 for i in cert.players],
        "source_trace": _trace(cert.source_trace),
        "target_trace": _trace(cert.target_trace),
        "witness": list(src.outcome_labels(cert.witness)),
        "iso": None,
    }
    if cert.iso is not None:
        out["iso"] = {"maps": cert.iso.labels(src, tgt), "m": _q(cert.iso.m), "b": _q(cert.iso.b)}
    if "disarmament" in cert.extra:
        out["remove"] = cert.extra["disarmament"].labels(cert.source)
        out.update(_embed({"default": cert.source}))
    else:
        out.update(_embed({"default": cert.source, "candidate": cert.target}))
    if "realizations" in cert.extra:
        out["certificate"] = "token"
        out["mode"] = cert.extra.get("mode", "correlated")
        out["realizations"] = [{"token_outcome": list(cert.target.outcome_labels(a)),
                                "profile": _profile_json(cert.source, r)}
                               for a, r in sorted(cert.extra["realizations"].items())]
    return out


def token_to_dict(ts) -> dict:
    from .spi import is_spi
    cert = is_spi(ts.game, ts.token)
    if cert is None:
        raise SpikitError("token game is not an SPI; nothing to certify")
    cert.extra["realizations"] = ts.realizations
    cert.extra["mode"] = ts.mode
    return spi_to_dict(cert)


def omni_to_dict(om) -> dict:
    from .reduction import reduce
    _, trace = reduce(om.game)
    out = {"format": FORMAT, "certificate": "omni", "mode": om.mode, "trace": _trace(trace),
           "realizations": [{"outcome": list(om.game.outcome_labels(a)), "profile": _profile_json(om.game, r)}
                            for a, r in sorted(om.realizations.items())]}
    out.update(_embed({"default": om.game}))
    return out


def uni_to_dict(uc) -> dict:
    from .reduction import reduce, surviving_actions
    g = uc.game
    _, trace = reduce(g)
    start = [sorted(set(uc.psi1.values()))] + [list(range(k)) for k in g.shape[1:]]
    _, ttrace = surviving_actions(g, restrict=start, players=range(1, g.n))
    src, tgt = uc.reduced, uc.target
    isos = [{"maps": iso.labels(src, tgt)[1:], "m": _q(iso.m[1:]), "b": _q(iso.b[1:])} for iso in uc.isos]
    out = {"format": FORMAT, "certificate": "uni", "kind": uc.kind,
           "psi1": {g.actions[0][k]: g.actions[0][t] for k, t in sorted(uc.psi1.items())},
           "trace": _trace(trace),
           "target_trace": [[i + 1, g.actions[i][a], g.actions[i][b]] for i, a, b in ttrace],
           "isos": isos, "witness": list(src.outcome_labels(uc.witness)), "notes": list(uc.notes)}
    out.update(_embed({"default": g}))
    return out


def to_certificate(obj) -> dict:
    from .remap import OmniRemap, UniCertificate
    from .spi import SpiCertificate
    from .tokens import TokenSpi
    if isinstance(obj, SpiCertificate):
        return spi_to_dict(obj)
    if isinstance(obj, TokenSpi):
        return token_to_dict(obj)
    if isinstance(obj, OmniRemap):
        return omni_to_dict(obj)
    if isinstance(obj, UniCertificate):
        return uni_to_dict(obj)
    raise SpikitError(f"no certificate format for {type(obj).__name__}")


# --- checking ------------------------------------------------------------------

class Reject(Exception):
    pass


@dataclass
class Report:
    ok: bool
    errors: list[str] = field(default_factory=list)


def _require(cond, msg):
    if not cond:
        raise Reject(msg)


def _game(cert, key) -> Game:
    try:
        g = game_from_dict(cert["games"][key])
    except (KeyError, TypeError):
        raise Reject(f"missing embedded game {key!r}") from None
    _require(cert.get("fingerprints", {}).get(key) == fingerprint(g), f"fingerprint mismatch for game {key!r}")
    return g


def _idx(g: Game, player: int, label) -> int:
    _require(label in g.actions[player], f"player {player + 1} has no action {label!r}")
    return g.actions[player].index(label)


def _beats(g, i, b, a, alive) -> bool:
    for rest in itertools.product(*(alive[j] if j != i else [None] for j in range(g.n))):
        hi = rest[:i] + (b,) + rest[i + 1:]
        lo = rest[:i] + (a,) + rest[i + 1:]
        if g.payoffs[hi][i] <= g.payoffs[lo][i]:
            return False
    return True


def _replay(g: Game, trace, alive=None, movers=None) -> list[list[int]]:
    """Apply a removal trace with checks; the result must be free of dominated actions."""
    alive = [list(range(k)) for k in g.shape] if alive is None else [list(a) for a in alive]
    movers = list(range(g.n)) if movers is None else list(movers)
    for step in trace:
        _require(isinstance(step, list) and len(step) == 3, f"malformed trace step {step!r}")
        p, removed, dom = step
        i = int(p) - 1
        _require(i in movers, f"trace removes an action of player {p}, who may not lose actions here")
        a, b = _idx(g, i, removed), _idx(g, i, dom)
        _require(a in alive[i] and b in alive[i], f"trace step {step!r} uses an action already removed")
        _require(_beats(g, i, b, a, alive), f"{dom!r} does not strictly dominate {removed!r} at that step")
        alive[i].remove(a)
    for i in movers:
        for a in alive[i]:
            _require(not any(b != a and _beats(g, i, b, a, alive) for b in alive[i]),
                     f"action {g.actions[i][a]!r} of player {i + 1} is still dominated after the trace")
    return alive


def _outcomes(alive):
    return list(itertools.product(*alive))


def _geq(v, w, idx):
    return all(v[i] >= w[i] for i in idx)


def _gt(v, w, idx):
    return _geq(v, w, idx) and any(v[i] > w[i] for i in idx)


def _realize(g: Game, profile) -> tuple[Fraction, ...]:
    _require(isinstance(profile, list) and profile, "empty realization")
    total = [Fraction(0)] * g.n
    mass = Fraction(0)
    for entry in profile:
        labels, p = entry
        p = rational(p)
        _require(p > 0, "realization probabilities must be positive")
        _require(len(labels) == g.n, "realization outcome has the wrong length")
        a = tuple(_idx(g, i, x) for i, x in enumerate(labels))
        mass += p
        for i in range(g.n):
            total[i] += p * g.payoffs[a][i]
    _require(mass == 1, "realization probabilities do not sum to 1")
    return tuple(total)


def _check_pair(cert, g: Game, h: Game):
    """Simple or isomorphism condition between the reduced games of g and h."""
    _require(g.n == h.n, "player counts differ")
    idx = list(range(g.n)) if cert.get("players") is None else [int(p) - 1 for p in cert["players"]]
    _require(all(0 <= i < g.n for i in idx), "invalid player list")
    ga = _replay(g, cert.get("source_trace", []))
    ha = _replay(h, cert.get("target_trace", []))
    src, tgt = _outcomes(ga), _outcomes(ha)
    w = tuple(_idx(g, i, x) for i, x in enumerate(cert["witness"]))
    _require(len(w) == g.n and all(w[i] in ga[i] for i in range(g.n)), "witness is not a reduced outcome")
    kind = cert.get("kind")
    if kind == "Simple":
        for s in src:
            _require(all(_geq(h.payoffs[t], g.payoffs[s], idx) for t in tgt),
                     "some reduced candidate payoff does not weakly dominate a reduced default payoff")
        _require(all(_gt(h.payoffs[t], g.payoffs[w], idx) for t in tgt),
                 "witness is not strictly improved by every candidate outcome")
        return
    _require(kind == "Isomorphism", f"unknown SPI kind {kind!r}")
    iso = cert.get("iso") or {}
    maps = iso.get("maps")
    _require(isinstance(maps, list) and len(maps) == g.n, "isomorphism needs one action map per player")
    m = [rational(x) for x in iso.get("m", [])]
    b = [rational(x) for x in iso.get("b", [])]
    _require(len(m) == len(b) == g.n and all(x > 0 for x in m), "utility map must be positive affine")
    perm = []
    for i in range(g.n):
        mp = {_idx(g, i, k): _idx(h, i, v) for k, v in maps[i].items()}
        _require(sorted(mp) == sorted(ga[i]) and sorted(mp.values()) == sorted(ha[i]),
                 f"action map of player {i + 1} is not a bijection between reduced action sets")
        perm.append(mp)
    for s in src:
        t = tuple(perm[i][s[i]] for i in range(g.n))
        img = tuple(m[i] * g.payoffs[s][i] + b[i] for i in range(g.n))
        _require(h.payoffs[t] == img, f"payoff equation fails at {g.outcome_labels(s)}")
        _require(_geq(img, g.payoffs[s], idx), f"isomorphism worsens {g.outcome_labels(s)}")
    img = tuple(m[i] * g.payoffs[w][i] + b[i] for i in range(g.n))
    _require(_gt(img, g.payoffs[w], idx), "witness outcome is not strictly improved")


def _removed_game(g: Game, remove) -> Game:
    from .game import subgame
    _require(isinstance(remove, list) and len(remove) == g.n, "remove needs one label list per player")
    keep = []
    for i, labels in enumerate(remove):
        gone = {_idx(g, i, x) for x in labels}
        kept = [k for k in range(g.shape[i]) if k not in gone]
        _require(kept, f"disarmament removes every action of player {i + 1}")
        keep.append(kept)
    return subgame(g, keep)


def _check_token(cert, g: Game, token: Game):
    pure = cert.get("mode") == "pure"
    seen = set()
    for r in cert.get("realizations", []):
        a = tuple(_idx(token, i, x) for i, x in enumerate(r["token_outcome"]))
        _require(len(a) == token.n, "token outcome has the wrong length")
        _require(_realize(g, r["profile"]) == token.payoffs[a],
                 f"realization of {r['token_outcome']} does not reproduce its token payoff")
        _require(not pure or len(r["profile"]) == 1, "pure realizations must be single outcomes")
        seen.add(a)
    _require(seen == set(token.outcomes()), "every token outcome needs a realization")
    _replay(token, [])


def _check_omni(cert, g: Game):
    alive = _replay(g, cert.get("trace", []))
    outs = set(_outcomes(alive))
    pure = cert.get("mode") == "pure"
    seen, strict = set(), False
    for r in cert.get("realizations", []):
        a = tuple(_idx(g, i, x) for i, x in enumerate(r["outcome"]))
        _require(a in outs, f"{r['outcome']} is not a reduced default outcome")
        _require(not pure or len(r["profile"]) == 1, "pure realizations must be single outcomes")
        p = _realize(g, r["profile"])
        _require(_geq(p, g.payoffs[a], range(g.n)), f"remap worsens {r['outcome']}")
        strict = strict or p != g.payoffs[a]
        seen.add(a)
    _require(seen == outs, "every reduced default outcome needs a realization")
    _require(strict, "no outcome is strictly improved")


def _affine(pairs):
    xs = {}
    for x, y in pairs:
        if xs.setdefault(x, y) != y:
            return None
    keys = sorted(xs)
    if len(keys) == 1:
        return Fraction(1), xs[keys[0]] - keys[0]
    m = (xs[keys[-1]] - xs[keys[0]]) / (keys[-1] - keys[0])
    if m <= 0:
        return None
    b = xs[keys[0]] - m * keys[0]
    return (m, b) if all(xs[x] == m * x + b for x in keys) else None


def _check_uni(cert, g: Game):
    ga = _replay(g, cert.get("trace", []))
    psi = {_idx(g, 0, k): _idx(g, 0, v) for k, v in cert.get("psi1", {}).items()}
    _require(sorted(psi) == sorted(ga[0]), "psi1 must be defined on exactly the reduced player-1 actions")
    image = sorted(set(psi.values()))
    ta = _replay(g, cert.get("target_trace", []), [image] + [list(range(k)) for k in g.shape[1:]],
                 range(1, g.n))
    src, tgt = _outcomes(ga), _outcomes(ta)
    w = tuple(_idx(g, i, x) for i, x in enumerate(cert["witness"]))
    _require(w in set(src), "witness is not a reduced outcome")
    everyone = range(g.n)
    if cert.get("kind") == "Simple":
        _require(len(image) == 1, "the all-dominating condition applies to constant psi1 only")
        for s in src:
            _require(all(_geq(g.payoffs[t], g.payoffs[s], everyone) for t in tgt),
                     "some committed outcome does not dominate a reduced default outcome")
        _require(all(_gt(g.payoffs[t], g.payoffs[w], everyone) for t in tgt), "witness is not strictly improved")
        return
    _require(cert.get("kind") == "Isomorphism", "unknown kind")
    _require(all(len(ga[i]) == len(ta[i]) for i in range(1, g.n)), "shapes of players 2..n differ")
    # enumerate every partial isomorphism ourselves; the listed ones must be exactly these
    found = []
    total = 1
    for i in range(1, g.n):
        for k in range(2, len(ga[i]) + 1):
            total *= k
    _require(total <= 2_000_000, "too many bijections to enumerate")
    for perms in itertools.product(*(itertools.permutations(ta[i]) for i in range(1, g.n))):
        maps = [dict(zip(ga[i], perms[i - 1])) for i in range(1, g.n)]
        fits = []
        for i in range(1, g.n):
            fit = _affine([(g.payoffs[s][i], g.payoffs[(psi[s[0]],) + tuple(maps[j - 1][s[j]]
                                                                           for j in range(1, g.n))][i])
                           for s in src])
            if fit is None:
                break
            fits.append(fit)
        else:
            found.append(maps)
    listed = []
    for iso in cert.get("isos", []):
        listed.append([{_idx(g, i, k): _idx(g, i, v) for k, v in iso["maps"][i - 1].items()} for i in range(1, g.n)])
    key = lambda ms: tuple(tuple(sorted(mp.items())) for mp in ms)  # noqa: E731
    _require(found, "no partial isomorphism exists")
    _require(sorted(map(key, listed)) == sorted(map(key, found)), "listed isomorphisms are not all of them")
    for maps in found:
        for s in src:
            t = (psi[s[0]],) + tuple(maps[j - 1][s[j]] for j in range(1, g.n))
            _require(_geq(g.payoffs[t], g.payoffs[s], everyone), "some isomorphism is not Pareto improving")
        t = (psi[w[0]],) + tuple(maps[j - 1][w[j]] for j in range(1, g.n))
        _require(_gt(g.payoffs[t], g.payoffs[w], everyone), "witness is not strictly improved under every isomorphism")


def verify_certificate(cert) -> Report:
    """Check a certificate dict; never raises on bad input."""
    try:
        _require(isinstance(cert, dict) and cert.get("format") == FORMAT, "not a spikit certificate")
        what = cert.get("certificate")
        g = _game(cert, "default")
        if what == "spi":
            _check_pair(cert, g, _game(cert, "candidate"))
        elif what == "disarm":
            _check_pair(cert, g, _removed_game(g, cert.get("remove")))
        elif what == "token":
            token = _game(cert, "candidate")
            _check_token(cert, g, token)
            _check_pair(cert, g, token)
        elif what == "omni":
            _check_omni(cert, g)
        elif what == "uni":
            _check_uni(cert, g)
        else:
            raise Reject(f"unknown certificate type {what!r}")
    except Reject as e:
        return Report(False, [str(e)])
    except (GameFormatError, SpikitError, KeyError, TypeError, ValueError, IndexError) as e:
        return Report(False, [f"malformed certificate: {e}"])
    return Report(True)


__all__ = ["FORMAT", "fingerprint", "to_certificate", "verify_certificate", "Report",
           "spi_to_dict", "token_to_dict", "omni_to_dict", "uni_to_dict"]
