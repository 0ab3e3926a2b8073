"""Command-line entry point: ``spikit <command> ...``.

Exit codes: 0 positive decision or plain output, 1 negative decision
("no SPI", rejected certificate), 2 input errors, 3 size-cap refusals.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import oracles
from .disarm import search_disarmament, verify_disarmament
from .game import (CorrelatedProfile, Disarmament, Game, GameFormatError, SizeCapExceeded, SpikitError, format_rational,
                   game_from_dict, game_to_dict, loads_json, payoff_to_json, rational)
from .generators import (NAMED_GAMES, VectorRemapInstance, cycle_graph, gen_gpr_from_graph, gen_paper_game,
                         random_game, wheel_graph)
from .iso import (exists_coeff10_iso, exists_pareto_improving_iso, find_isomorphisms, find_partial_isomorphisms,
                  find_subgame_isomorphisms)
from .reduction import reduce
from .remap import omni_exists, omni_optimize, psi_labels, uni_assess, uni_search
from .results import Attained, NoSpi
from .spi import is_spi
from .tokens import (CORRELATED, PURE, characterize_2p, correlated_iso_token_spi, gpr_decide, optimize_token,
                     pure_iso_token_spi, simple_token_spi, verify_token_spi)
from .verify import to_certificate, verify_certificate

OK, NO, BAD_INPUT, CAPPED = 0, 1, 2, 3


class _Done(Exception):
    def __init__(self, payload, code=OK):
        self.payload = payload
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise GameFormatError(f"cannot read {path}: {e.strerror}") from None


def _load_json(path: str):
    return loads_json(_read(path))


def _load_game(path: str) -> Game:
    return game_from_dict(_load_json(path))


def _iso_json(g: Game, h: Game, iso) -> dict:
    return {"maps": iso.labels(g, h), "m": [None if x is None else format_rational(x) for x in iso.m],
            "b": [None if x is None else format_rational(x) for x in iso.b], "scope": iso.scope}


def _split_labels(text: str) -> list[str]:
    """Split on commas that are not inside parentheses, so '(l,f),(m,f)' gives two labels."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    out.append("".join(cur))
    return out


def _parse_remove(g: Game, spec: str) -> Disarmament:
    """'1:FA,FN;2:' -> per-player removal sets (labels, 1-based players)."""
    removed = [set() for _ in range(g.n)]
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        player, sep, labels = part.partition(":")
        if not sep or not player.strip().isdigit():
            raise GameFormatError(f"bad --remove entry {part!r}; expected 'PLAYER:LABEL,LABEL'")
        i = int(player) - 1
        if not 0 <= i < g.n:
            raise GameFormatError(f"--remove names player {player}, game has {g.n}")
        for lab in filter(None, (x.strip() for x in _split_labels(labels))):
            removed[i].add(g.action_index(i, lab))
    return Disarmament.of(removed)


def _weights(path: str | None):
    if path is None:
        return None
    data = _load_json(path)
    if isinstance(data, dict):
        try:
            data = [data[k] for k in sorted(data, key=int)]
        except ValueError:
            raise GameFormatError("weight keys must be indices") from None
    if not isinstance(data, list):
        raise GameFormatError("weights must be an array or an index-keyed object")
    return [[rational(x) for x in w] for w in data]


def _rotate(g: Game, player: int) -> Game:
    """Reorder players so that ``player`` comes first, keeping the others' relative order."""
    if player == 0:
        return g
    order = [player] + [j for j in range(g.n) if j != player]
    return Game.build([g.actions[j] for j in order],
                      lambda a: [g.payoffs[tuple(a[order.index(j)] for j in range(g.n))][j] for j in order],
                      [g.players[j] for j in order])


def _optimum(result, describe):
    if isinstance(result, NoSpi):
        raise _Done({"spi": False, "reason": "no SPI exists"}, NO)
    if isinstance(result, Attained):
        return {"spi": True, "optimum": "attained", "value": format_rational(result.value),
                "certificate": to_certificate(result.spi)}
    example = result.family(Fraction(1, 4))
    return {"spi": True, "optimum": "supremum", "value": format_rational(result.value),
            "family": describe, "example_eps": "1/4", "example": to_certificate(example)}


# --- command handlers ---------------------------------------------------------

def cmd_reduce(args):
    g = _load_game(args.game)
    red, trace = reduce(g)
    return {"game": game_to_dict(red), "trace": [[i + 1, a, b] for i, a, b in trace]}


def cmd_iso(args):
    g, h = _load_game(args.a), _load_game(args.b)
    if args.coeff10:
        found = exists_coeff10_iso(g, h)
        raise _Done({"coeff10_isomorphic": found}, OK if found else NO)
    if args.pareto:
        hit = exists_pareto_improving_iso(g, h)
        if hit is None:
            raise _Done({"pareto_improving": False}, NO)
        iso, strict = hit
        return {"pareto_improving": True, "strict": strict, "isomorphism": _iso_json(g, h, iso)}
    if args.subgame:
        found = find_subgame_isomorphisms(g, h, args.subgame)
        out = [{"subsets": [[h.actions[i][k] for k in s] for i, s in enumerate(subsets)],
                "isomorphism": {"maps": iso.labels(g, h),
                                "m": [format_rational(x) for x in iso.m], "b": [format_rational(x) for x in iso.b]}}
               for subsets, iso in found]
        raise _Done({"subgames": out}, OK if out else NO)
    if args.partial:
        psi = _load_json(args.partial)
        if not isinstance(psi, dict):
            raise GameFormatError("psi file must map player-1 labels of the first game to labels of the second")
        mapping = {g.action_index(0, k): h.action_index(0, v) for k, v in psi.items()}
        found = find_partial_isomorphisms(g, h, mapping)
        raise _Done({"isomorphisms": [_iso_json(g, h, iso) for iso in found]}, OK if found else NO)
    found = find_isomorphisms(g, h)
    raise _Done({"isomorphisms": [_iso_json(g, h, iso) for iso in found]}, OK if found else NO)


def _decision(cert):
    if cert is None:
        raise _Done({"spi": False, "reason": "not an SPI"}, NO)
    return {"spi": True, "certificate": to_certificate(cert)}


def _players(args):
    return (0,) if getattr(args, "safe_u1", False) else None


def cmd_spi(args):
    g, h = _load_game(args.default), _load_game(args.candidate)
    players = None if args.players is None else tuple(int(p) - 1 for p in args.players.split(","))
    return _decision(is_spi(g, h, players))


def cmd_disarm(args):
    g = _load_game(args.game)
    if args.action == "verify":
        if args.remove is None:
            raise GameFormatError("disarm verify needs --remove")
        return _decision(verify_disarmament(g, _parse_remove(g, args.remove), _players(args)))
    uni = None if args.unilateral is None else args.unilateral - 1
    found = search_disarmament(g, uni, args.max_subsets, _players(args))
    out = [{"remove": d.labels(g), "certificate": to_certificate(c)} for d, c in found]
    raise _Done({"disarmaments": out}, OK if out else NO)


def cmd_token(args):
    if args.kind == "gpr":
        data = _load_json(args.game)
        if not isinstance(data, dict) or "S" not in data or "T" not in data:
            raise GameFormatError("instance must be an object with arrays 'S' and 'T'")
        sol = gpr_decide(VectorRemapInstance.of(data["S"], data["T"]))
        if sol is None:
            raise _Done({"remap": False}, NO)
        return {"remap": True, "m": payoff_to_json(sol.m), "b": payoff_to_json(sol.b),
                "mapping": [[payoff_to_json(s), payoff_to_json(t)] for s, t in sol.mapping.items()]}
    g = _load_game(args.game)
    if args.kind == "check":
        if not args.token or not args.realizations:
            raise GameFormatError("token check needs --token and --realizations")
        token = _load_game(args.token)
        reals = {}
        for entry in _load_json(args.realizations):
            a = tuple(token.action_index(i, x) for i, x in enumerate(entry["token_outcome"]))
            reals[a] = CorrelatedProfile({tuple(g.action_index(i, x) for i, x in enumerate(labels)): p
                                          for labels, p in entry["profile"]})
        return _decision(verify_token_spi(g, token, reals))
    if args.kind == "characterize":
        case, yes = characterize_2p(g)
        raise _Done({"case": case, "spi": yes}, OK if yes else NO)
    if args.optimize:
        if args.kind == "simple":
            raise GameFormatError("--optimize applies to pure and correlated token SPIs")
        mode = PURE if args.kind == "pure" else CORRELATED
        return _optimum(optimize_token(g, mode, _weights(args.optimize)),
                        "(1-2e)*optimum + e*strict remap + e*identity, 0 < e < 1/2")
    if args.kind == "simple":
        ts = simple_token_spi(g, args.mode)
    elif args.kind == "pure":
        ts = pure_iso_token_spi(g)
    else:
        ts = correlated_iso_token_spi(g)
    if ts is None:
        raise _Done({"spi": False, "reason": "no token SPI of this kind"}, NO)
    out = {"spi": True, "certificate": to_certificate(ts)}
    if ts.remap is not None:
        out["m"], out["b"] = payoff_to_json(ts.remap.m), payoff_to_json(ts.remap.b)
    return out


def cmd_remap(args):
    g = _load_game(args.game)
    if args.kind == "omni":
        if args.optimize:
            return _optimum(omni_optimize(g, args.mode, _weights(args.optimize)),
                            "(1-e)*optimum + e*strict remap, 0 < e < 1")
        om = omni_exists(g, args.mode)
        if om is None:
            raise _Done({"spi": False, "reason": "every reduced outcome is Pareto optimal"}, NO)
        return {"spi": True, "certificate": to_certificate(om)}
    if args.player is not None:
        g = _rotate(g, args.player - 1)
    if args.psi:
        psi = _load_json(args.psi)
        if not isinstance(psi, dict):
            raise GameFormatError("psi file must map reduced player-1 labels to action labels")
        cert, notes = uni_assess(g, psi)
        if cert is None:
            raise _Done({"spi": False, "reason": "not an SPI", "notes": notes}, NO)
        return {"spi": True, "certificate": to_certificate(cert)}
    found = uni_search(g, args.max_remaps)
    out = [{"psi1": psi_labels(g, p), "certificate": to_certificate(c)} for p, c in found]
    raise _Done({"remaps": out}, OK if out else NO)


def _graph(spec: str):
    kind, _, arg = spec.partition(":")
    if kind == "cycle":
        return cycle_graph(int(arg))
    if kind == "wheel":
        return wheel_graph(int(arg))
    if kind == "edges":
        edges = [tuple(int(x) for x in e.split("-")) for e in arg.split(",") if e]
        k = max((max(e) for e in edges), default=-1) + 1
        adj = [[0] * k for _ in range(k)]
        for i, j in edges:
            adj[i][j] = adj[j][i] = 1
        return adj
    raise GameFormatError(f"bad graph {spec!r}; use cycle:N, wheel:N or edges:0-1,1-2")


def cmd_gen(args):
    if args.name in NAMED_GAMES:
        return game_to_dict(gen_paper_game(args.name))
    if args.name == "random":
        return game_to_dict(random_game(args.players, args.actions, (args.low, args.high), args.seed))
    if args.name == "gpr":
        inst = gen_gpr_from_graph(_graph(args.graph))
        return {"S": [payoff_to_json(v) for v in inst.S], "T": [payoff_to_json(v) for v in inst.T]}
    if args.name == "uni_remap_gadget":
        from .generators import uni_remap_gadget
        gad = uni_remap_gadget(_graph(args.graph), _graph(args.graph2 or args.graph))
        return game_to_dict(gad.game)
    raise GameFormatError(f"unknown generator {args.name!r}")


def cmd_oracle(args):
    if args.name == "coloring":
        yes = oracles.brute_coloring(_graph(args.a))
    elif args.name == "is-spi":
        yes = oracles.brute_is_spi(_load_game(args.a), _load_game(args.b))
    elif args.name == "pure-token":
        yes = oracles.brute_pure_token(_load_game(args.a))
    elif args.name == "omni":
        g = _load_game(args.a)
        yes = oracles.brute_omni_pure(g) if args.mode == PURE else oracles.brute_omni_correlated(g)
    else:
        raise GameFormatError(f"unknown oracle {args.name!r}")
    raise _Done({"answer": yes}, OK if yes else NO)


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spikit", description="Safe Pareto improvement toolkit for normal-form games.")
    p.add_argument("--verify", metavar="CERT", help="check a certificate file and exit")
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    p.add_argument("--lp-debug", action="store_true", help="log simplex tableaus to stderr")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("reduce", help="iterated elimination of strictly dominated actions")
    s.add_argument("game")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("iso", help="isomorphisms between two games")
    s.add_argument("a")
    s.add_argument("b")
    grp = s.add_mutually_exclusive_group()
    grp.add_argument("--pareto", action="store_true")
    grp.add_argument("--coeff10", action="store_true")
    grp.add_argument("--subgame", choices=["any", "pareto", "coeff10"])
    grp.add_argument("--partial", metavar="PSI")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("spi", help="decide whether a candidate game is an SPI")
    s.add_argument("action", choices=["check"])
    s.add_argument("default")
    s.add_argument("candidate")
    s.add_argument("--players", help="comma-separated 1-based players whose improvement counts")
    s.set_defaults(func=cmd_spi)

    s = sub.add_parser("disarm", help="disarmament SPIs")
    s.add_argument("action", choices=["verify", "search"])
    s.add_argument("game")
    s.add_argument("--remove", help="removed labels, e.g. '1:FA,FN;2:'")
    s.add_argument("--unilateral", type=int, metavar="PLAYER")
    s.add_argument("--max-subsets", type=int)
    s.add_argument("--safe-u1", action="store_true", help="require improvement for player 1 only")
    s.set_defaults(func=cmd_disarm)

    s = sub.add_parser("token", help="token-game SPIs")
    s.add_argument("kind", choices=["simple", "pure", "correlated", "gpr", "check", "characterize"])
    s.add_argument("game", help="game file (or GPR instance for 'gpr')")
    s.add_argument("--mode", choices=[PURE, CORRELATED], default=PURE, help="realization mode for 'simple'")
    s.add_argument("--optimize", metavar="WEIGHTS")
    s.add_argument("--token", help="token game file for 'check'")
    s.add_argument("--realizations", help="realization file for 'check'")
    s.set_defaults(func=cmd_token)

    s = sub.add_parser("remap", help="default-remapping SPIs")
    s.add_argument("kind", choices=["omni", "uni"])
    s.add_argument("game")
    s.add_argument("--mode", choices=[PURE, CORRELATED], default=PURE)
    s.add_argument("--optimize", metavar="WEIGHTS")
    s.add_argument("--psi", metavar="PSI")
    s.add_argument("--player", type=int, help="committing player (1-based); the game is rotated to put it first")
    s.add_argument("--max-remaps", type=int)
    s.set_defaults(func=cmd_remap)

    s = sub.add_parser("gen", help="generate games and instances")
    s.add_argument("name", choices=list(NAMED_GAMES) + ["random", "gpr", "uni_remap_gadget"])
    s.add_argument("--players", type=int, default=2)
    s.add_argument("--actions", type=int, default=3)
    s.add_argument("--low", type=int, default=-5)
    s.add_argument("--high", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--graph", default="cycle:5")
    s.add_argument("--graph2")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("oracle", help="brute-force reference answers")
    s.add_argument("name", choices=["is-spi", "pure-token", "coloring", "omni"])
    s.add_argument("a", help="game file, or graph spec for 'coloring'")
    s.add_argument("b", nargs="?")
    s.add_argument("--mode", choices=[PURE, CORRELATED], default=PURE)
    s.set_defaults(func=cmd_oracle)
    return p


# --- output -------------------------------------------------------------------

def _table(g: dict) -> str:
    acts = g["actions"]
    if len(acts) != 2:
        return json.dumps(g, indent=2)
    cells = [["", *acts[1]]]
    for r, row in zip(acts[0], g["payoffs"]):
        cells.append([r, *(", ".join(str(x) for x in v) for v in row)])
    width = [max(len(str(row[k])) for row in cells) for k in range(len(cells[0]))]
    return "\n".join(" | ".join(str(c).rjust(w) for c, w in zip(row, width)) for row in cells)


def _render(payload, pretty: bool) -> str:
    if not pretty:
        return json.dumps(payload)
    if isinstance(payload, dict) and "actions" in payload and "payoffs" in payload:
        return _table(payload)
    if isinstance(payload, dict) and isinstance(payload.get("game"), dict):
        rest = {k: v for k, v in payload.items() if k != "game"}
        return _table(payload["game"]) + "\n" + json.dumps(rest, indent=2)
    return json.dumps(payload, indent=2)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.lp_debug:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        lp_log = logging.getLogger("spikit.lp")
        lp_log.addHandler(handler)
        lp_log.setLevel(logging.DEBUG)
    try:
        if args.verify:
            cert = _load_json(args.verify)
            if isinstance(cert, dict) and "format" not in cert:
                # accept the command output that wraps a certificate
                cert = cert.get("certificate", cert.get("example", cert))
            report = verify_certificate(cert)
            payload, code = {"valid": report.ok, "errors": report.errors}, OK if report.ok else NO
        elif args.command is None:
            parser.print_usage(sys.stderr)
            return BAD_INPUT
        else:
            payload, code = args.func(args), OK
    except _Done as d:
        payload, code = d.payload, d.code
    except SizeCapExceeded as e:
        print(f"spikit: refused: {e}", file=sys.stderr)
        return CAPPED
    except GameFormatError as e:
        print(f"spikit: input error: {e}", file=sys.stderr)
        return BAD_INPUT
    except SpikitError as e:
        print(f"spikit: error: {e}", file=sys.stderr)
        return BAD_INPUT
    print(_render(payload, args.pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())
