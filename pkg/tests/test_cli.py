import io
import json
import subprocess
import sys

import pytest

from spikit.cli import BAD_INPUT, CAPPED, NO, OK, main
from spikit.game import game_to_dict
from spikit.generators import gen_paper_game

from .builders import matching_pennies


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    paths = {n: write(f"{n}.json", game_to_dict(gen_paper_game(n)))
             for n in ("seaway", "seaway_token", "negotiation", "temptation", "why_iso")}
    paths["pennies"] = write("pennies.json", game_to_dict(matching_pennies()))
    paths["write"] = write
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    try:
        return code, json.loads(out), err
    except json.JSONDecodeError:
        return code, out, err


def test_reduce(capsys, files):
    code, out, _ = run(capsys, "reduce", files["seaway"])
    assert code == OK
    assert out["game"]["actions"] == [["PA", "PN"], ["PA", "PN"]]
    assert len(out["trace"]) == 4


def test_pretty_table(capsys, files):
    code, out, _ = run(capsys, "--pretty", "gen", "seaway")
    assert code == OK and "-100, -100" in out and out.splitlines()[0].split("|")[1].strip() == "FA"


def test_spi_check(capsys, files):
    code, out, _ = run(capsys, "spi", "check", files["seaway"], files["seaway_token"])
    assert code == OK and out["certificate"]["iso"]["m"] == ["3/5", "3/5"]
    code, out, _ = run(capsys, "spi", "check", files["seaway"], files["seaway"])
    assert code == NO and out["spi"] is False


def test_iso_modes(capsys, files):
    assert run(capsys, "iso", files["seaway"], files["seaway"])[0] == OK
    assert run(capsys, "iso", files["seaway"], files["negotiation"])[0] == NO
    assert run(capsys, "iso", "--coeff10", files["negotiation"], files["negotiation"])[0] == OK
    code, out, _ = run(capsys, "iso", "--subgame", "coeff10", files["seaway_token"], files["seaway_token"])
    assert code == OK and out["subgames"][0]["isomorphism"]["maps"][0] == {"Token PA": "Token PA",
                                                                           "Token PN": "Token PN"}
    assert run(capsys, "iso", "--subgame", "any", files["seaway_token"], files["negotiation"])[0] == NO


def test_iso_partial(capsys, files):
    ident = files["write"]("ident.json", {x: x for x in ("T1", "T2", "R1", "R2")})
    code, out, _ = run(capsys, "iso", "--partial", ident, files["temptation"], files["temptation"])
    ident_cols = {"C1": "C1", "C2": "C2", "F1": "F1", "F2": "F2"}
    assert code == OK and ident_cols in [i["maps"][1] for i in out["isomorphisms"]]
    short = files["write"]("short.json", {"T1": "T1"})
    assert run(capsys, "iso", "--partial", short, files["temptation"], files["temptation"])[0] == BAD_INPUT


def test_disarm_verify_and_search(capsys, files):
    code, out, _ = run(capsys, "disarm", "verify", files["negotiation"],
                       "--remove", "1:(l,f),(m,f),(h,f);2:(l,s),(m,s),(h,s)")
    assert code == OK and out["certificate"]["certificate"] == "disarm"
    code, _, _ = run(capsys, "disarm", "verify", files["negotiation"], "--remove", "1:(l,f),(m,f),(h,f)")
    assert code == NO
    code, _, err = run(capsys, "disarm", "search", files["negotiation"], "--max-subsets", "10")
    assert code == CAPPED and "refused" in err


def test_disarm_bad_remove(capsys, files):
    assert run(capsys, "disarm", "verify", files["seaway"], "--remove", "3:FA")[0] == BAD_INPUT
    assert run(capsys, "disarm", "verify", files["seaway"], "--remove", "1:XX")[0] == BAD_INPUT
    assert run(capsys, "disarm", "verify", files["seaway"])[0] == BAD_INPUT


def test_token_commands(capsys, files):
    code, out, _ = run(capsys, "token", "correlated", files["seaway"])
    assert code == OK and out["certificate"]["certificate"] == "token"
    assert run(capsys, "token", "pure", files["seaway"])[0] == NO
    assert run(capsys, "token", "simple", files["seaway"], "--mode", "correlated")[0] == NO
    code, out, _ = run(capsys, "token", "characterize", files["seaway"])
    assert code == OK and out == {"case": "C1", "spi": True}
    code, out, _ = run(capsys, "token", "correlated", files["seaway"], "--optimize",
                       files["write"]("w.json", [[1, 1]] * 4))
    assert code == OK and out["optimum"] == "attained"


def test_token_check(capsys, files):
    reals = [
        {"token_outcome": ["Token PA", "Token PA"],
         "profile": [[["FN", "FA"], "2/5"], [["FA", "FN"], "2/5"], [["PA", "PA"], "1/5"]]},
        {"token_outcome": ["Token PA", "Token PN"], "profile": [[["FN", "FA"], "1/3"], [["FA", "FN"], "2/3"]]},
        {"token_outcome": ["Token PN", "Token PA"], "profile": [[["FN", "FA"], "2/3"], [["FA", "FN"], "1/3"]]},
        {"token_outcome": ["Token PN", "Token PN"], "profile": [[["PA", "PA"], 0.5], [["PN", "PN"], 0.5]]},
    ]
    path = files["write"]("reals.json", reals)
    code, out, _ = run(capsys, "token", "check", files["seaway"], "--token", files["seaway_token"],
                       "--realizations", path)
    assert code == OK
    cert = files["write"]("cert.json", out)
    assert run(capsys, "--verify", cert)[1]["valid"] is True


def test_gpr(capsys, files):
    code, inst, _ = run(capsys, "gen", "gpr", "--graph", "cycle:5")
    path = files["write"]("gpr.json", inst)
    assert run(capsys, "token", "gpr", path)[0] == OK
    _, inst, _ = run(capsys, "gen", "gpr", "--graph", "wheel:6")
    assert run(capsys, "token", "gpr", files["write"]("w6.json", inst))[0] == NO


def test_remap(capsys, files):
    code, out, _ = run(capsys, "remap", "omni", files["seaway"])
    assert code == OK
    assert run(capsys, "remap", "omni", files["pennies"], "--mode", "correlated")[0] == NO
    code, out, _ = run(capsys, "remap", "omni", files["seaway"], "--mode", "correlated", "--optimize",
                       files["write"]("neg.json", [[-1, -1]] * 4))
    assert code == OK and out["optimum"] == "supremum" and out["example_eps"] == "1/4"
    code, out, _ = run(capsys, "remap", "uni", files["temptation"])
    assert code == OK and [r["psi1"] for r in out["remaps"]] == [{"T1": "R1", "T2": "R2"}]
    psi = files["write"]("psi.json", {"r3": "r1", "r4": "r2"})
    assert run(capsys, "remap", "uni", files["why_iso"], "--psi", psi)[0] == NO
    assert run(capsys, "remap", "uni", files["temptation"], "--max-remaps", "2")[0] == CAPPED


def test_remap_uni_other_player(capsys, files):
    # the committing side is the column player: answering F to a commitment to R pays (2,2) over (1,1)
    g = {"players": ["A", "B"], "actions": [["C", "F"], ["T", "R"]],
         "payoffs": [[[1, 1], [0, 0]], [[0, 5], [2, 2]]]}
    path = files["write"]("cols.json", g)
    code, out, _ = run(capsys, "remap", "uni", path, "--player", "2")
    assert code == OK and [r["psi1"] for r in out["remaps"]] == [{"T": "R"}]
    assert run(capsys, "remap", "uni", path)[0] == NO


def test_oracles(capsys, files):
    assert run(capsys, "oracle", "coloring", "cycle:5")[0] == OK
    assert run(capsys, "oracle", "coloring", "wheel:6")[0] == NO
    assert run(capsys, "oracle", "is-spi", files["seaway"], files["seaway_token"])[0] == OK
    assert run(capsys, "oracle", "pure-token", files["seaway"])[0] == NO
    assert run(capsys, "oracle", "omni", files["seaway"], "--mode", "correlated")[0] == OK


def test_verify_round_trip_and_tamper(capsys, files):
    _, out, _ = run(capsys, "spi", "check", files["seaway"], files["seaway_token"])
    good = files["write"]("good.json", out)
    assert run(capsys, "--verify", good)[0] == OK
    out["certificate"]["games"]["default"]["payoffs"][1][1] = [-99, -100]
    code, report, _ = run(capsys, "--verify", files["write"]("bad.json", out))
    assert code == NO and "fingerprint mismatch" in report["errors"][0]


def test_bad_input(capsys, files):
    broken = files["write"]("broken.json", '{"players": ["a"], "actions": [[')
    code, _, err = run(capsys, "reduce", broken)
    assert code == BAD_INPUT and "input error" in err
    assert run(capsys, "reduce", "/nonexistent/game.json")[0] == BAD_INPUT
    assert main([]) == BAD_INPUT


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(game_to_dict(gen_paper_game("seaway")))))
    code, out, _ = run(capsys, "reduce", "-")
    assert code == OK and out["game"]["payoffs"][1][1] == [-10, -10]


def test_decimal_input_is_exact(capsys, files):
    g = {"players": ["A", "B"], "actions": [["x", "y"], ["z"]], "payoffs": [[[0.1, 0]], [[0.3, 0]]]}
    code, out, _ = run(capsys, "reduce", files["write"]("dec.json", g))
    assert out["game"]["payoffs"] == [[["3/10", 0]]]


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "spikit", "gen", "temptation"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["actions"][0][0] == "T1"


def test_lp_debug_flag(capsys, files):
    code = main(["--lp-debug", "token", "characterize", files["seaway"]])
    _, err = capsys.readouterr()
    assert code == OK and "spikit.lp" in err
