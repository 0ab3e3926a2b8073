import copy
import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spikit.disarm import verify_disarmament
from spikit.game import CorrelatedProfile, Disarmament, SpikitError, game_from_dict
from spikit.remap import omni_exists, omni_optimize, uni_search
from spikit.spi import is_spi
from spikit.tokens import CORRELATED, PURE, correlated_iso_token_spi, pure_iso_token_spi, simple_token_spi
from spikit.verify import FORMAT, fingerprint, to_certificate, verify_certificate

from .builders import prisoners_dilemma, shifted_block
from .strategies import games

F_ROWS = ["(l,f)", "(m,f)", "(h,f)"]
S_COLS = ["(l,s)", "(m,s)", "(h,s)"]


def refresh(cert):
    """Recompute fingerprints so that a tampered payoff reaches the logical checks."""
    for k, d in cert["games"].items():
        cert["fingerprints"][k] = fingerprint(game_from_dict(d))
    return cert


def roundtrip(cert):
    return json.loads(json.dumps(cert))


def accepted(cert):
    report = verify_certificate(roundtrip(cert))
    assert report.ok, report.errors
    return True


def rejected(cert, fragment):
    report = verify_certificate(roundtrip(cert))
    assert not report.ok
    assert any(fragment in e for e in report.errors), report.errors


@pytest.fixture(scope="module")
def certificates():
    from spikit.generators import gen_paper_game
    seaway, token = gen_paper_game("seaway"), gen_paper_game("seaway_token")
    neg, tempt = gen_paper_game("negotiation"), gen_paper_game("temptation")
    d = Disarmament.of([{neg.action_index(0, x) for x in F_ROWS}, {neg.action_index(1, x) for x in S_COLS}])
    return {
        "spi": to_certificate(is_spi(seaway, token)),
        "disarm": to_certificate(verify_disarmament(neg, d)),
        "token_correlated": to_certificate(correlated_iso_token_spi(seaway)),
        "token_pure": to_certificate(pure_iso_token_spi(shifted_block())),
        "token_simple": to_certificate(simple_token_spi(prisoners_dilemma(), PURE)),
        "omni_pure": to_certificate(omni_exists(seaway, PURE)),
        "omni_correlated": to_certificate(omni_optimize(seaway, CORRELATED).spi),
        "uni": to_certificate(uni_search(tempt)[0][1]),
    }


def test_all_accepted(certificates):
    for name, cert in certificates.items():
        assert cert["format"] == FORMAT
        assert accepted(cert), name


def test_types(certificates):
    assert {c["certificate"] for c in certificates.values()} == {"spi", "disarm", "token", "omni", "uni"}
    assert certificates["token_pure"]["mode"] == "pure"


def test_payoff_edit_breaks_fingerprint(certificates):
    for cert in certificates.values():
        bad = copy.deepcopy(cert)
        bad["games"]["default"]["payoffs"][0][0][0] = "12345"
        rejected(bad, "fingerprint mismatch")


def test_iso_coefficient_edit(certificates):
    bad = copy.deepcopy(certificates["spi"])
    bad["iso"]["m"] = ["1", "1"]
    rejected(bad, "payoff equation fails")


def test_negative_coefficient(certificates):
    bad = copy.deepcopy(certificates["spi"])
    bad["iso"]["m"][0] = "-3/5"
    rejected(bad, "positive affine")


def test_truncated_trace(certificates):
    bad = copy.deepcopy(certificates["spi"])
    bad["source_trace"] = bad["source_trace"][:-1]
    rejected(bad, "still dominated")


def test_bogus_trace_step(certificates):
    bad = copy.deepcopy(certificates["spi"])
    step = bad["source_trace"][0]
    bad["source_trace"][0] = [step[0], step[2], step[1]]
    rejected(bad, "does not strictly dominate")


def test_worse_candidate_payoff(certificates):
    bad = copy.deepcopy(certificates["spi"])
    bad["games"]["candidate"]["payoffs"][0][0] = ["1", "1"]
    rejected(refresh(bad), "")


def test_token_realization_tampered(certificates):
    bad = copy.deepcopy(certificates["token_correlated"])
    bad["realizations"] = bad["realizations"][1:]
    rejected(bad, "needs a realization")
    bad = copy.deepcopy(certificates["token_pure"])
    first = bad["realizations"][0]["profile"]
    first[0][1] = "1/2"
    first.append([first[0][0], "1/2"])
    rejected(bad, "single outcomes")


def test_disarm_removal_changed(certificates):
    bad = copy.deepcopy(certificates["disarm"])
    bad["remove"][1] = []
    rejected(bad, "")
    bad["remove"][0] = list(bad["games"]["default"]["actions"][0])
    rejected(bad, "removes every action")


def test_omni_identity(certificates):
    bad = copy.deepcopy(certificates["omni_pure"])
    for r in bad["realizations"]:
        r["profile"] = [[r["outcome"], 1]]
    rejected(bad, "no outcome is strictly improved")


def test_omni_worsening(certificates):
    bad = copy.deepcopy(certificates["omni_pure"])
    bad["realizations"][0]["profile"] = [[["FN", "FN"], 1]]
    rejected(bad, "worsens")


def test_uni_missing_iso(certificates):
    cert = certificates["uni"]
    assert cert["psi1"] == {"T1": "R1", "T2": "R2"}
    bad = copy.deepcopy(cert)
    bad["isos"] = []
    rejected(bad, "not all of them")


def test_uni_kind_swap(certificates):
    bad = copy.deepcopy(certificates["uni"])
    bad["kind"] = "Simple"
    rejected(bad, "constant psi1")


def test_uni_wrong_psi(certificates):
    bad = copy.deepcopy(certificates["uni"])
    bad["psi1"] = {"T1": "R2", "T2": "R1"}
    rejected(bad, "")


def test_not_a_certificate():
    assert not verify_certificate({"format": "other"}).ok
    assert not verify_certificate([]).ok
    assert not verify_certificate({"format": FORMAT, "certificate": "spi"}).ok


def test_unknown_object():
    with pytest.raises(SpikitError):
        to_certificate(42)


json_values = st.recursive(st.none() | st.booleans() | st.integers(-3, 3) | st.text(max_size=3),
                           lambda inner: st.lists(inner, max_size=3) | st.dictionaries(st.text(max_size=3), inner,
                                                                                      max_size=3),
                           max_leaves=12)


@given(json_values)
def test_garbage_never_raises(value):
    assert not verify_certificate(value).ok


@given(st.sampled_from(["spi", "disarm", "token_correlated", "omni_pure", "uni"]), st.data())
def test_random_field_deletion_is_reported(certificates, name, data):
    bad = copy.deepcopy(certificates[name])
    key = data.draw(st.sampled_from(sorted(k for k in bad if k not in ("format", "certificate"))))
    del bad[key]
    report = verify_certificate(bad)
    # notes are informational, a missing mode reads as the weaker correlated
    # claim, and an empty trace or absent player list is the default anyway
    if report.ok:
        assert key in ("notes", "mode") or certificates[name][key] in ([], None)


@settings(max_examples=40)
@given(games(players=(2, 2), actions=(1, 3), lo=-3, hi=3))
def test_everything_emitted_verifies(g):
    objs = [simple_token_spi(g, PURE), simple_token_spi(g, CORRELATED), pure_iso_token_spi(g),
            correlated_iso_token_spi(g), omni_exists(g, PURE), omni_exists(g, CORRELATED)]
    if g.shape[0] <= 3:
        objs += [c for _, c in uni_search(g)]
    for obj in objs:
        if obj is not None:
            assert accepted(to_certificate(obj))


def test_seaway_token_with_announced_realizations(seaway, seaway_token):
    from spikit.tokens import verify_token_spi
    o = lambda *x: tuple(seaway.action_index(i, y) for i, y in enumerate(x))  # noqa: E731
    reals = {
        (0, 0): CorrelatedProfile({o("FN", "FA"): F(2, 5), o("FA", "FN"): F(2, 5), o("PA", "PA"): F(1, 5)}),
        (0, 1): CorrelatedProfile({o("FN", "FA"): F(1, 3), o("FA", "FN"): F(2, 3)}),
        (1, 0): CorrelatedProfile({o("FN", "FA"): F(2, 3), o("FA", "FN"): F(1, 3)}),
        (1, 1): CorrelatedProfile({o("PA", "PA"): F(1, 2), o("PN", "PN"): F(1, 2)}),
    }
    cert = to_certificate(verify_token_spi(seaway, seaway_token, reals))
    assert cert["certificate"] == "token" and accepted(cert)
