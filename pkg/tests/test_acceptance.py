"""End-to-end acceptance checks.

Each test prints one ``PASS``/``FAIL`` line and the lines are repeated in
the terminal summary (see conftest). Run as a script for the lines alone:
``python3 tests/test_acceptance.py``.
"""

import random
import time
from fractions import Fraction as F

from spikit.disarm import search_disarmament, verify_disarmament
from spikit.game import CorrelatedProfile, Disarmament, Game, remove_actions, subgame, weakly_dominates
from spikit.generators import (all_graphs, cycle_graph, gen_gpr_from_graph, gen_paper_game, pad_graph, random_game,
                               relabel, wheel_graph)
from spikit.iso import find_isomorphisms, find_partial_isomorphisms
from spikit.oracles import (brute_coloring, brute_is_spi, brute_omni_correlated, brute_omni_pure, brute_pure_token,
                            brute_reduce)
from spikit.reduction import reduce, surviving_actions
from spikit.remap import commitment_target, omni_exists, uni_assess, uni_verify
from spikit.spi import ISOMORPHISM, is_spi
from spikit.tokens import (CORRELATED, PURE, characterize_2p, correlated_iso_token_spi, gpr_decide,
                           pure_iso_token_spi, verify_token_spi)

RESULTS: list[str] = []


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def at(g, *labels):
    return tuple(g.action_index(i, x) for i, x in enumerate(labels))


def test_seaway_pipeline():
    t0 = time.perf_counter()
    g, token = gen_paper_game("seaway"), gen_paper_game("seaway_token")
    red, _ = reduce(g)
    quadrant = red.actions == (("PA", "PN"), ("PA", "PN"))
    found = correlated_iso_token_spi(g) is not None
    o = lambda *x: at(g, *x)  # noqa: E731
    reals = {
        at(token, "Token PA", "Token PA"):
            CorrelatedProfile({o("FN", "FA"): F(2, 5), o("FA", "FN"): F(2, 5), o("PA", "PA"): F(1, 5)}),
        at(token, "Token PA", "Token PN"): CorrelatedProfile({o("FN", "FA"): F(1, 3), o("FA", "FN"): F(2, 3)}),
        at(token, "Token PN", "Token PA"): CorrelatedProfile({o("FN", "FA"): F(2, 3), o("FA", "FN"): F(1, 3)}),
        at(token, "Token PN", "Token PN"): CorrelatedProfile({o("PA", "PA"): F(1, 2), o("PN", "PN"): F(1, 2)}),
    }
    cert = verify_token_spi(g, token, reals)
    coeffs = cert is not None and cert.iso.m == (F(3, 5), F(3, 5)) and cert.iso.b == (2, 2)
    elapsed = time.perf_counter() - t0
    ok = quadrant and found and coeffs and elapsed < 1
    report("seaway pipeline", ok,
           f"reduced={red.actions} token_found={found} m,b ok={coeffs} time={elapsed:.3f}s (<1s)")


def test_negotiation_unilateral_disarmament():
    # Expected to fail: see the decisions ledger. The removal leaves Bob with
    # (l,s) and (l,c) tied at (l,nf), so nothing reduces the game to 3x3.
    g = gen_paper_game("negotiation")
    rows = frozenset(g.action_index(0, x) for x in ("(l,f)", "(m,f)", "(h,f)"))
    d = Disarmament.of([rows, set()])
    cert = verify_disarmament(g, d)
    shape = reduce(remove_actions(g, d))[0].shape
    kind_ok = cert is not None and cert.kind == ISOMORPHISM and cert.iso.b == (1, 1)
    contained = any(dd == d for dd, _ in search_disarmament(g, unilateral=0))
    report("negotiation unilateral disarmament", kind_ok and contained,
           f"certificate={'yes' if cert else 'none'} reduced candidate shape={shape} in search={contained}")


def test_temptation_unilateral_remap():
    g, w = gen_paper_game("temptation"), gen_paper_game("why_iso")
    cert = uni_verify(g, {"T1": "R1", "T2": "R2"})
    unique = cert is not None and len(cert.isos) == 1 and (cert.isos[0].m[1], cert.isos[0].b[1]) == (1, 1)
    bad, _ = uni_assess(w, {"r3": "r1", "r4": "r2"})
    # recount the partial isomorphisms behind the rejection
    alive, _ = surviving_actions(w)
    image = [w.action_index(0, x) for x in ("r1", "r2")]
    target_alive = commitment_target(w, image)
    gr, tr = subgame(w, alive), subgame(w, target_alive)
    isos = find_partial_isomorphisms(gr, tr, [list(target_alive[0]).index(t) for t in image])
    improving = sorted(all(weakly_dominates(tr.payoffs[iso.image(a)], gr.payoffs[a]) for a in gr.outcomes())
                       for iso in isos)
    ok = unique and bad is None and len(isos) == 2 and improving == [False, True]
    report("temptation unilateral remap", ok,
           f"accepted={cert is not None} unique phi2={unique} counterexample rejected={bad is None} "
           f"partial isos={len(isos)} improving={improving}")


def test_correlated_token_matches_characterization():
    t0 = time.perf_counter()
    rng = random.Random(20261015)
    disagree, yes = 0, 0
    n = 500
    for k in range(n):
        g = random_game(2, (rng.randint(2, 4), rng.randint(2, 4)), (-5, 5), seed=rng.randrange(2 ** 32))
        lp = correlated_iso_token_spi(g) is not None
        _, ch = characterize_2p(g)
        disagree += lp != ch
        yes += lp
    elapsed = time.perf_counter() - t0
    report("correlated token vs two-player characterization", disagree == 0 and elapsed < 60,
           f"{n} games, {yes} with an SPI, {disagree} disagreements, {elapsed:.1f}s (<60s)")


def planted_game(rng):
    """2x2 core plus dominated rows and columns whose corner often improves on it.

    The corner columns lose to c0 everywhere, after which the corner rows lose
    to any core row, so the corner never survives yet supplies payoff vectors.
    """
    core = {(r, c): (rng.randint(0, 2), rng.randint(0, 2)) for r in range(2) for c in range(2)}
    if rng.random() < 0.5:
        m = [rng.randint(1, 2) for _ in range(2)]
        b = [rng.randint(0, 2) for _ in range(2)]
        corner = {k: tuple(m[i] * v[i] + b[i] for i in range(2)) for k, v in core.items()}
    else:
        corner = {k: (rng.randint(0, 4), rng.randint(0, 4)) for k in core}

    def pay(a):
        r, c = a
        if r < 2 and c < 2:
            return core[a]
        if r < 2 or c == 1:
            return (-10, -10)
        if c == 0:
            return (-10, 10)
        return corner[(r - 2, c - 2)]

    return Game.build([["r0", "r1", "D0", "D1"], ["c0", "c1", "E0", "E1"]], pay)


def test_pure_token_matches_enumeration():
    rng = random.Random(7)
    samples = []
    while len(samples) < 200:
        samples.append(random_game(2, (rng.randint(1, 3), rng.randint(1, 3)), (0, rng.choice((2, 3, 4))),
                                   seed=rng.randrange(2 ** 32)))
    samples += [planted_game(rng) for _ in range(100)]
    checked, yes, mismatch = 0, 0, 0
    for g in samples:
        if len(set(brute_reduce(g).payoffs.values())) > 6 or len(set(g.payoffs.values())) > 10:
            continue
        fast = pure_iso_token_spi(g) is not None
        mismatch += fast != brute_pure_token(g)
        yes += fast
        checked += 1
    report("pure token vs enumeration", mismatch == 0 and checked >= 200,
           f"{checked} games within size limits, {yes} with an SPI, {mismatch} mismatches")


def test_gpr_matches_three_coloring():
    t0 = time.perf_counter()
    graphs, mismatch = 0, 0
    for k in range(1, 6):
        for adj in all_graphs(k):
            mismatch += (gpr_decide(gen_gpr_from_graph(pad_graph(adj))) is not None) != brute_coloring(adj)
            graphs += 1
    c5 = gpr_decide(gen_gpr_from_graph(cycle_graph(5))) is not None
    w6 = gpr_decide(gen_gpr_from_graph(wheel_graph(6))) is None
    elapsed = time.perf_counter() - t0
    report("vector remapping vs 3-coloring", mismatch == 0 and c5 and w6 and elapsed < 120,
           f"{graphs} graphs, {mismatch} mismatches, C5 yes={c5}, W6 no={w6}, {elapsed:.1f}s (<120s)")


def test_elimination_order_independence():
    rng = random.Random(11)
    differing = 0
    for k in range(200):
        n = rng.choice((2, 3))
        g = random_game(n, [rng.randint(1, 4) for _ in range(n)], (-3, 3), seed=rng.randrange(2 ** 32))
        base = surviving_actions(g)[0]
        for seed in range(10):
            if surviving_actions(g, rng=random.Random(seed))[0] != base:
                differing += 1
                break
    report("elimination order independence", differing == 0, f"200 games x 10 orders, {differing} differing")


def test_isomorphic_pairs_share_one_affine_map():
    rng = random.Random(3)
    pairs, bad = 0, 0
    for k in range(120):
        n = rng.choice((2, 3))
        g = random_game(n, [rng.randint(1, 3) for _ in range(n)], (-4, 4), seed=rng.randrange(2 ** 32))
        perms = [rng.sample(range(s), s) for s in g.shape]
        affine = [(F(rng.randint(1, 5), rng.randint(1, 3)), F(rng.randint(-5, 5))) for _ in range(n)]
        h = relabel(g, perms, affine)
        isos = find_isomorphisms(g, h)
        if not isos or len({iso.affine for iso in isos}) != 1:
            bad += 1
        pairs += 1
    report("unique affine map per isomorphic pair", bad == 0, f"{pairs} pairs, {bad} with several maps or none")


def test_omni_matches_enumeration():
    rng = random.Random(5)
    n_games, pure_bad, corr_bad, yes = 500, 0, 0, [0, 0]
    for k in range(n_games):
        g = random_game(2, (rng.randint(1, 3), rng.randint(1, 3)), (-3, 3), seed=rng.randrange(2 ** 32))
        p = omni_exists(g, PURE) is not None
        c = omni_exists(g, CORRELATED) is not None
        pure_bad += p != brute_omni_pure(g)
        corr_bad += c != brute_omni_correlated(g)
        yes[0] += p
        yes[1] += c
    report("omnilateral remapping vs enumeration", pure_bad == 0 and corr_bad == 0,
           f"{n_games} games, SPIs pure={yes[0]} correlated={yes[1]}, mismatches pure={pure_bad} "
           f"correlated={corr_bad}")


def test_disarmament_spi_matches_enumeration():
    rng = random.Random(9)
    n_pairs, bad, yes = 300, 0, 0
    for k in range(n_pairs):
        g = random_game(2, (rng.randint(1, 4), rng.randint(1, 4)), (-3, 3), seed=rng.randrange(2 ** 32))
        removed = []
        for s in g.shape:
            keep = rng.randint(1, s)
            removed.append(set(rng.sample(range(s), s - keep)))
        h = remove_actions(g, Disarmament.of(removed))
        fast = is_spi(g, h) is not None
        bad += fast != brute_is_spi(g, h)
        yes += fast
    report("disarmament SPI vs enumeration", bad == 0, f"{n_pairs} pairs, {yes} SPIs, {bad} mismatches")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                pass
