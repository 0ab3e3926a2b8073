"""Two countries disputing a seaway: replace the default game by a token game.

Walks through reduction, the correlated token SPI found by the LP, a
hand-written token game with explicit lotteries, and certificate checking.
"""

from fractions import Fraction as F

from spikit import correlated_iso_token_spi, gen_paper_game, pure_iso_token_spi, reduce, to_certificate
from spikit import verify_certificate
from spikit.game import CorrelatedProfile
from spikit.tokens import characterize_2p, verify_token_spi


def table(g):
    width = max(len(f"{x}") for v in g.payoffs.values() for x in v) * 2 + 2
    print(" " * 10 + "".join(f"{c:>{width + 2}}" for c in g.actions[1]))
    for r, row in enumerate(g.actions[0]):
        cells = (", ".join(str(x) for x in g.payoffs[(r, c)]) for c in range(g.shape[1]))
        print(f"{row:>10}" + "".join(f"{cell:>{width + 2}}" for cell in cells))
    print()


g = gen_paper_game("seaway")
print("Default game (claim Full or Partial seaway, via Navy or Announcement):")
table(g)

red, trace = reduce(g)
print("Iterated strict dominance removes:", ", ".join(f"{r.removed} (player {r.player + 1}, beaten by {r.dominator})"
                                                    for r in trace))
print("Reduced game:")
table(red)

print("Pure isomorphism token SPI:", pure_iso_token_spi(g))
case, yes = characterize_2p(g)
print(f"Two-player case analysis: {case}, SPI exists = {yes}")

ts = correlated_iso_token_spi(g)
print("\nToken game found by the LP:")
table(ts.token)
print("Utility map per player: m =", [str(m) for m in ts.iso.m], " b =", [str(b) for b in ts.iso.b])

# a hand-written alternative: u -> (3/5) u + 2 realized by explicit lotteries
token = gen_paper_game("seaway_token")
at = lambda h, *x: tuple(h.action_index(i, y) for i, y in enumerate(x))  # noqa: E731
o = lambda *x: at(g, *x)  # noqa: E731
lotteries = {
    at(token, "Token PA", "Token PA"):
        CorrelatedProfile({o("FN", "FA"): F(2, 5), o("FA", "FN"): F(2, 5), o("PA", "PA"): F(1, 5)}),
    at(token, "Token PA", "Token PN"): CorrelatedProfile({o("FN", "FA"): F(1, 3), o("FA", "FN"): F(2, 3)}),
    at(token, "Token PN", "Token PA"): CorrelatedProfile({o("FN", "FA"): F(2, 3), o("FA", "FN"): F(1, 3)}),
    at(token, "Token PN", "Token PN"): CorrelatedProfile({o("PA", "PA"): F(1, 2), o("PN", "PN"): F(1, 2)}),
}
cert = verify_token_spi(g, token, lotteries)
print("\nAnnounced token game:")
table(token)
print("Certified:", cert.kind, " m =", [str(m) for m in cert.m], " b =", [str(b) for b in cert.b])

doc = to_certificate(cert)
print("Certificate re-check:", verify_certificate(doc).ok)
doc["games"]["candidate"]["payoffs"][0][0] = ["4", "4"]
print("After editing one token payoff:", verify_certificate(doc).errors[0])
