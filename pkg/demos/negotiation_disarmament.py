"""Contract negotiation with loopholes: which promises to drop actions help both sides?

Alice picks a demand and whether to add fine-print loopholes (f / nf); Bob
picks a demand and a simple (s) or complicated (c) contract.
"""

from spikit import gen_paper_game, reduce, remove_actions, search_disarmament, verify_disarmament
from spikit.game import Disarmament

g = gen_paper_game("negotiation")
red, _ = reduce(g)
print("By default the game reduces to", red.actions)


def removal(alice, bob):
    return Disarmament.of([{g.action_index(0, x) for x in alice}, {g.action_index(1, x) for x in bob}])


f_rows = ["(l,f)", "(m,f)", "(h,f)"]
s_cols = ["(l,s)", "(m,s)", "(h,s)"]

alone = removal(f_rows, [])
print("\nAlice alone promises no loopholes.")
print("  reduced candidate:", reduce(remove_actions(g, alone))[0].actions)
print("  certificate:", verify_disarmament(g, alone))
bob = [g.payoffs[(g.action_index(0, "(l,nf)"), g.action_index(1, c))][1] for c in ("(l,s)", "(l,c)")]
print(f"  Bob earns {bob[0]} vs {bob[1]} for (l,s) vs (l,c) against (l,nf): a tie, so c never strictly "
      "beats s and Bob's columns stay.")

both = removal(f_rows, s_cols)
cert = verify_disarmament(g, both)
print("\nAlice drops loopholes and Bob drops simple contracts.")
print("  reduced candidate:", cert.target_reduced.actions)
print("  certificate:", cert.kind, " m =", [str(x) for x in cert.m], " b =", [str(x) for x in cert.b])

print("\nEvery disarmament that is an SPI:")
for d, c in search_disarmament(g):
    labels = [[g.actions[i][k] for k in sorted(r)] for i, r in enumerate(d.removed)]
    print(f"  Alice drops {labels[0]}, Bob drops {labels[1]} -> {c.kind}")
print("Alice acting alone:", search_disarmament(g, unilateral=0) or "none")
