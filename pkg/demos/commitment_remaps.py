"""Committing to play differently: omnilateral and unilateral default remapping."""

from spikit import gen_paper_game, omni_exists, omni_optimize, uni_search
from spikit.remap import psi_labels, uni_assess
from spikit.tokens import CORRELATED, PURE

g = gen_paper_game("seaway")
lab = lambda a: tuple(g.actions[i][k] for i, k in enumerate(a))  # noqa: E731
fmt = lambda v: "(" + ", ".join(str(x) for x in v) + ")"  # noqa: E731

print("Both countries commit to a remapping of the default outcomes.")
om = omni_exists(g, PURE)
for a, r in om.realizations.items():
    if r != a:
        print(f"  pure: {lab(a)} paying {fmt(g.payoffs[a])} becomes {lab(r)} paying {fmt(g.payoffs[r])}")
best = omni_optimize(g, CORRELATED)
print(f"  correlated, maximizing total gain: value {best.value}")
for a, r in best.spi.realizations.items():
    print(f"    {lab(a)} -> " + " + ".join(f"{p}*{lab(b)}" for b, p in r.support.items()))

t = gen_paper_game("temptation")
print("\nOnly player 1 commits (temptation game).")
for psi, cert in uni_search(t):
    iso = cert.isos[0]
    print(f"  {psi_labels(t, psi)}: {cert.kind}, player 2 relabels "
          f"{dict(zip(cert.reduced.actions[1], (cert.target.actions[1][k] for k in iso.maps[1])))}"
          f" with m={iso.m[1]}, b={iso.b[1]}")

w = gen_paper_game("why_iso")
cert, notes = uni_assess(w, {"r3": "r1", "r4": "r2"})
print("\nA remap with two possible relabelings for player 2, only one of them improving:")
print("  certified:", cert is not None)
