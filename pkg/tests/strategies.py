"""Hypothesis strategies for small integer-payoff games."""

from hypothesis import strategies as st

from spikit.game import Game


@st.composite
def games(draw, players=(2, 3), actions=(1, 4), lo=-5, hi=5):
    n = draw(st.integers(*players))
    shape = [draw(st.integers(*actions)) for _ in range(n)]
    size = 1
    for k in shape:
        size *= k
    flat = draw(st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=size, max_size=size))
    it = iter(flat)
    return Game.build([[f"a{k}" for k in range(s)] for s in shape], lambda a: next(it))


def payoffs(n, lo=-20, hi=20):
    return st.tuples(*[st.fractions(lo, hi, max_denominator=6)] * n)
