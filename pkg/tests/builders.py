"""Small hand-built games shared by several test modules."""

from spikit.game import Game


def prisoners_dilemma() -> Game:
    table = {(0, 0): (3, 3), (0, 1): (0, 4), (1, 0): (4, 0), (1, 1): (1, 1)}
    return Game.build([["C", "D"], ["C", "D"]], table)


def battle_of_sexes() -> Game:
    table = {(0, 0): (2, 1), (0, 1): (0, 0), (1, 0): (0, 0), (1, 1): (1, 2)}
    return Game.build([["O", "F"], ["O", "F"]], table)


def matching_pennies() -> Game:
    table = {(0, 0): (1, -1), (0, 1): (-1, 1), (1, 0): (-1, 1), (1, 1): (1, -1)}
    return Game.build([["H", "T"], ["H", "T"]], table)


def shifted_block() -> Game:
    """Reduced payoffs {0,1}^2; dominated rows D1, D2 against dominated columns E1, E2 hold {2,3}^2."""
    p1 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    p2 = [[0, 1, 0], [1, 0, 0], [1, 1, 1]]
    corner = {(3, 3): (2, 2), (3, 4): (2, 3), (4, 3): (3, 2), (4, 4): (3, 3)}

    def pay(a):
        r, c = a
        if r < 3 and c < 3:
            return (p1[r][c], p2[r][c])
        if r < 3:
            return (0, -1)  # E columns lose to c0 for player 2
        if c == 0:
            return (-10, 10)
        if c < 3:
            return (-10, -10)
        return corner[(r, c)]

    return Game.build([["r0", "r1", "r2", "D1", "D2"], ["c0", "c1", "c2", "E1", "E2"]], pay)
