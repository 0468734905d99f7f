"""Small example games and game forms shared by the tests."""

from fractions import Fraction

from eqtransfer.games import MatrixGame, MatrixGameForm, PayoffTable, payoff_prefs


def payoff_game(rows):
    """Matrix of payoff pairs -> (game with usual preferences, payoff table)."""
    pairs = list(dict.fromkeys(p for row in rows for p in row))
    labels = [f"({a},{b})" for a, b in pairs]
    index = {p: i for i, p in enumerate(pairs)}
    form = MatrixGameForm(tuple(tuple(index[p] for p in row) for row in rows), tuple(labels))
    payoffs = PayoffTable(tuple((Fraction(a), Fraction(b)) for a, b in pairs))
    return MatrixGame(form, *payoff_prefs(payoffs, labels)), payoffs


# Payoff-pair games; rows 1_l, 1_b and columns 2_l, 2_r.
PAYOFF_GAMES = {
    1: [[(1, 0), (5, 0)], [(2, 4), (5, 3)]],
    2: [[(0, 1), (1, 0)], [(1, 0), (0, 1)]],
    3: [[(2, 1), (0, 0)], [(0, 0), (1, 2)]],
    4: [[(0, 1), (0, 1)], [(1, 0), (1, 0)]],
}

# Game forms over outcome labels X, Y, Z in that index order.
_XYZ = ("X", "Y", "Z")
FORMS = {
    1: MatrixGameForm.from_labels([["X", "Y"], ["Y", "X"]], ("X", "Y")),
    2: MatrixGameForm.from_labels([["X", "Y", "Z"], ["Y", "Z", "X"]], _XYZ),
    3: MatrixGameForm.from_labels([["X", "Z"], ["Y", "Y"]], _XYZ),
    4: MatrixGameForm.from_labels([["X", "Z", "Y"], ["Y", "Y", "Y"]], _XYZ),
}
