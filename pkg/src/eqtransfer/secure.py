"""Secure equilibria as Nash equilibria under malevolent preferences."""

from __future__ import annotations

from typing import Sequence

from .games import MatrixGame, MatrixGameForm, PayoffTable, Profile, is_nash
from .poset import Poset
from .transfer import DeterminacyOracle, Mode, TransferResult, equilibrium_transfer, matrix_oracle

__all__ = ["is_secure", "malevolent_game", "malevolent_prefs", "secure_equilibrium"]


def malevolent_prefs(payoffs: PayoffTable, labels: Sequence[str] = ()) -> tuple[Poset, Poset]:
    """Own payoff first; on a tie, a lower opponent payoff is better.

    Outcomes with identical payoff pairs stay incomparable.
    """
    n = len(payoffs)

    def below(me: int, x: int, y: int) -> bool:
        other = 1 - me
        a, b = payoffs[x], payoffs[y]
        return a[me] < b[me] or (a[me] == b[me] and b[other] < a[other])

    p1 = Poset.from_pairs(n, ((x, y) for x in range(n) for y in range(n) if below(0, x, y)), labels)
    p2 = Poset.from_pairs(n, ((x, y) for x in range(n) for y in range(n) if below(1, x, y)), labels)
    return p1, p2


def malevolent_game(form: MatrixGameForm, payoffs: PayoffTable) -> MatrixGame:
    if len(payoffs) != form.outcomes:
        raise ValueError(f"{len(payoffs)} payoff pairs for {form.outcomes} outcomes")
    return MatrixGame(form, *malevolent_prefs(payoffs, form.labels))


def secure_equilibrium(
    form: MatrixGameForm,
    payoffs: PayoffTable,
    oracle: DeterminacyOracle | None = None,
    mode: Mode = "greedy",
) -> TransferResult:
    if oracle is None:
        oracle = matrix_oracle(form)
    return equilibrium_transfer(malevolent_game(form, payoffs), oracle, mode)


def is_secure(form: MatrixGameForm, payoffs: PayoffTable, p: Profile) -> bool:
    return is_nash(malevolent_game(form, payoffs), Profile(*p))
