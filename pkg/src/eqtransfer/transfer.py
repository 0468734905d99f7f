"""Constructive transfer from win/lose determinacy to Nash equilibria.

The search only talks to a :class:`DeterminacyOracle`, so the same code runs
over matrix game forms and over priority games with positional strategies.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Generic, Literal, Protocol, TypeVar

from .games import MatrixGameForm, Player, WinLoseLabeling, enforce_set, winning_strategy
from .poset import Poset, bits, lift_less, linear_extension, maximal_elements, replace_with_preferred

__all__ = [
    "DeterminacyOracle",
    "MatrixOracle",
    "Mode",
    "NotDetermined",
    "OracleUnsound",
    "TransferResult",
    "equilibrium_transfer",
    "matrix_oracle",
    "maximal_enforceable",
    "maximal_enforceable_greedy",
    "maximal_enforceable_naive",
]

log = logging.getLogger(__name__)

Mode = Literal["naive", "greedy"]
S1 = TypeVar("S1")
S2 = TypeVar("S2")


class OracleUnsound(RuntimeError):
    """The oracle contradicted determinacy of the underlying form."""


class NotDetermined(OracleUnsound):
    def __init__(self, wl: WinLoseLabeling, labels: tuple[str, ...] = ()) -> None:
        names = [labels[i] if labels else str(i) for i in bits(wl.w)]
        super().__init__(f"derived win/lose game is not determined (Player 1 wins on {{{', '.join(names)}}})")
        self.labeling = wl


class DeterminacyOracle(ABC, Generic[S1, S2]):
    """Decides derived win/lose games and hands out winning strategies.

    Subclasses implement ``_decide``/``_strategy``; the public wrappers count
    calls. ``outcome`` and ``enforced`` are verification hooks and are not
    counted.
    """

    def __init__(self, outcomes: int) -> None:
        self.outcomes = outcomes
        self.decisions = 0
        self.extractions = 0

    def decide(self, wl: WinLoseLabeling) -> Player:
        self.decisions += 1
        return self._decide(wl)

    def strategy(self, wl: WinLoseLabeling) -> S1 | S2:
        self.extractions += 1
        return self._strategy(wl)

    def reset_counts(self) -> None:
        self.decisions = self.extractions = 0

    @abstractmethod
    def _decide(self, wl: WinLoseLabeling) -> Player: ...

    @abstractmethod
    def _strategy(self, wl: WinLoseLabeling) -> S1 | S2: ...

    @abstractmethod
    def outcome(self, s1: S1, s2: S2) -> int:
        """Outcome index of the profile ``(s1, s2)``."""

    @abstractmethod
    def enforced(self, player: Player, s: Any) -> int:
        """Exact set of outcomes ``player`` can end up with when playing ``s``."""


class MatrixOracle(DeterminacyOracle[int, int]):
    """Brute-force oracle over a matrix form; strategies are row/column indices."""

    def __init__(self, form: MatrixGameForm) -> None:
        super().__init__(form.outcomes)
        self.form = form

    def _certificate(self, wl: WinLoseLabeling) -> tuple[Player, int]:
        cert = winning_strategy(self.form, wl)
        if cert is None:
            raise NotDetermined(wl, self.form.labels)
        return cert

    def _decide(self, wl: WinLoseLabeling) -> Player:
        return self._certificate(wl)[0]

    def _strategy(self, wl: WinLoseLabeling) -> int:
        return self._certificate(wl)[1]

    def outcome(self, s1: int, s2: int) -> int:
        return self.form.table[s1][s2]

    def enforced(self, player: Player, s: int) -> int:
        return enforce_set(self.form, player, s)


def matrix_oracle(form: MatrixGameForm) -> MatrixOracle:
    return MatrixOracle(form)


class HasPreferences(Protocol):
    pref1: Poset
    pref2: Poset


@dataclass(frozen=True)
class TransferResult(Generic[S1, S2]):
    profile: tuple[S1, S2]
    m: int
    M: int
    Mprime: int
    decisions: int
    extractions: int


def maximal_enforceable_naive(pref1: Poset, oracle: DeterminacyOracle) -> int:
    """Decide all ``2^|O|`` labelings and keep a lift-maximal Player-1 set.

    Among several maximal sets the smallest bit mask wins.
    """
    enforceable = [w for w in range(1 << pref1.size) if oracle.decide(WinLoseLabeling(w)) is Player.ONE]
    for w in enforceable:
        if not any(lift_less(pref1, w, other) for other in enforceable):
            return w
    raise OracleUnsound("Player 1 cannot even enforce the full outcome set")


def maximal_enforceable_greedy(pref1: Poset, oracle: DeterminacyOracle) -> int:
    """Drop outcomes worst-first along a linear extension while Player 1 still wins.

    Exactly ``|O|`` decisions. The result is maximal for the lift of the
    linear extension, which contains the lift of ``pref1``.
    """
    target = pref1.carrier
    for o in linear_extension(pref1):
        smaller = target & ~(1 << o)
        if oracle.decide(WinLoseLabeling(smaller)) is Player.ONE:
            target = smaller
    return target


def maximal_enforceable(pref1: Poset, oracle: DeterminacyOracle, mode: Mode = "greedy") -> int:
    if mode == "naive":
        return maximal_enforceable_naive(pref1, oracle)
    if mode == "greedy":
        return maximal_enforceable_greedy(pref1, oracle)
    raise ValueError(f"unknown mode {mode!r}")


def equilibrium_transfer(game: HasPreferences, oracle: DeterminacyOracle[S1, S2], mode: Mode = "greedy") -> TransferResult[S1, S2]:
    """Build a Nash equilibrium from winning strategies of derived win/lose games.

    Player 1 commits to a strategy enforcing a lift-maximal enforceable set
    ``M``. Player 2 takes a preferred ``m`` among ``M``; replacing ``m`` in
    ``M`` by everything Player 1 likes better gives a set Player 1 can no
    longer enforce, so Player 2 enforces its complement, pinning the play to
    ``m``. Raises :class:`OracleUnsound` if the oracle breaks that chain.
    """
    pref1, pref2 = game.pref1, game.pref2
    if pref1.size != oracle.outcomes or pref2.size != oracle.outcomes:
        raise ValueError("preferences and oracle disagree on the number of outcomes")
    oracle.reset_counts()

    big_m = maximal_enforceable(pref1, oracle, mode)
    if not big_m:
        raise OracleUnsound("oracle claims Player 1 enforces the empty outcome set")
    if oracle.decide(WinLoseLabeling(big_m)) is not Player.ONE:
        raise OracleUnsound(f"Player 1 was expected to enforce {pref1.names(big_m)}")
    s1 = oracle.strategy(WinLoseLabeling(big_m))

    m = next(bits(maximal_elements(pref2, big_m)))
    big_m_prime = replace_with_preferred(pref1, m, big_m)

    if oracle.decide(WinLoseLabeling(big_m_prime)) is not Player.TWO:
        raise OracleUnsound(
            f"Player 1 enforces {pref1.names(big_m_prime)}, contradicting maximality of {pref1.names(big_m)}"
        )
    s2 = oracle.strategy(WinLoseLabeling(big_m_prime))

    realized = oracle.outcome(s1, s2)
    if realized != m:
        raise OracleUnsound(f"strategies meet at {pref1.labels[realized]}, expected {pref1.labels[m]}")
    log.debug("transfer: M=%s m=%s M'=%s", pref1.names(big_m), pref1.labels[m], pref1.names(big_m_prime))
    return TransferResult((s1, s2), m, big_m, big_m_prime, oracle.decisions, oracle.extractions)
