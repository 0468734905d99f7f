"""Two-player game forms in normal form, Nash equilibria and win/lose derivations.

Outcomes are indices ``0..outcomes-1`` with string labels. Sets of outcomes
(enforceable sets, the Player-1-winning part of a labeling) are ``int`` bit
masks, as in :mod:`eqtransfer.poset`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from itertools import product
from typing import Iterator, NamedTuple, Protocol, Sequence

from .poset import Poset, bits

__all__ = [
    "MatrixGame",
    "MatrixGameForm",
    "PayoffTable",
    "Player",
    "Profile",
    "WINLOSE_LABELS",
    "WinLoseLabeling",
    "can_enforce",
    "check_lemma6",
    "derive_winlose",
    "enforce_set",
    "enumerate_enforceable",
    "enumerate_nash",
    "generate_tree_game",
    "is_determined_form",
    "is_nash",
    "is_stable",
    "lemma6_counterexample",
    "outcome",
    "payoff_prefs",
    "undetermined_labeling",
    "winning_strategy",
]


class Player(IntEnum):
    ONE = 1
    TWO = 2

    @property
    def opponent(self) -> Player:
        return Player.TWO if self is Player.ONE else Player.ONE

    def __str__(self) -> str:
        return f"Player{self.value}"


class Profile(NamedTuple):
    s1: int
    s2: int


@dataclass(frozen=True)
class MatrixGameForm:
    """Strategy sets ``0..rows-1`` and ``0..cols-1`` with an outcome table.

    ``table[i][j]`` is the outcome index of profile ``(i, j)``. Outcomes need
    not all occur in the table.
    """

    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    row_sets: tuple[int, ...] = field(init=False, repr=False, compare=False)
    col_sets: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        table = tuple(tuple(int(o) for o in row) for row in self.table)
        labels = tuple(str(lab) for lab in self.labels)
        if not table or not table[0]:
            raise ValueError("a game form needs at least one strategy per player")
        if not labels:
            raise ValueError("a game form needs at least one outcome")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate outcome labels in {labels}")
        cols = len(table[0])
        for i, row in enumerate(table):
            if len(row) != cols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {cols}")
            for o in row:
                if not 0 <= o < len(labels):
                    raise ValueError(f"outcome index {o} in row {i} out of range")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "row_sets", tuple(_mask(row) for row in table))
        object.__setattr__(self, "col_sets", tuple(_mask(col) for col in zip(*table)))

    @classmethod
    def from_labels(cls, rows: Sequence[Sequence[str]], labels: Sequence[str] | None = None) -> MatrixGameForm:
        """Build a form from a table of outcome labels.

        Without ``labels`` the outcomes are the distinct table entries in order
        of first appearance.
        """
        if labels is None:
            labels = list(dict.fromkeys(lab for row in rows for lab in row))
        index = {lab: i for i, lab in enumerate(labels)}
        return cls(tuple(tuple(index[lab] for lab in row) for row in rows), tuple(labels))

    @property
    def rows(self) -> int:
        return len(self.table)

    @property
    def cols(self) -> int:
        return len(self.table[0])

    @property
    def outcomes(self) -> int:
        return len(self.labels)

    @property
    def all_outcomes(self) -> int:
        return (1 << self.outcomes) - 1

    def transpose(self) -> MatrixGameForm:
        """The same form with the players' roles swapped."""
        return MatrixGameForm(tuple(zip(*self.table)), self.labels)

    def names(self, mask: int) -> list[str]:
        return [self.labels[i] for i in bits(mask)]

    def profiles(self) -> Iterator[Profile]:
        for i in range(self.rows):
            for j in range(self.cols):
                yield Profile(i, j)


def _mask(outcomes: Sequence[int]) -> int:
    m = 0
    for o in outcomes:
        m |= 1 << o
    return m


class Preference(Protocol):
    def less(self, x: int, y: int) -> bool: ...


@dataclass(frozen=True)
class MatrixGame:
    form: MatrixGameForm
    pref1: Poset
    pref2: Poset

    def __post_init__(self) -> None:
        for name, pref in (("pref1", self.pref1), ("pref2", self.pref2)):
            if pref.size != self.form.outcomes:
                raise ValueError(f"{name} has carrier size {pref.size}, the form has {self.form.outcomes} outcomes")


@dataclass(frozen=True)
class WinLoseLabeling:
    """Outcomes in ``w`` are won by Player 1, all others by Player 2."""

    w: int

    def winner(self, o: int) -> Player:
        return Player.ONE if self.w >> o & 1 else Player.TWO

    def complement(self, outcomes: int) -> int:
        return ((1 << outcomes) - 1) & ~self.w


@dataclass(frozen=True)
class PayoffTable:
    """Exact rational payoff pair per outcome."""

    pairs: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        pairs = tuple((Fraction(a), Fraction(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, o: int) -> tuple[Fraction, Fraction]:
        return self.pairs[o]


def payoff_prefs(payoffs: PayoffTable, labels: Sequence[str] = ()) -> tuple[Poset, Poset]:
    """Usual preferences: each player prefers a greater own component."""
    n = len(payoffs)
    p1 = Poset.from_pairs(n, ((x, y) for x in range(n) for y in range(n) if payoffs[x][0] < payoffs[y][0]), labels)
    p2 = Poset.from_pairs(n, ((x, y) for x in range(n) for y in range(n) if payoffs[x][1] < payoffs[y][1]), labels)
    return p1, p2


def outcome(form: MatrixGameForm, p: Profile) -> int:
    s1, s2 = p
    if not (0 <= s1 < form.rows and 0 <= s2 < form.cols):
        raise IndexError(f"profile {tuple(p)} outside a {form.rows}x{form.cols} form")
    return form.table[s1][s2]


def is_stable(form: MatrixGameForm, less1: Preference, less2: Preference, p: Profile) -> bool:
    """No unilateral deviation strictly improves a player's outcome.

    Works for any relation exposing ``less(x, y)``, ordered or not.
    """
    s1, s2 = p
    o = outcome(form, p)
    if any(less1.less(o, form.table[i][s2]) for i in range(form.rows)):
        return False
    return not any(less2.less(o, form.table[s1][j]) for j in range(form.cols))


def is_nash(g: MatrixGame, p: Profile) -> bool:
    return is_stable(g.form, g.pref1, g.pref2, p)


def enumerate_nash(g: MatrixGame) -> list[Profile]:
    return [p for p in g.form.profiles() if is_nash(g, p)]


# Win/lose outcome 0 is (1,0), Player 1 wins; outcome 1 is (0,1), Player 2 wins.
WINLOSE_LABELS = ("(1,0)", "(0,1)")
_WINLOSE_PREF1 = Poset.from_pairs(2, [(1, 0)], WINLOSE_LABELS)
_WINLOSE_PREF2 = Poset.from_pairs(2, [(0, 1)], WINLOSE_LABELS)


def derive_winlose(form: MatrixGameForm, wl: WinLoseLabeling) -> MatrixGame:
    table = tuple(tuple(0 if wl.w >> o & 1 else 1 for o in row) for row in form.table)
    return MatrixGame(MatrixGameForm(table, WINLOSE_LABELS), _WINLOSE_PREF1, _WINLOSE_PREF2)


def enforce_set(form: MatrixGameForm, player: Player | int, s: int) -> int:
    """Exactly the outcomes reachable once ``player`` commits to strategy ``s``."""
    sets = form.row_sets if Player(player) is Player.ONE else form.col_sets
    if not 0 <= s < len(sets):
        raise IndexError(f"strategy {s} out of range for {Player(player)}")
    return sets[s]


def can_enforce(form: MatrixGameForm, player: Player | int, target: int) -> int | None:
    sets = form.row_sets if Player(player) is Player.ONE else form.col_sets
    for s, reach in enumerate(sets):
        if not reach & ~target:
            return s
    return None


def winning_strategy(form: MatrixGameForm, wl: WinLoseLabeling) -> tuple[Player, int] | None:
    s1 = can_enforce(form, Player.ONE, wl.w)
    if s1 is not None:
        return Player.ONE, s1
    s2 = can_enforce(form, Player.TWO, wl.complement(form.outcomes))
    if s2 is not None:
        return Player.TWO, s2
    return None


def undetermined_labeling(form: MatrixGameForm) -> WinLoseLabeling | None:
    """The first labeling (by increasing bit mask) whose win/lose game is not determined."""
    for w in range(1 << form.outcomes):
        wl = WinLoseLabeling(w)
        if winning_strategy(form, wl) is None:
            return wl
    return None


def is_determined_form(form: MatrixGameForm) -> bool:
    return undetermined_labeling(form) is None


def lemma6_counterexample(form: MatrixGameForm) -> int | None:
    """A subset that Player 1 cannot enforce and whose complement Player 2 cannot enforce."""
    full = form.all_outcomes
    for target in range(1 << form.outcomes):
        if can_enforce(form, Player.ONE, target) is None and can_enforce(form, Player.TWO, full & ~target) is None:
            return target
    return None


def check_lemma6(form: MatrixGameForm) -> bool:
    """Compare determinacy with the enforceability characterization; True when they agree."""
    return is_determined_form(form) == (lemma6_counterexample(form) is None)


def enumerate_enforceable(form: MatrixGameForm, player: Player | int) -> list[int]:
    return [t for t in range(1 << form.outcomes) if can_enforce(form, player, t) is not None]


@dataclass
class _Node:
    owner: Player
    children: list[_Node]
    leaf: int = -1


def _random_tree(rng: random.Random, depth: int, branching: int, outcomes: int, owner: Player, lowest: int = 1) -> _Node:
    if depth == 0:
        return _Node(owner, [], rng.randrange(outcomes))
    kids = [
        _random_tree(rng, depth - 1, branching, outcomes, owner.opponent)
        for _ in range(rng.randint(lowest, branching))
    ]
    return _Node(owner, kids)


def _decision_nodes(node: _Node, player: Player, acc: list[_Node]) -> list[_Node]:
    if node.children:
        if node.owner is player:
            acc.append(node)
        for kid in node.children:
            _decision_nodes(kid, player, acc)
    return acc


def _play(node: _Node, choice: dict[int, int]) -> int:
    while node.children:
        node = node.children[choice[id(node)]]
    return node.leaf


def _dedupe(rows: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return list(dict.fromkeys(rows))


def generate_tree_game(
    seed: int,
    depth: int = 3,
    branching: int = 2,
    outcomes: int = 4,
    max_strategies: int = 8,
    max_attempts: int = 1000,
) -> MatrixGameForm:
    """Normal form of a random perfect-information game tree.

    Player 1 owns the root and ownership alternates by level. Nodes get
    between 1 and ``branching`` children, except the root, which gets at
    least 2 when ``branching`` allows it. Strategies
    choose a child at every owned node; duplicate rows and columns are merged
    (a copy of a strategy changes neither determinacy nor equilibria), then
    trees whose form exceeds ``max_strategies`` per player are redrawn. Only
    outcomes that occur at some leaf are kept, relabeled ``o0, o1, ...``.
    Backward induction makes every such form determined.
    """
    if min(depth, branching, outcomes, max_strategies) < 1:
        raise ValueError("all bounds must be at least 1")
    rng = random.Random(seed)
    for _ in range(max_attempts):
        root = _random_tree(rng, depth, branching, outcomes, Player.ONE, min(2, branching))
        nodes1 = _decision_nodes(root, Player.ONE, [])
        nodes2 = _decision_nodes(root, Player.TWO, [])
        size1 = size2 = 1
        for n in nodes1:
            size1 *= len(n.children)
        for n in nodes2:
            size2 *= len(n.children)
        if size1 * size2 > 4096:
            continue
        strats1 = list(product(*(range(len(n.children)) for n in nodes1)))
        strats2 = list(product(*(range(len(n.children)) for n in nodes2)))
        table = []
        for c1 in strats1:
            choice = {id(n): k for n, k in zip(nodes1, c1)}
            row = []
            for c2 in strats2:
                choice.update({id(n): k for n, k in zip(nodes2, c2)})
                row.append(_play(root, choice))
            table.append(tuple(row))
        table = _dedupe(table)
        table = [tuple(r) for r in zip(*_dedupe(list(zip(*table))))]
        if len(table) > max_strategies or len(table[0]) > max_strategies:
            continue
        used = sorted({o for row in table for o in row})
        rename = {o: k for k, o in enumerate(used)}
        return MatrixGameForm(
            tuple(tuple(rename[o] for o in row) for row in table),
            tuple(f"o{k}" for k in range(len(used))),
        )
    raise RuntimeError(f"no tree within {max_strategies} strategies per player after {max_attempts} attempts")
