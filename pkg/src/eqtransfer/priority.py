"""Priority games on finite arenas and their positional secure equilibria.

A play's outcome is the payoff pair attached to the least priority seen
infinitely often. Derived win/lose games are parity games (Player 1 wins when
that least priority is even after remapping), solved with Zielonka's
recursive algorithm; positional winning strategies feed the transfer.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .games import PayoffTable, Player, WinLoseLabeling
from .poset import Poset, bits, mask_of
from .secure import malevolent_prefs
from .transfer import DeterminacyOracle, Mode, TransferResult, equilibrium_transfer

__all__ = [
    "Arena",
    "ParityInstance",
    "ParitySolution",
    "PositionalStrategy",
    "PriorityGame",
    "PriorityOracle",
    "attractor",
    "best_deviation",
    "enforce_priorities",
    "lasso",
    "play_priority",
    "priority_oracle",
    "random_arena",
    "random_priority_game",
    "reparity_encode",
    "secure_equilibrium_priority",
    "solve_parity",
    "verify_priority_secure",
]


@dataclass(frozen=True)
class Arena:
    owner: tuple[Player, ...]
    edges: tuple[tuple[int, ...], ...]
    priority: tuple[int, ...]
    initial: int = 0
    preds: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        owner = tuple(Player(o) for o in self.owner)
        # duplicate edges carry no information and would skew attractor counters
        edges = tuple(tuple(dict.fromkeys(int(w) for w in succ)) for succ in self.edges)
        priority = tuple(int(p) for p in self.priority)
        n = len(owner)
        if n == 0:
            raise ValueError("an arena needs at least one vertex")
        if len(edges) != n or len(priority) != n:
            raise ValueError("owner, edges and priority must have one entry per vertex")
        for v, succ in enumerate(edges):
            if not succ:
                raise ValueError(f"vertex {v} has no successor")
            for w in succ:
                if not 0 <= w < n:
                    raise ValueError(f"edge {v} -> {w} leaves the arena")
        if any(p < 0 for p in priority):
            raise ValueError("priorities must be natural numbers")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial vertex {self.initial} out of range")
        preds: list[list[int]] = [[] for _ in range(n)]
        for v, succ in enumerate(edges):
            for w in succ:
                preds[w].append(v)
        object.__setattr__(self, "owner", owner)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "priority", priority)
        object.__setattr__(self, "preds", tuple(tuple(p) for p in preds))

    @property
    def n(self) -> int:
        return len(self.owner)

    @property
    def priorities(self) -> tuple[int, ...]:
        """Occurring priorities, ascending."""
        return tuple(sorted(set(self.priority)))

    def with_initial(self, v: int) -> Arena:
        return Arena(self.owner, self.edges, self.priority, v)

    def vertices_of(self, player: Player) -> list[int]:
        return [v for v, o in enumerate(self.owner) if o is player]


@dataclass(frozen=True)
class PriorityGame:
    arena: Arena
    payoff: Mapping[int, tuple[Fraction, Fraction]]

    def __post_init__(self) -> None:
        payoff = {int(p): (Fraction(a), Fraction(b)) for p, (a, b) in self.payoff.items()}
        if set(payoff) != set(self.arena.priorities):
            raise ValueError(
                f"payoff defined on priorities {sorted(payoff)}, arena uses {list(self.arena.priorities)}"
            )
        object.__setattr__(self, "payoff", payoff)

    @property
    def outcomes(self) -> tuple[int, ...]:
        return self.arena.priorities

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(str(p) for p in self.outcomes)

    def payoffs(self) -> PayoffTable:
        return PayoffTable(tuple(self.payoff[p] for p in self.outcomes))


@dataclass(frozen=True)
class PositionalStrategy:
    """One successor per vertex owned by ``player``."""

    player: Player
    choice: Mapping[int, int]

    def __getitem__(self, v: int) -> int:
        return self.choice[v]

    def validate(self, arena: Arena) -> None:
        mine = set(arena.vertices_of(self.player))
        if set(self.choice) != mine:
            raise ValueError(f"strategy of {self.player} must cover exactly the vertices {sorted(mine)}")
        for v, w in self.choice.items():
            if w not in arena.edges[v]:
                raise ValueError(f"strategy picks {v} -> {w}, which is not an edge")


@dataclass(frozen=True)
class ParityInstance:
    """Arena whose priorities are remapped so Player 1 wins exactly on even minima."""

    arena: Arena
    remap: Mapping[int, int]


def reparity_encode(arena: Arena, w: Iterable[int]) -> ParityInstance:
    """Relabel priorities monotonically so membership in ``w`` becomes evenness."""
    wins = set(w)
    occurring = arena.priorities
    if not wins <= set(occurring):
        raise ValueError(f"priorities {sorted(wins - set(occurring))} do not occur in the arena")
    remap: dict[int, int] = {}
    q = -1
    for p in occurring:
        want_even = p in wins
        if q < 0:
            q = 0 if want_even else 1
        elif (q % 2 == 0) != want_even:
            q += 1
        remap[p] = q
    priority = tuple(remap[p] for p in arena.priority)
    return ParityInstance(Arena(arena.owner, arena.edges, priority, arena.initial), remap)


def attractor(arena: Arena, sub: frozenset[int], target: Iterable[int], player: Player) -> tuple[set[int], dict[int, int]]:
    """Vertices of ``sub`` from which ``player`` forces a visit to ``target`` inside ``sub``.

    Returns the attractor and an attracting move for each of ``player``'s
    vertices outside ``target``.
    """
    attr = {v for v in target if v in sub}
    moves: dict[int, int] = {}
    remaining: dict[int, int] = {}
    queue = deque(attr)
    while queue:
        v = queue.popleft()
        for u in arena.preds[v]:
            if u not in sub or u in attr:
                continue
            if arena.owner[u] is player:
                attr.add(u)
                moves[u] = v
                queue.append(u)
            else:
                if u not in remaining:
                    remaining[u] = sum(1 for w in arena.edges[u] if w in sub)
                remaining[u] -= 1
                if remaining[u] == 0:
                    attr.add(u)
                    queue.append(u)
    return attr, moves


@dataclass(frozen=True)
class ParitySolution:
    winner: tuple[Player, ...]
    strategies: Mapping[Player, Mapping[int, int]]

    def region(self, player: Player) -> frozenset[int]:
        return frozenset(v for v, p in enumerate(self.winner) if p is player)

    def strategy(self, player: Player, arena: Arena) -> PositionalStrategy:
        """Winning moves on ``player``'s region, first successor elsewhere."""
        part = self.strategies[player]
        return PositionalStrategy(player, {v: part.get(v, arena.edges[v][0]) for v in arena.vertices_of(player)})


def _zielonka(arena: Arena, sub: frozenset[int]) -> tuple[dict[Player, set[int]], dict[Player, dict[int, int]]]:
    if not sub:
        return {Player.ONE: set(), Player.TWO: set()}, {Player.ONE: {}, Player.TWO: {}}
    low = min(arena.priority[v] for v in sub)
    me = Player.ONE if low % 2 == 0 else Player.TWO
    opp = me.opponent
    top = [v for v in sub if arena.priority[v] == low]
    attr, attr_moves = attractor(arena, sub, top, me)
    win, strat = _zielonka(arena, sub - attr)
    if not win[opp]:
        moves = {**strat[me], **attr_moves}
        for v in top:
            if arena.owner[v] is me:
                moves[v] = next(w for w in arena.edges[v] if w in sub)
        return {me: set(sub), opp: set()}, {me: moves, opp: {}}
    back, back_moves = attractor(arena, sub, win[opp], opp)
    win2, strat2 = _zielonka(arena, sub - back)
    return (
        {me: win2[me], opp: win2[opp] | back},
        {me: strat2[me], opp: {**strat2[opp], **strat[opp], **back_moves}},
    )


def solve_parity(inst: ParityInstance | Arena) -> ParitySolution:
    """Winning regions and positional winning strategies, min-priority even wins for Player 1."""
    arena = inst.arena if isinstance(inst, ParityInstance) else inst
    win, strat = _zielonka(arena, frozenset(range(arena.n)))
    winner = tuple(Player.ONE if v in win[Player.ONE] else Player.TWO for v in range(arena.n))
    return ParitySolution(winner, strat)


def lasso(arena: Arena, sigma1: PositionalStrategy, sigma2: PositionalStrategy, start: int | None = None) -> tuple[list[int], list[int]]:
    """Prefix and cycle of the unique play from ``start`` (default: initial vertex)."""
    pick = {Player.ONE: sigma1, Player.TWO: sigma2}
    v = arena.initial if start is None else start
    seen: dict[int, int] = {}
    path: list[int] = []
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = pick[arena.owner[v]][v]
    return path[: seen[v]], path[seen[v] :]


def play_priority(arena: Arena, sigma1: PositionalStrategy, sigma2: PositionalStrategy) -> int:
    """Least priority on the cycle the play settles into."""
    _, cycle = lasso(arena, sigma1, sigma2)
    return min(arena.priority[v] for v in cycle)


def _fixed_graph(arena: Arena, sigma: PositionalStrategy) -> list[tuple[int, ...]]:
    return [(sigma[v],) if arena.owner[v] is sigma.player else arena.edges[v] for v in range(arena.n)]


def _reachable(graph: Sequence[Sequence[int]], start: int, allowed: set[int] | None = None) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in graph[v]:
            if w not in seen and (allowed is None or w in allowed):
                seen.add(w)
                stack.append(w)
    return seen


def enforce_priorities(arena: Arena, player: Player, sigma: PositionalStrategy) -> set[int]:
    """Every least-recurring priority the opponent can still produce against ``sigma``.

    With ``sigma`` fixed the opponent faces a one-player graph: priority ``p``
    is achievable iff some reachable ``p``-vertex lies on a cycle using only
    vertices of priority at least ``p``.
    """
    if sigma.player is not Player(player):
        raise ValueError(f"strategy belongs to {sigma.player}, not {Player(player)}")
    graph = _fixed_graph(arena, sigma)
    reach = _reachable(graph, arena.initial)
    found = set()
    for p in sorted({arena.priority[v] for v in reach}):
        allowed = {v for v in reach if arena.priority[v] >= p}
        for x in (v for v in allowed if arena.priority[v] == p):
            if any(x in _reachable(graph, w, allowed) for w in graph[x] if w in allowed):
                found.add(p)
                break
    return found


def best_deviation(arena: Arena, opponent: PositionalStrategy, deviator: Player) -> set[int]:
    """Priorities ``deviator`` can realize, by any strategy, against a fixed positional opponent."""
    if opponent.player is Player(deviator):
        raise ValueError("the fixed strategy must belong to the deviator's opponent")
    return enforce_priorities(arena, opponent.player, opponent)


class PriorityOracle(DeterminacyOracle[PositionalStrategy, PositionalStrategy]):
    """Outcome ``i`` is the ``i``-th smallest occurring priority."""

    def __init__(self, game: PriorityGame) -> None:
        super().__init__(len(game.outcomes))
        self.game = game
        self.arena = game.arena
        self.index = {p: i for i, p in enumerate(game.outcomes)}
        self._cache: dict[int, ParitySolution] = {}

    def solution(self, wl: WinLoseLabeling) -> ParitySolution:
        if wl.w not in self._cache:
            wins = [self.game.outcomes[i] for i in bits(wl.w)]
            self._cache[wl.w] = solve_parity(reparity_encode(self.arena, wins))
        return self._cache[wl.w]

    def _decide(self, wl: WinLoseLabeling) -> Player:
        return self.solution(wl).winner[self.arena.initial]

    def _strategy(self, wl: WinLoseLabeling) -> PositionalStrategy:
        sol = self.solution(wl)
        return sol.strategy(sol.winner[self.arena.initial], self.arena)

    def outcome(self, s1: PositionalStrategy, s2: PositionalStrategy) -> int:
        return self.index[play_priority(self.arena, s1, s2)]

    def enforced(self, player: Player, s: PositionalStrategy) -> int:
        return mask_of(self.index[p] for p in enforce_priorities(self.arena, player, s))


def priority_oracle(game: PriorityGame) -> PriorityOracle:
    return PriorityOracle(game)


@dataclass(frozen=True)
class _Preferences:
    pref1: Poset
    pref2: Poset


def secure_equilibrium_priority(
    game: PriorityGame, mode: Mode = "greedy"
) -> TransferResult[PositionalStrategy, PositionalStrategy]:
    prefs = _Preferences(*malevolent_prefs(game.payoffs(), game.labels))
    return equilibrium_transfer(prefs, priority_oracle(game), mode)


def verify_priority_secure(game: PriorityGame, sigma1: PositionalStrategy, sigma2: PositionalStrategy) -> bool:
    """Check stability against every deviation, positional or not."""
    arena = game.arena
    sigma1.validate(arena)
    sigma2.validate(arena)
    pref1, pref2 = malevolent_prefs(game.payoffs(), game.labels)
    index = {p: i for i, p in enumerate(game.outcomes)}
    here = index[play_priority(arena, sigma1, sigma2)]
    if any(pref1.less(here, index[p]) for p in best_deviation(arena, sigma2, Player.ONE)):
        return False
    return not any(pref2.less(here, index[p]) for p in best_deviation(arena, sigma1, Player.TWO))


def random_arena(
    rng: random.Random,
    n: int,
    priorities: int = 4,
    max_degree: int = 3,
    initial: int = 0,
) -> Arena:
    """Uniform owners, priorities drawn from ``0..priorities-1``, 1..max_degree successors."""
    owner = tuple(rng.choice((Player.ONE, Player.TWO)) for _ in range(n))
    edges = tuple(tuple(rng.sample(range(n), rng.randint(1, min(max_degree, n)))) for _ in range(n))
    priority = tuple(rng.randrange(priorities) for _ in range(n))
    return Arena(owner, edges, priority, initial)


def random_priority_game(
    rng: random.Random,
    n: int,
    priorities: int = 4,
    max_degree: int = 3,
    payoff_range: int = 3,
) -> PriorityGame:
    arena = random_arena(rng, n, priorities, max_degree)
    payoff = {p: (rng.randint(0, payoff_range), rng.randint(0, payoff_range)) for p in arena.priorities}
    return PriorityGame(arena, payoff)
