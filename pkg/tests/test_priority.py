import random
import time

import pytest

from eqtransfer.games import Player, WinLoseLabeling
from eqtransfer.poset import bits
from eqtransfer.priority import (
    Arena,
    PositionalStrategy,
    PriorityGame,
    attractor,
    enforce_priorities,
    lasso,
    play_priority,
    priority_oracle,
    random_arena,
    random_priority_game,
    reparity_encode,
    secure_equilibrium_priority,
    solve_parity,
    verify_priority_secure,
)
from oracles import lasso_cycle_min, parity_winners_bruteforce, positional_strategies, realizable_priorities, simple_cycles

P1, P2 = Player.ONE, Player.TWO


def strat(player, choice):
    return PositionalStrategy(player, dict(choice))


# vertex 0 (Player 1) picks between a self-loop of priority 1 at vertex 1 and one of priority 2 at vertex 2
FORK = Arena((P1, P2, P2), ((1, 2), (1,), (2,)), (3, 1, 2))


class TestArena:
    def test_validation(self):
        with pytest.raises(ValueError):
            Arena((P1,), ((),), (0,))
        with pytest.raises(ValueError):
            Arena((P1,), ((1,),), (0,))
        with pytest.raises(ValueError):
            Arena((P1, P2), ((1,), (0,)), (0,))
        with pytest.raises(ValueError):
            Arena((P1,), ((0,),), (-1,))
        with pytest.raises(ValueError):
            Arena((P1,), ((0,),), (0,), initial=3)

    def test_duplicate_edges_collapse(self):
        a = Arena((P1, P2), ((1, 1, 0), (0,)), (0, 1))
        assert a.edges[0] == (1, 0)
        assert a.preds[1] == (0,)

    def test_priorities_sorted(self):
        assert FORK.priorities == (1, 2, 3)

    def test_payoff_domain(self):
        with pytest.raises(ValueError):
            PriorityGame(FORK, {1: (0, 0), 2: (0, 0)})
        with pytest.raises(ValueError):
            PriorityGame(FORK, {0: (0, 0), 1: (0, 0), 2: (0, 0), 3: (0, 0)})

    def test_strategy_validation(self):
        with pytest.raises(ValueError):
            strat(P1, {0: 0}).validate(FORK)
        with pytest.raises(ValueError):
            strat(P1, {}).validate(FORK)
        strat(P1, {0: 2}).validate(FORK)


class TestReparity:
    def test_identity(self):
        inst = reparity_encode(FORK, {2})
        assert dict(inst.remap) == {1: 1, 2: 2, 3: 3}

    def test_all_winning(self):
        assert set(reparity_encode(FORK, {1, 2, 3}).remap.values()) == {0}

    def test_none_winning(self):
        assert set(reparity_encode(FORK, ()).remap.values()) == {1}

    def test_unknown_priority(self):
        with pytest.raises(ValueError):
            reparity_encode(FORK, {0})

    @pytest.mark.parametrize("seed", range(40))
    def test_monotone_and_parity_correct(self, seed):
        rng = random.Random(seed)
        arena = random_arena(rng, rng.randint(1, 8), priorities=6)
        occ = arena.priorities
        wins = {p for p in occ if rng.random() < 0.5}
        remap = reparity_encode(arena, wins).remap
        for a, b in zip(occ, occ[1:]):
            assert remap[a] <= remap[b]
        for p in occ:
            assert (remap[p] % 2 == 0) == (p in wins)
        assert max(remap.values()) <= len(occ)


class TestPlays:
    def test_fork(self):
        s2 = strat(P2, {1: 1, 2: 2})
        assert lasso(FORK, strat(P1, {0: 1}), s2) == ([0], [1])
        assert play_priority(FORK, strat(P1, {0: 2}), s2) == 2

    def test_single_vertex(self):
        a = Arena((P2,), ((0,),), (5,))
        assert lasso(a, strat(P1, {}), strat(P2, {0: 0})) == ([], [0])
        assert play_priority(a, strat(P1, {}), strat(P2, {0: 0})) == 5

    @pytest.mark.parametrize("seed", range(40))
    def test_cycle_is_simple_and_matches_oracle(self, seed):
        rng = random.Random(seed)
        arena = random_arena(rng, rng.randint(1, 5))
        cycles = {tuple(c) for c in simple_cycles(arena)}
        s1s, s2s = positional_strategies(arena, P1), positional_strategies(arena, P2)
        for a in s1s:
            for b in s2s:
                prefix, cycle = lasso(arena, strat(P1, a), strat(P2, b))
                k = cycle.index(min(cycle))
                assert tuple(cycle[k:] + cycle[:k]) in cycles
                assert not set(prefix) & set(cycle)
                assert min(arena.priority[v] for v in cycle) == lasso_cycle_min(arena, {**a, **b}, arena.initial)


class TestParity:
    def test_fork(self):
        sol = solve_parity(FORK)
        # min-parity: Player 1 steers to the even self-loop
        assert sol.winner == (P1, P2, P1)
        assert sol.strategy(P1, FORK)[0] == 2

    def test_two_vertex_alternation(self):
        # Player 2 owns vertex 1 and can bounce back to 0 or loop on its own odd priority
        a = Arena((P1, P2), ((1,), (0, 1)), (0, 1))
        assert solve_parity(a).winner == (P2, P2)
        b = Arena((P1, P2), ((1,), (0,)), (0, 1))
        assert solve_parity(b).winner == (P1, P1)

    def test_attractor(self):
        attr, moves = attractor(FORK, frozenset(range(3)), [2], P1)
        assert attr == {0, 2} and moves == {0: 2}
        attr, _ = attractor(FORK, frozenset(range(3)), [2], P2)
        assert attr == {2}

    @pytest.mark.parametrize("seed", range(120))
    def test_against_bruteforce(self, seed):
        rng = random.Random(seed)
        arena = random_arena(rng, rng.randint(1, 6), priorities=rng.randint(1, 4))
        assert list(solve_parity(arena).winner) == parity_winners_bruteforce(arena)

    @pytest.mark.parametrize("seed", range(60))
    def test_region_strategies_win(self, seed):
        rng = random.Random(seed)
        arena = random_arena(rng, rng.randint(1, 8), priorities=rng.randint(1, 5))
        sol = solve_parity(arena)
        for player in Player:
            sigma = sol.strategy(player, arena)
            sigma.validate(arena)
            for v in sol.region(player):
                got = enforce_priorities(arena.with_initial(v), player, sigma)
                want = 0 if player is P1 else 1
                assert got and all(p % 2 == want for p in got)


class TestEnforce:
    def test_fork(self):
        assert enforce_priorities(FORK, P1, strat(P1, {0: 1})) == {1}
        assert enforce_priorities(FORK, P2, strat(P2, {1: 1, 2: 2})) == {1, 2}

    def test_wrong_owner(self):
        with pytest.raises(ValueError):
            enforce_priorities(FORK, P2, strat(P1, {0: 1}))

    @pytest.mark.parametrize("seed", range(80))
    def test_against_positional_replies(self, seed):
        rng = random.Random(seed)
        arena = random_arena(rng, rng.randint(1, 6))
        for player in Player:
            for fixed in positional_strategies(arena, player)[:6]:
                got = enforce_priorities(arena, player, strat(player, fixed))
                assert got == realizable_priorities(arena, fixed, player, arena.initial)


class TestOracle:
    @pytest.mark.parametrize("seed", range(30))
    def test_totality(self, seed):
        rng = random.Random(seed)
        game = random_priority_game(rng, rng.randint(1, 7))
        oracle = priority_oracle(game)
        k = len(game.outcomes)
        for w in range(1 << k):
            wl = WinLoseLabeling(w)
            winner = oracle.decide(wl)
            sigma = oracle.strategy(wl)
            sigma.validate(game.arena)
            wins = {game.outcomes[i] for i in bits(w)}
            enforced = enforce_priorities(game.arena, winner, sigma)
            assert enforced <= wins if winner is P1 else not enforced & wins

    def test_outcome_index(self):
        game = PriorityGame(FORK, {1: (0, 1), 2: (1, 0), 3: (5, 5)})
        oracle = priority_oracle(game)
        assert oracle.outcome(strat(P1, {0: 2}), strat(P2, {1: 1, 2: 2})) == 1


class TestSecurePriority:
    def test_fork(self):
        game = PriorityGame(FORK, {1: (0, 1), 2: (1, 0), 3: (5, 5)})
        res = secure_equilibrium_priority(game)
        assert game.outcomes[res.m] == 2
        assert verify_priority_secure(game, *res.profile)

    def test_single_vertex(self):
        game = PriorityGame(Arena((P1,), ((0,),), (4,)), {4: (1, 1)})
        res = secure_equilibrium_priority(game)
        assert res.m == 0 and res.decisions == 3 and res.extractions == 2
        assert verify_priority_secure(game, *res.profile)

    @pytest.mark.parametrize("seed", range(60))
    def test_campaign(self, seed):
        rng = random.Random(seed)
        game = random_priority_game(rng, rng.randint(1, 10), priorities=rng.randint(1, 4))
        for mode in ("greedy", "naive"):
            res = secure_equilibrium_priority(game, mode)
            assert verify_priority_secure(game, *res.profile)
            k = len(game.outcomes)
            assert res.decisions == (k if mode == "greedy" else 1 << k) + 2
            assert res.extractions == 2

    def test_corrupted_strategy_is_rejected(self):
        # Player 2 wants priority 1; looping at 1 is what keeps Player 1 on the worse cycle
        game = PriorityGame(FORK, {1: (0, 1), 2: (1, 0), 3: (5, 5)})
        good1 = strat(P1, {0: 2})
        assert verify_priority_secure(game, good1, strat(P2, {1: 1, 2: 2}))
        assert not verify_priority_secure(game, strat(P1, {0: 1}), strat(P2, {1: 1, 2: 2}))

    def test_alternating_deviation_adds_nothing(self):
        # alternating the two cycles through 0 yields minimum 1, already reachable by looping 0-1
        a = Arena((P1, P2, P2), ((1, 2), (0,), (0,)), (2, 1, 3))
        game = PriorityGame(a, {1: (0, 0), 2: (0, 0), 3: (0, 0)})
        assert enforce_priorities(a, P2, strat(P2, {1: 0, 2: 0})) == {1, 2}
        res = secure_equilibrium_priority(game)
        assert verify_priority_secure(game, *res.profile)

    def test_large_game_is_fast(self):
        game = random_priority_game(random.Random(2024), 200, priorities=8)
        start = time.perf_counter()
        res = secure_equilibrium_priority(game)
        assert verify_priority_secure(game, *res.profile)
        assert time.perf_counter() - start < 10
