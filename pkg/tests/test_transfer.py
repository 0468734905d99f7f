import random

import pytest

from eqtransfer.games import (
    MatrixGame,
    MatrixGameForm,
    Player,
    Profile,
    WinLoseLabeling,
    enumerate_enforceable,
    generate_tree_game,
    is_nash,
    winning_strategy,
)
from eqtransfer.poset import BinaryRelation, OrderError, Poset, bits, lift_less, lift_less_poly, validate_order
from eqtransfer.transfer import (
    MatrixOracle,
    NotDetermined,
    OracleUnsound,
    equilibrium_transfer,
    matrix_oracle,
    maximal_enforceable,
    maximal_enforceable_greedy,
    maximal_enforceable_naive,
)
from fixtures import PAYOFF_GAMES, FORMS, payoff_game
from oracles import random_linear_order, random_poset


def all_posets(n):
    slots = [(x, y) for x in range(n) for y in range(n) if x != y]
    out = []
    for chosen in range(1 << len(slots)):
        r = BinaryRelation.from_pairs(n, [slots[k] for k in range(len(slots)) if chosen >> k & 1])
        try:
            out.append(validate_order(r))
        except OrderError:
            pass
    return out


def random_game(seed):
    rng = random.Random(seed)
    form = generate_tree_game(seed, depth=rng.randint(2, 4), branching=rng.randint(2, 3), outcomes=5)
    n = form.outcomes
    return MatrixGame(form, random_poset(rng, n), random_poset(rng, n))


class TestMatrixOracle:
    def test_answers_every_labeling(self):
        oracle = matrix_oracle(FORMS[4])
        for w in range(8):
            wl = WinLoseLabeling(w)
            assert (oracle.decide(wl), oracle.strategy(wl)) == winning_strategy(FORMS[4], wl)
        assert (oracle.decisions, oracle.extractions) == (8, 8)

    def test_undetermined_labeling_raises(self):
        oracle = matrix_oracle(FORMS[1])
        with pytest.raises(NotDetermined) as err:
            oracle.decide(WinLoseLabeling(0b10))
        assert err.value.labeling == WinLoseLabeling(0b10)
        assert isinstance(err.value, OracleUnsound)

    def test_trivial_form(self):
        oracle = matrix_oracle(MatrixGameForm(((0,),), ("o",)))
        assert oracle.decide(WinLoseLabeling(1)) is Player.ONE
        assert oracle.decide(WinLoseLabeling(0)) is Player.TWO


class TestMaximalEnforceable:
    def test_naive_form3_empty_order(self):
        # with no preference the lift is reverse strict inclusion: {Y} (mask 2) and {X,Z} (mask 5) tie
        assert maximal_enforceable_naive(Poset.antichain(3), matrix_oracle(FORMS[3])) == 0b010

    def test_single_outcome(self):
        form = MatrixGameForm(((0, 0),), ("o",))
        oracle = matrix_oracle(form)
        assert maximal_enforceable_naive(Poset.antichain(1), oracle) == 1
        oracle.reset_counts()
        assert maximal_enforceable_greedy(Poset.antichain(1), oracle) == 1
        assert oracle.decisions == 1

    @pytest.mark.parametrize("pref1", all_posets(3), ids=lambda p: str(p.pairs()))
    def test_form4_greedy_is_maximal(self, pref1):
        greedy = maximal_enforceable_greedy(pref1, matrix_oracle(FORMS[4]))
        naive = maximal_enforceable_naive(pref1, matrix_oracle(FORMS[4]))
        assert not lift_less(pref1, greedy, naive)
        family = enumerate_enforceable(FORMS[4], Player.ONE)
        assert greedy in family
        assert not any(lift_less_poly(pref1, greedy, other) for other in family)

    @pytest.mark.parametrize("seed", range(60))
    def test_naive_and_greedy_on_tree_games(self, seed):
        g = random_game(seed)
        family = enumerate_enforceable(g.form, Player.ONE)
        for mode in ("naive", "greedy"):
            found = maximal_enforceable(g.pref1, matrix_oracle(g.form), mode)
            assert found in family
            assert not any(lift_less_poly(g.pref1, found, other) for other in family)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            maximal_enforceable(Poset.antichain(1), matrix_oracle(MatrixGameForm(((0,),), ("o",))), "binary")


class TestEquilibriumTransfer:
    def test_constant_row(self):
        form = MatrixGameForm(((0, 1, 2), (3, 3, 3)), ("a", "b", "c", "d"))
        for pref1 in (Poset.chain(4), Poset.antichain(4)):
            for pref2 in (Poset.chain(4), Poset.from_pairs(4, [(3, 0)])):
                g = MatrixGame(form, pref1, pref2)
                res = equilibrium_transfer(g, matrix_oracle(form))
                assert is_nash(g, Profile(*res.profile))

    @pytest.mark.parametrize("mode", ["naive", "greedy"])
    def test_undetermined_payoff_game3(self, mode):
        g3, _ = payoff_game(PAYOFF_GAMES[3])
        with pytest.raises(OracleUnsound):
            equilibrium_transfer(g3, matrix_oracle(g3.form), mode)

    @pytest.mark.parametrize("seed", range(150))
    def test_tree_games(self, seed):
        g = random_game(seed)
        n = g.form.outcomes
        for mode in ("naive", "greedy"):
            oracle = matrix_oracle(g.form)
            res = equilibrium_transfer(g, oracle, mode)
            s1, s2 = res.profile
            assert is_nash(g, Profile(s1, s2))
            assert res.M >> res.m & 1 and not res.Mprime >> res.m & 1
            assert lift_less(g.pref1, res.M, res.Mprime)
            # stability, one player at a time
            top2 = [x for x in bits(oracle.enforced(Player.ONE, s1)) if g.pref2.less(res.m, x)]
            top1 = [x for x in bits(oracle.enforced(Player.TWO, s2)) if g.pref1.less(res.m, x)]
            assert top1 == top2 == []
            assert res.extractions == 2
            assert res.decisions == (n if mode == "greedy" else 1 << n) + 2

    @pytest.mark.parametrize("seed", range(100))
    def test_greedy_and_naive_are_incomparable(self, seed):
        g = random_game(seed)
        greedy = equilibrium_transfer(g, matrix_oracle(g.form), "greedy").M
        naive = equilibrium_transfer(g, matrix_oracle(g.form), "naive").M
        assert not lift_less(g.pref1, greedy, naive)
        assert not lift_less(g.pref1, naive, greedy)

    @pytest.mark.parametrize("seed", range(100))
    def test_antagonistic_role_swap(self, seed):
        rng = random.Random(seed)
        form = generate_tree_game(seed, depth=rng.randint(2, 3), branching=3, outcomes=5)
        pref1 = random_linear_order(rng, form.outcomes)
        pref2 = Poset.from_pairs(form.outcomes, [(y, x) for x, y in pref1.pairs()])
        m = equilibrium_transfer(MatrixGame(form, pref1, pref2), matrix_oracle(form)).m
        swapped = MatrixGame(form.transpose(), pref2, pref1)
        res = equilibrium_transfer(swapped, matrix_oracle(swapped.form))
        assert is_nash(MatrixGame(form, pref1, pref2), Profile(res.profile[1], res.profile[0]))
        assert not pref1.less(m, res.m) and not pref1.less(res.m, m)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            equilibrium_transfer(MatrixGame(FORMS[3], Poset.antichain(3), Poset.antichain(3)), matrix_oracle(FORMS[1]))


class LyingOracle(MatrixOracle):
    """Claims Player 1 wins everything."""

    def _decide(self, wl):
        return Player.ONE

    def _strategy(self, wl):
        return 0


class WrongReplyOracle(MatrixOracle):
    """Answers truthfully but hands Player 2 a losing column."""

    def _strategy(self, wl):
        winner, s = self._certificate(wl)
        return s if winner is Player.ONE else (s + 1) % self.form.cols


def test_lying_oracle_is_caught():
    form = MatrixGameForm(((0, 1), (1, 0)), ("a", "b"))
    with pytest.raises(OracleUnsound):
        equilibrium_transfer(MatrixGame(form, Poset.chain(2), Poset.chain(2)), LyingOracle(form))


def test_wrong_strategy_is_caught():
    # c < b < a for Player 1: M = {a, b} via row 0, m = a, and Player 2 must answer with column 0
    form = MatrixGameForm(((0, 1), (2, 2)), ("a", "b", "c"))
    g = MatrixGame(form, Poset.from_pairs(3, [(2, 1), (1, 0), (2, 0)]), Poset.antichain(3))
    assert equilibrium_transfer(g, matrix_oracle(form)).profile == (0, 0)
    with pytest.raises(OracleUnsound):
        equilibrium_transfer(g, WrongReplyOracle(form))
