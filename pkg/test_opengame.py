import random
from fractions import Fraction

import pytest

from app.config.settings import settings
from app.core.base import (
    BOTTOM,
    DCPO,
    SET,
    FnTable,
    TableError,
    argmax,
    constant_table,
    enumerate_maps,
    fn_table,
    identity_table,
    make_carrier,
    payoff_domain,
    unit_carrier,
)
from app.core.builders import (
    bimatrix_nash,
    fixpoint_nash,
    fixpoint_plays,
    og_bimatrix,
    og_fixpoint_game,
    og_sequential,
    payoff_from_function,
    payoff_table,
    sequential_nash,
)
from app.core.category import Interface, InterfaceMismatchError, ModeError, unit_interface
from app.core.context import lens_set_contexts, traced_contexts, traced_decision_play
from app.core.intcat import int_id, int_symmetry, int_trace
from app.core.opengame import (
    BudgetExceededError,
    GameError,
    equilibrium_relation,
    og_decision,
    og_equilibria,
    og_feedback,
    og_pure,
    og_reshape,
    og_transpose,
    og_winning,
)
from app.utils.generators import random_payoffs

COIN = make_carrier(SET, ("H", "T"), name="Coin")
SIDE = make_carrier(SET, ("L", "R"), name="Side")
MOVE = make_carrier(SET, ("In", "Out"), name="Move")
REPLY = make_carrier(SET, ("Fight", "Accommodate"), name="Reply")
P = make_carrier(DCPO, ("a", "b"), name="P")


@pytest.fixture(autouse=True)
def _clean_overrides():
    yield
    settings.clear_overrides()


def _table(players, rows):
    values = {v for payoffs in rows.values() for v in payoffs}
    return payoff_table(players, payoff_domain(SET, values), rows)


PENNIES = _table(
    [COIN, COIN],
    {("H", "H"): (1, -1), ("H", "T"): (-1, 1), ("T", "H"): (-1, 1), ("T", "T"): (1, -1)},
)
DILEMMA = _table(
    [COIN, COIN],
    {("H", "H"): (-1, -1), ("H", "T"): (-3, 0), ("T", "H"): (0, -3), ("T", "T"): (-2, -2)},
)
MEET = _table(
    [COIN, COIN],
    {("H", "H"): (1, 1), ("H", "T"): (0, 0), ("T", "H"): (0, 0), ("T", "T"): (1, 1)},
)
ENTRY = _table(
    [MOVE, REPLY],
    {
        ("In", "Fight"): (-1, -1),
        ("In", "Accommodate"): (1, 1),
        ("Out", "Fight"): (0, 2),
        ("Out", "Accommodate"): (0, 2),
    },
)


def _moves(game, profiles):
    """Flattened profiles of unit-observing decisions as plain move tuples."""
    return {tuple(s.images[0] for s in game.flatten(p)) for p in profiles}


@pytest.mark.parametrize(
    "payoffs, expected",
    [
        (PENNIES, set()),
        (DILEMMA, {("T", "T")}),
        (MEET, {("H", "H"), ("T", "T")}),
    ],
)
def test_bimatrix_equilibria(payoffs, expected):
    game = og_bimatrix(payoffs)
    assert game.is_scalar()
    found = _moves(game, og_equilibria(game))
    assert found == expected
    assert found == set(bimatrix_nash(payoffs))


def test_bimatrix_matches_best_responses_on_random_payoffs():
    rng = random.Random(42)
    for _ in range(100):
        payoffs = random_payoffs(rng, [COIN, SIDE])
        game = og_bimatrix(payoffs)
        assert _moves(game, og_equilibria(game)) == set(bimatrix_nash(payoffs))


def _sequential(game, profiles):
    return {(sigma.images[0], tau.images) for sigma, tau in (game.flatten(p) for p in profiles)}


def _subgame_perfect(info, payoffs):
    """Backward induction: the follower best-responds at every observation."""
    reals = payoffs.reals
    x, y = payoffs.players
    result = set()
    for tau in enumerate_maps(info.dst, y):
        credible = all(
            tau(info(a)) in argmax(FnTable.tabulate(y, reals, lambda t: payoffs.utility(1, a, t))) for a in x.elements
        )
        if not credible:
            continue
        leader = FnTable.tabulate(x, reals, lambda t: payoffs.utility(0, t, tau(info(t))))
        result.update((a, tau.images) for a in argmax(leader))
    return result


def test_sequential_game_finds_every_nash_equilibrium():
    info = identity_table(MOVE)
    game = og_sequential(info, ENTRY)
    nash = _sequential(game, og_equilibria(game))
    assert nash == {(a, tau.images) for a, tau in sequential_nash(info, ENTRY)}
    assert len(nash) == 4


def test_sequential_game_keeps_non_credible_threats():
    info = identity_table(MOVE)
    game = og_sequential(info, ENTRY)
    nash = _sequential(game, og_equilibria(game))
    perfect = _subgame_perfect(info, ENTRY)
    assert len(perfect) == 2
    assert perfect < nash
    for move, replies in nash - perfect:
        assert move == "Out"
        assert replies[MOVE.index("In")] == "Fight"


def test_sequential_game_with_no_information_is_simultaneous():
    info = constant_table(MOVE, unit_carrier(SET), "*")
    game = og_sequential(info, ENTRY)
    found = {(sigma.images[0], tau("*")) for sigma, tau in (game.flatten(p) for p in og_equilibria(game))}
    assert found == set(bimatrix_nash(ENTRY))
    assert found == {("In", "Accommodate"), ("Out", "Fight")}


def test_sequential_game_checks_the_information_map():
    with pytest.raises(TableError):
        og_sequential(identity_table(REPLY), ENTRY)


# The fixpoint game -----------------------------------------------------------------

MATCH = payoff_from_function([P, P], payoff_domain(DCPO, [0, 1]), lambda x, y: (1, 0) if x == y else (0, 1))
ID = identity_table(P)
CONST_A = constant_table(P, P, "a")
CONST_B = constant_table(P, P, "b")
CONJ = fn_table(P, P, {BOTTOM: BOTTOM, "a": "b", "b": "a"})


@pytest.fixture(scope="module")
def fixpoint_game():
    return og_fixpoint_game(MATCH)


def test_fixpoint_game_shape(fixpoint_game):
    assert fixpoint_game.is_scalar()
    assert fixpoint_game.strategies.size == 121
    assert fixpoint_game.strategies.labels() == ["player1", "player2"]


def test_fixpoint_game_equilibria(fixpoint_game):
    found = {fixpoint_game.flatten(p) for p in og_equilibria(fixpoint_game)}
    assert found == set(fixpoint_nash(MATCH))
    for profile in [(ID, CONST_A), (ID, CONST_B), (CONST_A, CONJ), (CONST_B, CONJ)]:
        assert profile in found
    assert (CONST_A, CONST_B) not in found
    assert (ID, CONJ) not in found


def test_fixpoint_plays():
    assert fixpoint_plays(CONST_A, CONST_B) == ("a", "b")
    assert fixpoint_plays(ID, CONST_A) == ("a", "a")
    assert fixpoint_plays(ID, CONJ) == (BOTTOM, BOTTOM)


def test_fixpoint_outcomes(fixpoint_game):
    profile = next(p for p in fixpoint_game.profiles() if fixpoint_game.flatten(p) == (ID, CONST_A))
    ctx = traced_contexts.trivial(fixpoint_game.src, fixpoint_game.dst)
    first, second = fixpoint_game.outcomes(profile, ctx)
    assert (first.player, first.move, first.payoff, first.best) == ("player1", "a", Fraction(1), ("a",))
    assert (second.player, second.move, second.payoff, second.best) == ("player2", "a", Fraction(0), ("a", "b"))
    assert first.ok and second.ok


def test_stuck_profile_is_not_an_equilibrium(fixpoint_game):
    profile = next(p for p in fixpoint_game.profiles() if fixpoint_game.flatten(p) == (ID, CONJ))
    ctx = traced_contexts.trivial(fixpoint_game.src, fixpoint_game.dst)
    plays = fixpoint_game.outcomes(profile, ctx)
    assert [play.move for play in plays] == [BOTTOM, BOTTOM]
    assert not fixpoint_game.check(profile, ctx)


def test_outcomes_reuse_the_plays_checked_for_equilibria(fixpoint_game):
    ctx = traced_contexts.trivial(fixpoint_game.src, fixpoint_game.dst)
    equilibria = og_equilibria(fixpoint_game, ctx)
    hits = traced_decision_play.cache_info().hits
    for profile in equilibria:
        assert all(play.ok for play in fixpoint_game.outcomes(profile, ctx))
    assert traced_decision_play.cache_info().hits >= hits + 2 * len(equilibria)


# Budgets, contexts and winning strategies ---------------------------------------------


def test_profile_budget(fixpoint_game):
    with pytest.raises(BudgetExceededError) as info:
        og_equilibria(fixpoint_game, budget=100)
    assert (info.value.size, info.value.budget) == (121, 100)


def test_decision_budget_comes_from_settings():
    settings.set_override("MAX_PROFILES", 3)
    with pytest.raises(BudgetExceededError):
        og_decision(lens_set_contexts, COIN, COIN, payoff_domain(SET, [0]))


def test_open_game_needs_a_context():
    game = og_decision(lens_set_contexts, unit_carrier(SET), COIN, payoff_domain(SET, [0, 1]))
    with pytest.raises(GameError):
        og_equilibria(game)


def test_winning_strategies_of_a_lone_decision():
    unit = unit_carrier(SET)
    indifferent = og_decision(lens_set_contexts, unit, COIN, payoff_domain(SET, [0]))
    assert len(og_winning(indifferent)) == 2
    torn = og_decision(lens_set_contexts, unit, COIN, payoff_domain(SET, [0, 1]))
    assert og_winning(torn) == []


def test_context_budget():
    game = og_decision(lens_set_contexts, unit_carrier(SET), COIN, payoff_domain(SET, [0, 1]))
    with pytest.raises(BudgetExceededError):
        og_winning(game, budget=3)


def test_transpose_swaps_history_and_continuation():
    reals = payoff_domain(DCPO, [0, 1])
    game = og_decision(traced_contexts, unit_carrier(DCPO), P, reals, "p")
    flipped = og_transpose(game)
    assert flipped.src == Interface(reals, P)
    assert flipped.dst == Interface(unit_carrier(DCPO), unit_carrier(DCPO))
    contexts = list(traced_contexts.iter_contexts(game.src, game.dst))
    assert equilibrium_relation(game, contexts) == equilibrium_relation(og_transpose(flipped), contexts)


def test_feedback_of_a_symmetry_is_the_identity():
    for wire in (Interface(P, unit_carrier(DCPO)), Interface(P, P)):
        swap = og_pure(traced_contexts, int_symmetry(wire, wire))
        looped = og_feedback(swap, wire)
        assert (looped.src, looped.dst) == (wire, wire)
        assert looped.name == "feedback(pure)"
        (profile,) = looped.profiles()
        assert looped.label(profile) == int_id(wire)
        assert looped.label(profile) == int_trace(int_symmetry(wire, wire))


def test_feedback_over_the_unit_passes_the_game_through():
    reals = payoff_domain(DCPO, [0, 1])
    game = og_decision(traced_contexts, unit_carrier(DCPO), P, reals, "p")
    unit = unit_interface(DCPO)
    looped = og_feedback(og_reshape(game, game.src.tensor(unit), game.dst.tensor(unit)), unit)
    assert (looped.src, looped.dst) == (game.src, game.dst)
    assert looped.strategies.labels() == ["p"]
    assert looped.strategies.size == game.strategies.size
    for sigma in game.profiles():
        assert looped.label(looped.strategies.unflatten([sigma])) == game.label(sigma)
    contexts = list(traced_contexts.iter_contexts(game.src, game.dst))
    assert equilibrium_relation(looped, contexts) == equilibrium_relation(game, contexts)


def test_feedback_checks_its_loop():
    wire = Interface(P, unit_carrier(DCPO))
    with pytest.raises(GameError):
        og_feedback(og_pure(traced_contexts, int_id(wire)), wire)
    with pytest.raises(InterfaceMismatchError):
        og_feedback(og_pure(traced_contexts, int_id(wire.tensor(wire))), Interface(P, P))
    game = og_decision(lens_set_contexts, unit_carrier(SET), COIN, payoff_domain(SET, [0]))
    with pytest.raises(ModeError):
        og_feedback(game, unit_interface(SET))
