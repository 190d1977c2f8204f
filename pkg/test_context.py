import random
from fractions import Fraction

import pytest

from app.core.base import BOTTOM, DCPO, SET, fn_table, identity_table, make_carrier, payoff_domain, unit_carrier
from app.core.category import Interface, InterfaceMismatchError, ModeError, unit_interface
from app.core.context import (
    lens_dcpo_contexts,
    lens_set_contexts,
    structure_for,
    traced_contexts,
)
from app.core.intcat import int_from_function, lens_to_int, lensctx_to_intctx
from app.core.lens import LensContext, lens_from_functions, lift
from app.utils.generators import random_interfaces, random_lens, random_lens_context

COIN = make_carrier(SET, ("H", "T"), name="Coin")
REALS = payoff_domain(SET, [0, 1, 2])
UNIT = unit_carrier(SET)

P = make_carrier(DCPO, ("a", "b"), name="P")
DREALS = payoff_domain(DCPO, [0, 1])
DUNIT = unit_carrier(DCPO)


def _coin_payoff(entries):
    return fn_table(COIN, REALS, {k: Fraction(v) for k, v in entries.items()})


def test_ctx_map_pushes_history_forward_and_continuation_back():
    flip = fn_table(COIN, COIN, {"H": "T", "T": "H"})
    lam = lift(flip)
    # heads always pays 2; tails passes the outer payoff through
    mu = lens_from_functions(
        Interface(COIN, REALS),
        Interface(COIN, REALS),
        lambda y: y,
        lambda y, r: Fraction(2) if y == "H" else r,
    )
    ctx = LensContext(Interface(COIN, UNIT), Interface(COIN, REALS), "H", _coin_payoff({"H": 0, "T": 1}))
    moved = lens_set_contexts.ctx_map(lam, mu, ctx)
    assert moved.src == lam.dst and moved.dst == mu.src
    assert moved.history == "T"
    assert moved.continuation("H") == Fraction(2)
    assert moved.continuation("T") == Fraction(1)


def test_ctx_map_checks_interfaces():
    ctx = LensContext(Interface(COIN, UNIT), Interface(COIN, REALS), "H", _coin_payoff({"H": 0, "T": 1}))
    lam = lift(identity_table(COIN))
    with pytest.raises(InterfaceMismatchError):
        lens_set_contexts.ctx_map(lam, lam, ctx)


def _tensor_context():
    a = Interface(COIN, UNIT)
    b = Interface(COIN, REALS)
    src, dst = a.tensor(a), b.tensor(b)
    # backward order is (second player's payoff, first player's payoff)
    scores = {
        ("H", "H"): (0, 1),
        ("H", "T"): (1, 0),
        ("T", "H"): (1, 0),
        ("T", "T"): (2, 1),
    }
    k = fn_table(dst.fwd, dst.bwd, {y: tuple(Fraction(v) for v in r) for y, r in scores.items()})
    return a, b, LensContext(src, dst, ("T", "H"), k)


def _constant_move(a, b, move):
    return lens_from_functions(a, b, lambda x: move, lambda x, r: UNIT.point())


def test_proj_left_fixes_the_right_move():
    a, b, ctx = _tensor_context()
    left = lens_set_contexts.proj_left(_constant_move(a, b, "T"), ctx)
    assert left.src == a and left.dst == b
    assert left.history == "T"
    assert [left.continuation(y) for y in COIN.elements] == [Fraction(0), Fraction(1)]


def test_proj_right_matches_the_direct_formula():
    a, b, ctx = _tensor_context()
    m1 = _constant_move(a, b, "H")
    right = lens_set_contexts.proj_right(m1, ctx)
    assert right == lens_set_contexts.proj_right_direct(m1, ctx)
    assert right.history == "H"
    assert [right.continuation(y) for y in COIN.elements] == [Fraction(0), Fraction(1)]


@pytest.mark.parametrize("structure", [lens_set_contexts, lens_dcpo_contexts])
def test_derived_projection_agrees_on_random_lenses(structure):
    rng = random.Random(11)
    for _ in range(40):
        a1, a2, b1, b2 = random_interfaces(rng, structure.mode, 2, 4)
        ctx = random_lens_context(rng, a1.tensor(a2), b1.tensor(b2))
        m1 = random_lens(rng, a1, b1)
        assert structure.proj_right(m1, ctx) == structure.proj_right_direct(m1, ctx)


def test_traced_operations_extend_the_lens_ones():
    rng = random.Random(12)
    for _ in range(30):
        a1, a2, b1, b2 = random_interfaces(rng, DCPO, 2, 4)
        ctx = random_lens_context(rng, a1.tensor(a2), b1.tensor(b2))
        traced = lensctx_to_intctx(ctx)
        m1, m2 = random_lens(rng, a1, b1), random_lens(rng, a2, b2)
        assert traced_contexts.proj_left(lens_to_int(m2), traced) == lensctx_to_intctx(
            lens_dcpo_contexts.proj_left(m2, ctx)
        )
        assert traced_contexts.proj_right(lens_to_int(m1), traced) == lensctx_to_intctx(
            lens_dcpo_contexts.proj_right(m1, ctx)
        )

        c, d, d2 = random_interfaces(rng, DCPO, 2, 3)
        plain = random_lens_context(rng, c, d)
        lam, mu = random_lens(rng, c, d2), random_lens(rng, d2, d)
        assert traced_contexts.ctx_map(lens_to_int(lam), lens_to_int(mu), lensctx_to_intctx(plain)) == (
            lensctx_to_intctx(lens_dcpo_contexts.ctx_map(lam, mu, plain))
        )


def test_trivial_contexts():
    unit = unit_interface(SET)
    trivial = lens_set_contexts.trivial(unit, unit)
    assert trivial.history == "*"
    assert trivial.continuation("*") == "*"
    dunit = unit_interface(DCPO)
    assert traced_contexts.trivial(dunit, dunit).morphism(BOTTOM, BOTTOM) == (BOTTOM, BOTTOM)


def test_traced_from_parts_is_the_embedding():
    src, dst = Interface(DUNIT, DUNIT), Interface(P, DREALS)
    k = fn_table(P, DREALS, {BOTTOM: BOTTOM, "a": Fraction(1), "b": Fraction(0)})
    assert traced_contexts.from_parts(src, dst, BOTTOM, k) == lensctx_to_intctx(LensContext(src, dst, BOTTOM, k))


def test_enumerating_lens_contexts():
    src, dst = Interface(COIN, UNIT), Interface(COIN, payoff_domain(SET, [0, 1]))
    contexts = list(lens_set_contexts.iter_contexts(src, dst))
    assert len(contexts) == lens_set_contexts.count_contexts(src, dst) == 8
    assert len(set(contexts)) == 8


def test_lens_decision_play():
    ctx = LensContext(Interface(COIN, UNIT), Interface(COIN, REALS), "T", _coin_payoff({"H": 2, "T": 1}))
    echo = identity_table(COIN)
    play = lens_set_contexts.decision_play("guesser", echo, ctx)
    assert (play.player, play.history, play.move) == ("guesser", "T", "T")
    assert play.payoff == Fraction(1)
    assert play.best == ("H",)
    assert not play.ok


def test_traced_decision_play_solves_the_self_reference():
    src, dst = Interface(P, DUNIT), Interface(P, DREALS)
    k = fn_table(P, DREALS, {BOTTOM: BOTTOM, "a": Fraction(0), "b": Fraction(1)})
    # the decision observes its own move
    loop = int_from_function(dst, src, lambda y, s: (y, k(y)))
    ctx = traced_contexts.from_table(src, dst, loop.table)

    stuck = traced_contexts.decision_play("p", identity_table(P), ctx)
    assert stuck.move is BOTTOM and stuck.payoff is BOTTOM
    assert stuck.best == ("b",) and not stuck.ok

    const_b = fn_table(P, P, {BOTTOM: "b", "a": "b", "b": "b"})
    settled = traced_contexts.decision_play("p", const_b, ctx)
    assert (settled.history, settled.move, settled.payoff) == ("b", "b", Fraction(1))
    assert settled.ok


def test_structure_for_picks_the_default():
    assert structure_for(SET) is lens_set_contexts
    assert structure_for(DCPO) is traced_contexts
    assert structure_for(DCPO, traced=False) is lens_dcpo_contexts
    with pytest.raises(ModeError):
        structure_for("graph")
