"""Ready-made games: bimatrix, sequential with an information map, and the fixpoint game.

Each builder wires decisions together with copies, liftings and counits, so
its equilibria come out of the composition rules. The ``*_nash`` functions
compute the same equilibria directly from the payoff formulas.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from app.core.base import (
    BOTTOM,
    DCPO,
    Carrier,
    FnTable,
    TableError,
    argmax,
    enumerate_maps,
    fold_element,
    fold_product,
    format_element,
    is_payoff_domain,
    least_fixpoint,
    product,
    unfold_element,
    unit_carrier,
    validate_table,
)
from app.core.category import Interface, unit_interface
from app.core.context import ContextStructure, structure_for, traced_contexts
from app.core.lens import lens_id, lens_structural, lens_tensor, lift
from app.core.opengame import OpenGame, og_chain, og_decision, og_feedback, og_pure, og_reshape, og_tensor


@dataclass(frozen=True)
class PayoffTable:
    """Utilities of ``n`` players over the product of their move carriers."""

    players: tuple[Carrier, ...]
    reals: Carrier
    table: FnTable

    @property
    def mode(self) -> str:
        return self.reals.mode

    @property
    def arity(self) -> int:
        return len(self.players)

    def __call__(self, *moves) -> tuple:
        return unfold_element(self.table(fold_element(moves)), self.arity)

    def utility(self, player: int, *moves):
        return self(*moves)[player]


def _has_bottom(moves) -> bool:
    return any(move is BOTTOM for move in moves)


def payoff_table(players: Sequence[Carrier], reals: Carrier, entries) -> PayoffTable:
    """Build a payoff table from ``{moves: payoffs}`` over total move tuples.

    In dcpo mode any move tuple containing ``⊥`` pays ``⊥`` to everyone;
    such rows may be omitted.
    """
    players = tuple(players)
    if not is_payoff_domain(reals):
        raise TableError(f"{reals} is not a payoff domain")
    n = len(players)
    src = fold_product(players, reals.mode)
    dst = fold_product([reals] * n, reals.mode)
    pairs = entries.items() if isinstance(entries, Mapping) else entries
    rows: dict = {}
    for moves, payoffs in pairs:
        moves, payoffs = tuple(moves), tuple(payoffs)
        if len(moves) != n or len(payoffs) != n:
            raise TableError(f"payoff row {moves!r} -> {payoffs!r} does not have {n} entries")
        key = fold_element(moves)
        if key not in src:
            raise TableError(f"{format_element(moves)} is not a move profile")
        if key in rows:
            raise TableError(f"duplicate payoff row for {format_element(moves)}")
        rows[key] = fold_element(tuple(p if p is BOTTOM else Fraction(p) for p in payoffs))

    strict = fold_element((BOTTOM,) * n)
    images = []
    for key in src.elements:
        moves = unfold_element(key, n)
        if reals.mode == DCPO and _has_bottom(moves):
            if key in rows and rows[key] != strict:
                raise TableError(f"payoff for {format_element(moves)} must be all ⊥")
            images.append(strict)
        elif key in rows:
            images.append(rows[key])
        else:
            raise TableError(f"missing payoff row for {format_element(moves)}")
    return PayoffTable(players, reals, validate_table(FnTable(src, dst, tuple(images))))


def payoff_from_function(players: Sequence[Carrier], reals: Carrier, fn) -> PayoffTable:
    """Tabulate ``fn(*moves) -> payoffs`` over every total move tuple."""
    players = tuple(players)
    total = [
        moves
        for moves in (unfold_element(key, len(players)) for key in fold_product(players, reals.mode).elements)
        if not _has_bottom(moves)
    ]
    return payoff_table(players, reals, [(moves, fn(*moves)) for moves in total])


def _crossed(payoffs: PayoffTable) -> FnTable:
    # The tensor of two decisions returns payoffs as (second, first).
    x, y = payoffs.players
    return FnTable.tabulate(product(x, y), payoffs.table.dst, lambda xy: tuple(reversed(payoffs.table(xy))))


def _wire(structure: ContextStructure, lens) -> OpenGame:
    return og_pure(structure, structure.category.from_lens(lens), name="wire")


def _two_players(payoffs: PayoffTable) -> tuple[Carrier, Carrier]:
    if payoffs.arity != 2:
        raise TableError(f"expected a two-player payoff table, got {payoffs.arity} players")
    return payoffs.players


def og_bimatrix(payoffs: PayoffTable, structure: ContextStructure | None = None) -> OpenGame:
    """Simultaneous two-player game ``I → I``; profiles are ``(x, y)``."""
    x, y = _two_players(payoffs)
    structure = structure or structure_for(payoffs.mode)
    reals = payoffs.reals
    unit = unit_carrier(payoffs.mode)
    both = product(reals, reals)

    game = og_chain(
        og_tensor(
            og_decision(structure, unit, x, reals, "player1"),
            og_decision(structure, unit, y, reals, "player2"),
        ),
        _wire(structure, lens_tensor(lift(_crossed(payoffs)), lens_id(Interface(unit, both)))),
        _wire(structure, lens_structural("counit", both)),
    )
    unit_if = unit_interface(payoffs.mode)
    game = og_reshape(game, unit_if, unit_if)
    game.name = "bimatrix"
    return game


def og_sequential(info: FnTable, payoffs: PayoffTable, structure: ContextStructure | None = None) -> OpenGame:
    """Player 1 moves, player 2 observes ``info(x)`` and moves; profiles are ``(x, τ)``."""
    x, y = _two_players(payoffs)
    if info.src != x:
        raise TableError(f"information map must start at {x}, got {info.src}")
    structure = structure or structure_for(payoffs.mode)
    reals = payoffs.reals
    unit = unit_carrier(payoffs.mode)
    both = product(reals, reals)
    keep_r = lens_id(Interface(unit, reals))

    def pure_id(interface: Interface) -> OpenGame:
        return _wire(structure, lens_id(interface))

    game = og_chain(
        og_decision(structure, unit, x, reals, "player1"),
        _wire(structure, lens_tensor(lens_structural("copy", x), keep_r)),
        _wire(structure, lens_tensor(lens_tensor(lens_id(Interface(x, unit)), lift(info)), keep_r)),
        og_tensor(
            og_tensor(pure_id(Interface(x, unit)), og_decision(structure, info.dst, y, reals, "player2")),
            pure_id(Interface(unit, reals)),
        ),
        _wire(structure, lens_tensor(lift(payoffs.table), lens_id(Interface(unit, both)))),
        _wire(structure, lens_structural("counit", both)),
    )
    unit_if = unit_interface(payoffs.mode)
    game = og_reshape(game, unit_if, unit_if)
    game.name = "sequential"
    return game


def og_fixpoint_game(payoffs: PayoffTable) -> OpenGame:
    """Two players each observing the other's move, closed into a loop (dcpo mode).

    Player 1 picks from the first carrier after seeing player 2's move and
    vice versa; the play is the least fixpoint of the loop.
    """
    x, y = _two_players(payoffs)
    structure = traced_contexts
    reals = payoffs.reals
    unit = unit_carrier(DCPO)
    both = product(reals, reals)
    xy, yx = product(x, y), product(y, x)
    swap_moves = FnTable.tabulate(xy, yx, lambda p: (p[1], p[0]))
    keep_rr = lens_id(Interface(unit, both))

    body = og_chain(
        og_tensor(
            og_decision(structure, y, x, reals, "player1"),
            og_decision(structure, x, y, reals, "player2"),
        ),
        _wire(structure, lens_tensor(lens_structural("copy", xy), keep_rr)),
        _wire(structure, lens_tensor(lens_tensor(lift(swap_moves), lift(_crossed(payoffs))), keep_rr)),
        _wire(structure, lens_tensor(lens_id(Interface(yx, unit)), lens_structural("counit", both))),
    )
    unit_if = unit_interface(DCPO)
    loop = Interface(yx, unit)
    game = og_feedback(og_reshape(body, unit_if.tensor(loop), unit_if.tensor(loop)), loop)
    game.name = "fixpoint"
    return game


# Direct formulas -------------------------------------------------------------------


def _best(carrier: Carrier, reals: Carrier, fn) -> list:
    return argmax(FnTable.tabulate(carrier, reals, fn))


def bimatrix_nash(payoffs: PayoffTable) -> list[tuple]:
    """Pure Nash equilibria ``(x, y)`` from the best-response formula."""
    x, y = _two_players(payoffs)
    reals = payoffs.reals
    return [
        (a, b)
        for a in x.elements
        for b in y.elements
        if a in _best(x, reals, lambda t: payoffs.utility(0, t, b))
        and b in _best(y, reals, lambda t: payoffs.utility(1, a, t))
    ]


def sequential_nash(info: FnTable, payoffs: PayoffTable) -> list[tuple]:
    """Nash equilibria ``(x, τ)`` of the game where player 2 sees ``info(x)``."""
    x, y = _two_players(payoffs)
    reals = payoffs.reals
    result = []
    for a in x.elements:
        for tau in enumerate_maps(info.dst, y):
            first = _best(x, reals, lambda t: payoffs.utility(0, t, tau(info(t))))
            second = _best(y, reals, lambda t: payoffs.utility(1, a, t))
            if a in first and tau(info(a)) in second:
                result.append((a, tau))
    return result


def fixpoint_plays(sigma: FnTable, tau: FnTable) -> tuple:
    """Least fixpoints ``(μx.σ(τ(x)), μy.τ(σ(y)))``."""
    return (
        least_fixpoint(sigma.dst, lambda t: sigma(tau(t))),
        least_fixpoint(tau.dst, lambda t: tau(sigma(t))),
    )


def fixpoint_nash(payoffs: PayoffTable) -> list[tuple]:
    """Equilibria ``(σ, τ)`` of the fixpoint game from the closed-form conditions."""
    x, y = _two_players(payoffs)
    reals = payoffs.reals
    result = []
    for sigma in enumerate_maps(y, x):
        for tau in enumerate_maps(x, y):
            mx, my = fixpoint_plays(sigma, tau)
            if mx in _best(x, reals, lambda t: payoffs.utility(0, t, tau(t))) and my in _best(
                y, reals, lambda t: payoffs.utility(1, sigma(t), t)
            ):
                result.append((sigma, tau))
    return result
