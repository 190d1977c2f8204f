"""Seeded random instances for the law suites and property tests.

Every generator takes an explicit ``random.Random`` so results depend only on
the seed; nothing here touches the global random state.
"""

from __future__ import annotations

import random

from app.core.base import (
    Carrier,
    FnTable,
    make_carrier,
    payoff_domain,
    product,
    random_map,
    unit_carrier,
)
from app.core.builders import PayoffTable, payoff_from_function
from app.core.category import Interface
from app.core.context import TracedContextStructure
from app.core.intcat import IntCategory, IntMorphism, TracedContext
from app.core.lens import Lens, LensContext

ATOM_NAMES = ("a", "b", "c")
PAYOFF_VALUES = (-2, -1, 0, 1, 2)


def random_carrier(rng: random.Random, mode: str, max_atoms: int, unit_weight: float = 0.2) -> Carrier:
    """An atomic carrier with 1..max_atoms atoms, or sometimes the unit."""
    if max_atoms < 1 or rng.random() < unit_weight:
        return unit_carrier(mode)
    return make_carrier(mode, ATOM_NAMES[: rng.randint(1, min(max_atoms, len(ATOM_NAMES)))])


def random_interface(rng: random.Random, mode: str, max_atoms: int) -> Interface:
    return Interface(random_carrier(rng, mode, max_atoms), random_carrier(rng, mode, max_atoms))


def random_interfaces(rng: random.Random, mode: str, max_atoms: int, count: int) -> list[Interface]:
    return [random_interface(rng, mode, max_atoms) for _ in range(count)]


def random_table(rng: random.Random, src: Carrier, dst: Carrier) -> FnTable:
    return random_map(rng, src, dst)


def random_lens(rng: random.Random, src: Interface, dst: Interface) -> Lens:
    view = random_map(rng, src.fwd, dst.fwd)
    update = random_map(rng, product(src.fwd, dst.bwd), src.bwd)
    return Lens(src, dst, view, update)


def random_int(rng: random.Random, src: Interface, dst: Interface) -> IntMorphism:
    return IntMorphism(src, dst, random_map(rng, product(src.fwd, dst.bwd), product(dst.fwd, src.bwd)))


def random_morphism(rng: random.Random, category, src: Interface, dst: Interface):
    """A random morphism of ``category`` (lenses or Int, by the category's morphism type)."""
    if isinstance(category, IntCategory):
        return random_int(rng, src, dst)
    return random_lens(rng, src, dst)


def random_lens_context(rng: random.Random, src: Interface, dst: Interface) -> LensContext:
    return LensContext(src, dst, rng.choice(src.fwd.elements), random_map(rng, dst.fwd, dst.bwd))


def random_traced_context(rng: random.Random, src: Interface, dst: Interface) -> TracedContext:
    return TracedContext(src, dst, random_int(rng, dst, src))


def random_context(rng: random.Random, structure, src: Interface, dst: Interface):
    if isinstance(structure, TracedContextStructure):
        return random_traced_context(rng, src, dst)
    return random_lens_context(rng, src, dst)


def random_payoffs(
    rng: random.Random,
    players: list[Carrier],
    values=PAYOFF_VALUES,
) -> PayoffTable:
    """A payoff table with every total move tuple paying random integers."""
    mode = players[0].mode
    reals = payoff_domain(mode, values)
    return payoff_from_function(players, reals, lambda *moves: tuple(rng.choice(values) for _ in players))
