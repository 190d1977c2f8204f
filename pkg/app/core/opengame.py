"""Open games over an abstract context structure.

An ``OpenGame`` carries a strategy space, a labelling of profiles by morphisms
of the structure's category, and an equilibrium predicate against contexts.
The predicate is computed as a stream of per-decision plays, so a profile is
rejected as soon as one decision is not best-responding.
"""

from __future__ import annotations

import itertools
import logging
from abc import ABC, abstractmethod
from collections import Counter
from collections.abc import Callable, Iterator
from dataclasses import dataclass

from app.config.settings import settings
from app.core.base import (
    Carrier,
    EngineError,
    FnTable,
    count_maps_upper_bound,
    enumerate_maps,
    product,
    unit_carrier,
)
from app.core.category import Interface, ModeError, require_coherent, require_same
from app.core.context import ContextStructure, DecisionPlay, TracedContextStructure
from app.core.intcat import int_eps, int_eta, int_transpose, transpose_context
from app.core.lens import Lens

logger = logging.getLogger(__name__)

TRIVIAL_PROFILE = "*"


class GameError(EngineError):
    """Ill-formed game construction or query."""


class BudgetExceededError(EngineError):
    """A brute-force enumeration would exceed its configured budget."""

    def __init__(self, kind: str, size: int, budget: int):
        super().__init__(f"{kind} budget exceeded: {size} > {budget}")
        self.kind = kind
        self.size = size
        self.budget = budget


# Strategy spaces ----------------------------------------------------------------


class StrategySpace(ABC):
    """A finite tree of atomic strategy sets; profiles are nested pairs."""

    @property
    @abstractmethod
    def size(self) -> int: ...

    @abstractmethod
    def iter_profiles(self) -> Iterator: ...

    @abstractmethod
    def leaves(self, path: str = "") -> list[tuple[str, Leaf]]: ...

    @abstractmethod
    def _flatten(self, profile, out: list) -> None: ...

    @abstractmethod
    def _unflatten(self, values: list): ...

    @property
    def is_trivial(self) -> bool:
        return all(leaf.trivial for _, leaf in self.leaves())

    def flatten(self, profile) -> tuple:
        """The profile's non-trivial strategies, left to right."""
        out: list = []
        self._flatten(profile, out)
        return tuple(out)

    def unflatten(self, values) -> object:
        values = list(values)
        profile = self._unflatten(values)
        if values:
            raise GameError(f"too many strategies for this space: {len(values)} left over")
        return profile

    def labels(self) -> list[str]:
        """Player names of the non-trivial leaves; repeated names get their tree path."""
        leaves = [(path, leaf) for path, leaf in self.leaves() if not leaf.trivial]
        counts = Counter(leaf.name for _, leaf in leaves)
        return [leaf.name if counts[leaf.name] == 1 else f"{leaf.name}@{path or '.'}" for path, leaf in leaves]


@dataclass(frozen=True)
class Leaf(StrategySpace):
    name: str
    values: tuple
    trivial: bool = False

    @property
    def size(self) -> int:
        return len(self.values)

    def iter_profiles(self) -> Iterator:
        return iter(self.values)

    def leaves(self, path: str = "") -> list[tuple[str, Leaf]]:
        return [(path, self)]

    def _flatten(self, profile, out: list) -> None:
        if not self.trivial:
            out.append(profile)

    def _unflatten(self, values: list):
        if self.trivial:
            return self.values[0]
        if not values:
            raise GameError(f"missing strategy for {self.name}")
        return values.pop(0)


@dataclass(frozen=True)
class Pair(StrategySpace):
    left: StrategySpace
    right: StrategySpace

    @property
    def size(self) -> int:
        return self.left.size * self.right.size

    def iter_profiles(self) -> Iterator:
        return itertools.product(self.left.iter_profiles(), self.right.iter_profiles())

    def leaves(self, path: str = "") -> list[tuple[str, Leaf]]:
        return self.left.leaves(path + "L") + self.right.leaves(path + "R")

    def _flatten(self, profile, out: list) -> None:
        self.left._flatten(profile[0], out)
        self.right._flatten(profile[1], out)

    def _unflatten(self, values: list):
        left = self.left._unflatten(values)
        return (left, self.right._unflatten(values))


PURE_SPACE = Leaf(TRIVIAL_PROFILE, (TRIVIAL_PROFILE,), trivial=True)


# Open games ---------------------------------------------------------------------


class OpenGame:
    def __init__(
        self,
        structure: ContextStructure,
        src: Interface,
        dst: Interface,
        strategies: StrategySpace,
        label_fn: Callable,
        plays_fn: Callable,
        name: str = "game",
    ):
        self.structure = structure
        self.src = src
        self.dst = dst
        self.strategies = strategies
        self.name = name
        self._label_fn = label_fn
        self._plays_fn = plays_fn
        self._labels: dict = {}

    @property
    def mode(self) -> str:
        return self.structure.mode

    @property
    def category(self):
        return self.structure.category

    @property
    def pure(self) -> bool:
        return self.strategies.is_trivial

    def is_scalar(self) -> bool:
        return self.src.is_scalar() and self.dst.is_scalar()

    def label(self, profile):
        try:
            return self._labels[profile]
        except KeyError:
            morphism = self._labels[profile] = self._label_fn(profile)
            return morphism

    def plays(self, profile, ctx) -> Iterator[DecisionPlay]:
        """Per-decision plays, lazily, in strategy-leaf order."""
        return self._plays_fn(profile, ctx)

    def check(self, profile, ctx) -> bool:
        return all(play.ok for play in self.plays(profile, ctx))

    def outcomes(self, profile, ctx) -> list[DecisionPlay]:
        self.require_context(ctx)
        return list(self.plays(profile, ctx))

    def profiles(self) -> Iterator:
        return self.strategies.iter_profiles()

    def flatten(self, profile) -> tuple:
        return self.strategies.flatten(profile)

    def require_context(self, ctx) -> None:
        require_same(self.src, ctx.src, f"context for {self.name} has the wrong source")
        require_same(self.dst, ctx.dst, f"context for {self.name} has the wrong target")

    def __repr__(self) -> str:
        return f"OpenGame({self.name}: {self.src} -> {self.dst}, |Σ|={self.strategies.size})"


def _no_plays(profile, ctx) -> Iterator[DecisionPlay]:
    return iter(())


def _same_structure(first: OpenGame, second: OpenGame) -> ContextStructure:
    if first.structure is not second.structure:
        raise ModeError(f"cannot combine a {first.structure.name} game with a {second.structure.name} game")
    return first.structure


def og_pure(structure: ContextStructure, morphism, name: str | None = None) -> OpenGame:
    """Zero-player game: one profile, always in equilibrium."""
    return OpenGame(
        structure,
        morphism.src,
        morphism.dst,
        PURE_SPACE,
        lambda profile: morphism,
        _no_plays,
        name=name or "pure",
    )


def og_decision(
    structure: ContextStructure,
    observe: Carrier,
    choose: Carrier,
    reals: Carrier,
    player: str = "player",
) -> OpenGame:
    """One player observes ``observe`` and picks from ``choose``: ``(X, 1) → (Y, R)``."""
    mode = structure.mode
    for carrier in (observe, choose, reals):
        if carrier.mode != mode:
            raise ModeError(f"decision carrier {carrier} is not in {mode} mode")
    if observe.size == 0 or choose.size == 0:
        raise GameError(f"decision {player} needs nonempty carriers")
    bound = count_maps_upper_bound(observe, choose)
    if bound > settings.max_profiles:
        raise BudgetExceededError("profiles", bound, settings.max_profiles)

    unit = unit_carrier(mode)
    point = unit.point()
    src = Interface(observe, unit)
    dst = Interface(choose, reals)
    strategies = Leaf(player, tuple(enumerate_maps(observe, choose)))
    no_update = FnTable.tabulate(product(observe, reals), unit, lambda xr: point)
    logger.debug("decision %s: %s -> %s, %d strategies", player, observe, choose, strategies.size)

    def label(sigma: FnTable):
        return structure.category.from_lens(Lens(src, dst, sigma, no_update))

    def plays(sigma: FnTable, ctx) -> Iterator[DecisionPlay]:
        yield structure.decision_play(player, sigma, ctx)

    return OpenGame(structure, src, dst, strategies, label, plays, name=player)


def og_seq(first: OpenGame, second: OpenGame) -> OpenGame:
    """``first`` then ``second``; each is judged in the context the other leaves it."""
    structure = _same_structure(first, second)
    require_same(first.dst, second.src, "cannot compose games")
    category = structure.category
    src_id = category.identity(first.src)
    dst_id = category.identity(second.dst)

    def label(profile):
        sigma, tau = profile
        return category.compose(second.label(tau), first.label(sigma))

    def plays(profile, ctx) -> Iterator[DecisionPlay]:
        sigma, tau = profile
        if not first.pure:
            yield from first.plays(sigma, structure.ctx_map(src_id, second.label(tau), ctx))
        if not second.pure:
            yield from second.plays(tau, structure.ctx_map(first.label(sigma), dst_id, ctx))

    return OpenGame(
        structure,
        first.src,
        second.dst,
        Pair(first.strategies, second.strategies),
        label,
        plays,
        name=f"({first.name} ; {second.name})",
    )


def og_tensor(first: OpenGame, second: OpenGame) -> OpenGame:
    """Simultaneous play; each side sees the other through ``/`` and ``\\``."""
    structure = _same_structure(first, second)
    category = structure.category

    def label(profile):
        sigma, tau = profile
        return category.tensor(first.label(sigma), second.label(tau))

    def plays(profile, ctx) -> Iterator[DecisionPlay]:
        sigma, tau = profile
        if not first.pure:
            yield from first.plays(sigma, structure.proj_left(second.label(tau), ctx))
        if not second.pure:
            yield from second.plays(tau, structure.proj_right(first.label(sigma), ctx))

    return OpenGame(
        structure,
        first.src.tensor(second.src),
        first.dst.tensor(second.dst),
        Pair(first.strategies, second.strategies),
        label,
        plays,
        name=f"({first.name} || {second.name})",
    )


def og_then(first: OpenGame, second: OpenGame) -> OpenGame:
    """Sequential composition up to canonical re-bracketing of the middle interface."""
    if first.dst == second.src:
        return og_seq(first, second)
    require_coherent(first.dst, second.src)
    iso = og_pure(first.structure, first.category.canonical(first.dst, second.src), name="iso")
    return og_seq(og_seq(first, iso), second)


def og_chain(*games: OpenGame) -> OpenGame:
    result = games[0]
    for game in games[1:]:
        result = og_then(result, game)
    return result


def og_collapse(game: OpenGame) -> OpenGame:
    """A zero-player composite as a single ``og_pure`` of its one label."""
    if not game.pure:
        raise GameError(f"{game.name} has players and cannot be collapsed")
    return og_pure(game.structure, game.label(next(game.profiles())), name=game.name)


def og_reshape(game: OpenGame, src: Interface, dst: Interface) -> OpenGame:
    """Wrap ``game`` in canonical isos so it runs ``src → dst``."""
    result = game
    if src != game.src:
        require_coherent(src, game.src)
        result = og_seq(og_pure(game.structure, game.category.canonical(src, game.src), name="iso"), result)
    if dst != game.dst:
        require_coherent(game.dst, dst)
        result = og_seq(result, og_pure(game.structure, game.category.canonical(game.dst, dst), name="iso"))
    return result


def _require_traced(game: OpenGame, what: str) -> TracedContextStructure:
    if not isinstance(game.structure, TracedContextStructure):
        raise ModeError(f"{what} needs the traced (dcpo) structure, got {game.structure.name}")
    return game.structure


def og_transpose(game: OpenGame) -> OpenGame:
    """``(X, S) → (Y, R)`` becomes ``(R, Y) → (S, X)``; history and continuation trade places."""
    structure = _require_traced(game, "transpose")

    def plays(profile, ctx) -> Iterator[DecisionPlay]:
        return game.plays(profile, transpose_context(ctx))

    return OpenGame(
        structure,
        game.dst.dual(),
        game.src.dual(),
        game.strategies,
        lambda profile: int_transpose(game.label(profile)),
        plays,
        name=f"transpose({game.name})",
    )


def og_transpose_compact(game: OpenGame) -> OpenGame:
    """The transpose assembled from cups and caps around ``game``."""
    structure = _require_traced(game, "transpose")
    category = structure.category
    a, b = game.src, game.dst
    a_star, b_star = a.dual(), b.dual()
    unit = category.unit()

    def pure(morphism) -> OpenGame:
        return og_pure(structure, morphism, name="wire")

    middle = og_tensor(og_tensor(pure(category.identity(b_star)), game), pure(category.identity(a_star)))
    return og_chain(
        pure(category.canonical(b_star, b_star.tensor(unit))),
        pure(category.tensor(category.identity(b_star), int_eta(a))),
        middle,
        pure(category.tensor(int_eps(b_star), category.identity(a_star))),
        pure(category.canonical(unit.tensor(a_star), a_star)),
    )


def og_feedback(game: OpenGame, loop: Interface) -> OpenGame:
    """Close the trailing ``loop`` factor of ``A ⊗ U → B ⊗ U`` with a cup and a cap."""
    structure = _require_traced(game, "feedback")
    category = structure.category
    if not (game.src.fwd.is_product and game.dst.fwd.is_product):
        raise GameError(f"feedback needs a game of shape A ⊗ U -> B ⊗ U, got {game.src} -> {game.dst}")
    require_same(loop, game.src.right, "feedback loop (source side)")
    require_same(loop, game.dst.right, "feedback loop (target side)")
    a, b = game.src.left, game.dst.left
    unit = category.unit()

    def pure(morphism) -> OpenGame:
        return og_pure(structure, morphism, name="wire")

    result = og_chain(
        pure(category.canonical(a, a.tensor(unit))),
        pure(category.tensor(category.identity(a), int_eta(loop))),
        og_tensor(game, pure(category.identity(loop.dual()))),
        pure(category.tensor(category.identity(b), int_eps(loop))),
        pure(category.canonical(b.tensor(unit), b)),
    )
    result.name = f"feedback({game.name})"
    return result


# Solvers -------------------------------------------------------------------------


def _resolve_context(game: OpenGame, ctx):
    if ctx is None:
        if not game.is_scalar():
            raise GameError(f"{game.name}: {game.src} -> {game.dst} is not scalar; a context is required")
        return game.structure.trivial(game.src, game.dst)
    game.require_context(ctx)
    return ctx


def _check_profile_budget(game: OpenGame, budget: int | None) -> None:
    budget = settings.max_profiles if budget is None else budget
    if game.strategies.size > budget:
        raise BudgetExceededError("profiles", game.strategies.size, budget)


def og_equilibria(game: OpenGame, ctx=None, budget: int | None = None) -> list:
    """All profiles in equilibrium against ``ctx`` (the trivial context for scalar games)."""
    ctx = _resolve_context(game, ctx)
    _check_profile_budget(game, budget)
    logger.debug("checking %d profiles of %s", game.strategies.size, game.name)
    return [profile for profile in game.profiles() if game.check(profile, ctx)]


def og_winning(game: OpenGame, budget: int | None = None, profile_budget: int | None = None) -> list:
    """Profiles in equilibrium against every context of the game's hom."""
    structure = game.structure
    budget = settings.max_contexts if budget is None else budget
    count = structure.count_contexts(game.src, game.dst)
    if count > budget:
        raise BudgetExceededError("contexts", count, budget)
    _check_profile_budget(game, profile_budget)
    contexts = list(structure.iter_contexts(game.src, game.dst))
    logger.debug("checking %d profiles of %s against %d contexts", game.strategies.size, game.name, len(contexts))
    return [profile for profile in game.profiles() if all(game.check(profile, ctx) for ctx in contexts)]


def equilibrium_relation(game: OpenGame, contexts) -> frozenset:
    """``{(flattened profile, context)}`` restricted to ``contexts``, for comparing games."""
    return frozenset(
        (game.flatten(profile), ctx) for ctx in contexts for profile in game.profiles() if game.check(profile, ctx)
    )
