"""Context structures: what an open game's environment looks like, and how it moves.

Open-game composition only needs four things from a context structure: the
functorial action ``ctx_map``, the projections ``/`` and ``\\`` through a
tensor, enumeration of contexts, and a way to read a decision's play off a
context. ``LensContextStructure`` and ``TracedContextStructure`` implement
them for lenses and for Int respectively.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from app.core.base import (
    DCPO,
    SET,
    FnTable,
    argmax,
    count_maps_upper_bound,
    iter_maps,
    least_fixpoint,
    product,
)
from app.core.category import Interface, ModeError, MonoidalCategory, require_same
from app.core.intcat import (
    IntCategory,
    IntMorphism,
    TracedContext,
    int_category,
    int_compose,
    int_id,
    int_tensor,
    int_trace,
    lensctx_to_intctx,
)
from app.core.lens import Lens, LensCategory, LensContext, lens_dcpo, lens_set


@dataclass(frozen=True)
class DecisionPlay:
    """What one decision saw and did under a given context."""

    player: str
    history: Any
    move: Any
    payoff: Any
    best: tuple
    ok: bool


def _play(player: str, history, move, continuation: FnTable) -> DecisionPlay:
    best = tuple(argmax(continuation))
    return DecisionPlay(player, history, move, continuation(move), best, move in best)


class ContextStructure(ABC):
    """A context for a symmetric monoidal category, plus enumeration helpers."""

    def __init__(self, category: MonoidalCategory, name: str):
        self.category = category
        self.name = name

    @property
    def mode(self) -> str:
        return self.category.mode

    @abstractmethod
    def ctx_map(self, lam, mu, ctx):
        """Push ``ctx ∈ Ctx(X, Y')`` along ``lam: X → X'`` and ``mu: Y → Y'`` to ``Ctx(X', Y)``."""

    @abstractmethod
    def proj_left(self, m2, ctx):
        """``m2 / ctx``: the view of the left factor with ``m2`` playing on the right."""

    def proj_right(self, m1, ctx):
        """``m1 \\ ctx``, derived from ``/`` through the symmetries."""
        left, right = _split(ctx.src)
        left_dst, right_dst = _split(ctx.dst)
        swapped = self.ctx_map(
            self.category.symmetry(left, right),
            self.category.symmetry(right_dst, left_dst),
            ctx,
        )
        return self.proj_left(m1, swapped)

    @abstractmethod
    def trivial(self, src: Interface, dst: Interface):
        """The unique context of a hom between one-element interfaces."""

    @abstractmethod
    def from_parts(self, src: Interface, dst: Interface, history, continuation: FnTable):
        """Build a context from a history and a continuation ``dst.fwd → dst.bwd``."""

    @abstractmethod
    def count_contexts(self, src: Interface, dst: Interface) -> int:
        """Upper bound on the number of contexts of ``src → dst``."""

    @abstractmethod
    def iter_contexts(self, src: Interface, dst: Interface) -> Iterator:
        """Every context of ``src → dst``, in a deterministic order."""

    @abstractmethod
    def decision_play(self, player: str, strategy: FnTable, ctx) -> DecisionPlay:
        """Observed move of a decision of type ``(X, 1) → (Y, R)`` under ``ctx``."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


def _split(interface: Interface) -> tuple[Interface, Interface]:
    return interface.left, interface.right


# Lens contexts ----------------------------------------------------------------


@lru_cache(maxsize=8192)
def lens_ctx_map(lam: Lens, mu: Lens, ctx: LensContext) -> LensContext:
    require_same(ctx.src, lam.src, "ctx_map: left morphism source")
    require_same(ctx.dst, mu.dst, "ctx_map: right morphism target")
    k = ctx.continuation
    continuation = FnTable.tabulate(mu.src.fwd, mu.src.bwd, lambda y: mu.update((y, k(mu.view(y)))))
    return LensContext(lam.dst, mu.src, lam.view(ctx.history), continuation)


@lru_cache(maxsize=8192)
def lens_proj_left(m2: Lens, ctx: LensContext) -> LensContext:
    left, right = _split(ctx.src)
    left_dst, right_dst = _split(ctx.dst)
    require_same(right, m2.src, "projection: right factor source")
    require_same(right_dst, m2.dst, "projection: right factor target")
    h1, h2 = ctx.history
    y2 = m2.view(h2)
    continuation = FnTable.tabulate(left_dst.fwd, left_dst.bwd, lambda y1: ctx.continuation((y1, y2))[1])
    return LensContext(left, left_dst, h1, continuation)


@lru_cache(maxsize=8192)
def lens_proj_right_direct(m1: Lens, ctx: LensContext) -> LensContext:
    """``m1 \\ ctx`` by the direct formula ``k2(y2) = k(v(h1), y2)`` (left component)."""
    left, right = _split(ctx.src)
    left_dst, right_dst = _split(ctx.dst)
    require_same(left, m1.src, "projection: left factor source")
    require_same(left_dst, m1.dst, "projection: left factor target")
    h1, h2 = ctx.history
    y1 = m1.view(h1)
    continuation = FnTable.tabulate(right_dst.fwd, right_dst.bwd, lambda y2: ctx.continuation((y1, y2))[0])
    return LensContext(right, right_dst, h2, continuation)


class LensContextStructure(ContextStructure):
    def __init__(self, category: LensCategory):
        super().__init__(category, f"lens-{category.mode}")

    def ctx_map(self, lam: Lens, mu: Lens, ctx: LensContext) -> LensContext:
        return lens_ctx_map(lam, mu, ctx)

    def proj_left(self, m2: Lens, ctx: LensContext) -> LensContext:
        return lens_proj_left(m2, ctx)

    def proj_right_direct(self, m1: Lens, ctx: LensContext) -> LensContext:
        return lens_proj_right_direct(m1, ctx)

    def trivial(self, src: Interface, dst: Interface) -> LensContext:
        return LensContext(src, dst, src.fwd.point(), FnTable(dst.fwd, dst.bwd, (dst.bwd.point(),)))

    def from_parts(self, src, dst, history, continuation) -> LensContext:
        return LensContext(src, dst, history, continuation)

    def count_contexts(self, src: Interface, dst: Interface) -> int:
        return src.fwd.size * count_maps_upper_bound(dst.fwd, dst.bwd)

    def iter_contexts(self, src: Interface, dst: Interface) -> Iterator[LensContext]:
        for history in src.fwd.elements:
            for k in iter_maps(dst.fwd, dst.bwd):
                yield LensContext(src, dst, history, k)

    def decision_play(self, player: str, strategy: FnTable, ctx: LensContext) -> DecisionPlay:
        return _play(player, ctx.history, strategy(ctx.history), ctx.continuation)


# Traced contexts --------------------------------------------------------------


@lru_cache(maxsize=8192)
def traced_ctx_map(lam: IntMorphism, mu: IntMorphism, ctx: TracedContext) -> TracedContext:
    require_same(ctx.src, lam.src, "ctx_map: left morphism source")
    require_same(ctx.dst, mu.dst, "ctx_map: right morphism target")
    morphism = int_compose(lam, int_compose(ctx.morphism, mu))
    return TracedContext(lam.dst, mu.src, morphism)


@lru_cache(maxsize=8192)
def traced_proj_left(m2: IntMorphism, ctx: TracedContext) -> TracedContext:
    left, right = _split(ctx.src)
    left_dst, right_dst = _split(ctx.dst)
    require_same(right, m2.src, "projection: right factor source")
    require_same(right_dst, m2.dst, "projection: right factor target")
    # Y1 ⊗ Y2 → X1 ⊗ X2 → X1 ⊗ Y2, then the Y2 wire is closed into a loop.
    looped = int_compose(int_tensor(int_id(left), m2), ctx.morphism)
    return TracedContext(left, left_dst, int_trace(looped))


@lru_cache(maxsize=8192)
def traced_decision_play(player: str, strategy: FnTable, ctx: TracedContext) -> DecisionPlay:
    """The decision's move is the least fixpoint of ``strategy`` against the context's forward loop."""
    dst = ctx.dst
    point = ctx.src.bwd.point()
    table = ctx.morphism.table
    move = least_fixpoint(dst.fwd, lambda y: strategy(table((y, point))[0]))
    continuation = FnTable.tabulate(dst.fwd, dst.bwd, lambda y: table((y, point))[1])
    return _play(player, table((move, point))[0], move, continuation)


class TracedContextStructure(ContextStructure):
    def __init__(self, category: IntCategory):
        super().__init__(category, "traced")

    def ctx_map(self, lam: IntMorphism, mu: IntMorphism, ctx: TracedContext) -> TracedContext:
        return traced_ctx_map(lam, mu, ctx)

    def proj_left(self, m2: IntMorphism, ctx: TracedContext) -> TracedContext:
        return traced_proj_left(m2, ctx)

    def trivial(self, src: Interface, dst: Interface) -> TracedContext:
        table = FnTable(product(dst.fwd, src.bwd), product(src.fwd, dst.bwd), ((src.fwd.point(), dst.bwd.point()),))
        return TracedContext(src, dst, IntMorphism(dst, src, table))

    def from_parts(self, src, dst, history, continuation) -> TracedContext:
        return lensctx_to_intctx(LensContext(src, dst, history, continuation))

    def from_table(self, src: Interface, dst: Interface, table: FnTable) -> TracedContext:
        return TracedContext(src, dst, IntMorphism(dst, src, table))

    def count_contexts(self, src: Interface, dst: Interface) -> int:
        return count_maps_upper_bound(product(dst.fwd, src.bwd), product(src.fwd, dst.bwd))

    def iter_contexts(self, src: Interface, dst: Interface) -> Iterator[TracedContext]:
        for table in iter_maps(product(dst.fwd, src.bwd), product(src.fwd, dst.bwd)):
            yield TracedContext(src, dst, IntMorphism(dst, src, table))

    def decision_play(self, player: str, strategy: FnTable, ctx: TracedContext) -> DecisionPlay:
        return traced_decision_play(player, strategy, ctx)


lens_set_contexts = LensContextStructure(lens_set)
lens_dcpo_contexts = LensContextStructure(lens_dcpo)
traced_contexts = TracedContextStructure(int_category)


def structure_for(mode: str, traced: bool = True) -> ContextStructure:
    """Default context structure of a mode: lenses for ``set``, Int for ``dcpo``."""
    if mode == SET:
        return lens_set_contexts
    if mode == DCPO:
        return traced_contexts if traced else lens_dcpo_contexts
    raise ModeError(f"unknown mode {mode!r}")
