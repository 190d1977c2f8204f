"""The compact closed category Int over finite flat domains.

A morphism ``(X, S) → (Y, R)`` is a monotone table ``X × R → Y × S``.
Composition and trace solve the feedback loop per input by Kleene iteration,
so every operation here is restricted to ``dcpo`` mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from app.core.base import DCPO, FnTable, least_fixpoint, product, validate_table
from app.core.category import (
    Interface,
    InterfaceMismatchError,
    ModeError,
    MonoidalCategory,
    require_coherent,
    require_same,
    unit_interface,
)
from app.core.lens import Lens, LensContext


def _require_dcpo(mode: str, what: str) -> None:
    if mode != DCPO:
        raise ModeError(f"{what} needs dcpo mode, got {mode}")


@dataclass(frozen=True)
class IntMorphism:
    src: Interface
    dst: Interface
    table: FnTable

    def __post_init__(self):
        _require_dcpo(self.src.mode, "an Int morphism")
        if self.dst.mode != DCPO:
            raise ModeError(f"Int morphism {self.src} -> {self.dst} mixes modes")
        if self.table.src != product(self.src.fwd, self.dst.bwd) or self.table.dst != product(
            self.dst.fwd, self.src.bwd
        ):
            raise InterfaceMismatchError(
                f"table does not have type {self.src.fwd} * {self.dst.bwd} -> {self.dst.fwd} * {self.src.bwd}"
            )

    @property
    def mode(self) -> str:
        return DCPO

    def __call__(self, x, r):
        return self.table((x, r))

    def __str__(self) -> str:
        return f"Int {self.src} -> {self.dst}"


@dataclass(frozen=True)
class TracedContext:
    """Context of an Int hom ``src → dst``: a morphism running the other way."""

    src: Interface
    dst: Interface
    morphism: IntMorphism

    def __post_init__(self):
        require_same(self.dst, self.morphism.src, "context morphism source")
        require_same(self.src, self.morphism.dst, "context morphism target")


def int_from_function(src: Interface, dst: Interface, fn) -> IntMorphism:
    """Tabulate ``fn(x, r) -> (y, s)`` into a morphism ``src → dst``."""
    table = FnTable.tabulate(product(src.fwd, dst.bwd), product(dst.fwd, src.bwd), lambda xr: fn(xr[0], xr[1]))
    return IntMorphism(src, dst, table)


def validate_int(morphism: IntMorphism) -> IntMorphism:
    validate_table(morphism.table)
    return morphism


@lru_cache(maxsize=None)
def int_id(interface: Interface) -> IntMorphism:
    _require_dcpo(interface.mode, "int_id")
    return int_from_function(interface, interface, lambda x, s: (x, s))


def int_dual(interface: Interface) -> Interface:
    _require_dcpo(interface.mode, "int_dual")
    return interface.dual()


@lru_cache(maxsize=None)
def int_eta(interface: Interface) -> IntMorphism:
    """Cup ``I → A ⊗ A*``; carried by the identity on ``X × S``."""
    _require_dcpo(interface.mode, "int_eta")
    unit = unit_interface(DCPO)
    return int_from_function(unit, interface.tensor(interface.dual()), lambda x, p: (p, x))


@lru_cache(maxsize=None)
def int_eps(interface: Interface) -> IntMorphism:
    """Cap ``A ⊗ A* → I``; carried by the identity on ``X × S``."""
    _require_dcpo(interface.mode, "int_eps")
    unit = unit_interface(DCPO)
    return int_from_function(interface.tensor(interface.dual()), unit, lambda p, r: (r, p))


@lru_cache(maxsize=4096)
def int_trace(morphism: IntMorphism) -> IntMorphism:
    """Feed the right tensor factor ``U`` of ``A ⊗ U → B ⊗ U`` back into itself."""
    src, dst = morphism.src, morphism.dst
    a, loop = src.left, src.right
    b = dst.left
    require_same(loop, dst.right, "trace loop")
    loop_carrier = product(loop.fwd, loop.bwd)

    def traced(x, bm):
        def step(state):
            u, um = state
            (_, u_out), (um_out, _) = morphism.table(((x, u), (um, bm)))
            return (u_out, um_out)

        u, um = least_fixpoint(loop_carrier, step)
        (y, _), (_, am) = morphism.table(((x, u), (um, bm)))
        return (y, am)

    return int_from_function(a, b, traced)


@lru_cache(maxsize=4096)
def int_compose(mu: IntMorphism, lam: IntMorphism) -> IntMorphism:
    """``mu ∘ lam``; the middle backward wire is the least solution of its loop."""
    require_same(lam.dst, mu.src, "cannot compose Int morphisms")
    middle = lam.dst.bwd

    def composite(x, q):
        r = least_fixpoint(middle, lambda r: mu.table((lam.table((x, r))[0], q))[1])
        y, s = lam.table((x, r))
        z, _ = mu.table((y, q))
        return (z, s)

    return int_from_function(lam.src, mu.dst, composite)


@lru_cache(maxsize=4096)
def int_tensor(first: IntMorphism, second: IntMorphism) -> IntMorphism:
    def tensored(xs, rs):
        (x1, x2), (r2, r1) = xs, rs
        y1, s1 = first.table((x1, r1))
        y2, s2 = second.table((x2, r2))
        return ((y1, y2), (s2, s1))

    return int_from_function(first.src.tensor(second.src), first.dst.tensor(second.dst), tensored)


@lru_cache(maxsize=None)
def int_symmetry(a: Interface, b: Interface) -> IntMorphism:
    _require_dcpo(a.mode, "int_symmetry")
    return int_from_function(a.tensor(b), b.tensor(a), lambda xs, rs: ((xs[1], xs[0]), (rs[1], rs[0])))


@lru_cache(maxsize=None)
def int_canonical(src: Interface, dst: Interface) -> IntMorphism:
    _require_dcpo(src.mode, "int_canonical")
    require_coherent(src, dst)
    return int_from_function(
        src,
        dst,
        lambda x, r: (dst.fwd.unflatten(src.fwd.flatten(x)), src.bwd.unflatten(dst.bwd.flatten(r))),
    )


@lru_cache(maxsize=4096)
def int_transpose(morphism: IntMorphism) -> IntMorphism:
    """``(X, S) → (Y, R)`` becomes ``(R, Y) → (S, X)`` on the same underlying map."""

    def transposed(r, x):
        y, s = morphism.table((x, r))
        return (s, y)

    return int_from_function(morphism.dst.dual(), morphism.src.dual(), transposed)


@lru_cache(maxsize=4096)
def lens_to_int(lens: Lens) -> IntMorphism:
    _require_dcpo(lens.mode, "lens_to_int")
    return int_from_function(lens.src, lens.dst, lambda x, r: (lens.view(x), lens.update((x, r))))


def lensctx_to_intctx(ctx: LensContext) -> TracedContext:
    """Send ``(h, k)`` to the reverse morphism ``(y, s) ↦ (h, k(y))``."""
    _require_dcpo(ctx.src.mode, "lensctx_to_intctx")
    morphism = int_from_function(ctx.dst, ctx.src, lambda y, s: (ctx.history, ctx.continuation(y)))
    return TracedContext(ctx.src, ctx.dst, morphism)


def transpose_context(ctx: TracedContext) -> TracedContext:
    """A context for ``G*`` read as a context for ``G``."""
    morphism = int_transpose(ctx.morphism)
    return TracedContext(morphism.dst, morphism.src, morphism)


class IntCategory(MonoidalCategory):
    def __init__(self):
        super().__init__(DCPO, "Int(dcpo)")

    def identity(self, interface: Interface) -> IntMorphism:
        return int_id(interface)

    def compose(self, after: IntMorphism, before: IntMorphism) -> IntMorphism:
        return int_compose(after, before)

    def tensor(self, first: IntMorphism, second: IntMorphism) -> IntMorphism:
        return int_tensor(first, second)

    def symmetry(self, a: Interface, b: Interface) -> IntMorphism:
        return int_symmetry(a, b)

    def canonical(self, src: Interface, dst: Interface) -> IntMorphism:
        return int_canonical(src, dst)

    def from_lens(self, lens: Lens) -> IntMorphism:
        return lens_to_int(lens)

    def validate(self, morphism: IntMorphism) -> IntMorphism:
        return validate_int(morphism)

    def eta(self, interface: Interface) -> IntMorphism:
        return int_eta(interface)

    def eps(self, interface: Interface) -> IntMorphism:
        return int_eps(interface)


int_category = IntCategory()
