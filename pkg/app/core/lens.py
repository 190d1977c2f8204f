"""The symmetric monoidal category of lenses over a finite cartesian base.

A lens ``(X, S) → (Y, R)`` is a view ``X → Y`` with an update
``X × R → S``. Composition follows the usual lens formulas; the tensor swaps
the backward factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from app.core.base import (
    DCPO,
    SET,
    Carrier,
    FnTable,
    product,
    unit_carrier,
    validate_table,
)
from app.core.category import (
    Interface,
    InterfaceMismatchError,
    ModeError,
    MonoidalCategory,
    require_coherent,
    require_same,
    unit_interface,
)

__all__ = [
    "Interface",
    "InterfaceMismatchError",
    "Lens",
    "LensCategory",
    "LensContext",
    "ModeError",
    "lens_canonical",
    "lens_compose",
    "lens_from_functions",
    "lens_id",
    "lens_structural",
    "lens_symmetry",
    "lens_tensor",
    "lift",
    "unit_interface",
    "validate_lens",
]

STRUCTURAL_KINDS = ("copy", "delete", "counit")
VARIANCES = ("cov", "contra")


@dataclass(frozen=True)
class Lens:
    src: Interface
    dst: Interface
    view: FnTable
    update: FnTable

    def __post_init__(self):
        if self.src.mode != self.dst.mode:
            raise ModeError(f"lens {self.src} -> {self.dst} mixes modes")
        if self.view.src != self.src.fwd or self.view.dst != self.dst.fwd:
            raise InterfaceMismatchError(f"view does not have type {self.src.fwd} -> {self.dst.fwd}")
        if self.update.src != product(self.src.fwd, self.dst.bwd) or self.update.dst != self.src.bwd:
            raise InterfaceMismatchError(
                f"update does not have type {self.src.fwd} * {self.dst.bwd} -> {self.src.bwd}"
            )

    @property
    def mode(self) -> str:
        return self.src.mode

    def __str__(self) -> str:
        return f"Lens {self.src} -> {self.dst}"


@dataclass(frozen=True)
class LensContext:
    """Environment of a lens hom ``src → dst``: a history and a continuation."""

    src: Interface
    dst: Interface
    history: Any
    continuation: FnTable

    def __post_init__(self):
        if self.history not in self.src.fwd:
            raise InterfaceMismatchError(f"history {self.history!r} is not in {self.src.fwd}")
        if self.continuation.src != self.dst.fwd or self.continuation.dst != self.dst.bwd:
            raise InterfaceMismatchError(f"continuation does not have type {self.dst.fwd} -> {self.dst.bwd}")


def lens_from_functions(src: Interface, dst: Interface, view_fn, update_fn) -> Lens:
    view = FnTable.tabulate(src.fwd, dst.fwd, view_fn)
    update = FnTable.tabulate(product(src.fwd, dst.bwd), src.bwd, lambda xr: update_fn(xr[0], xr[1]))
    return Lens(src, dst, view, update)


def validate_lens(lens: Lens) -> Lens:
    validate_table(lens.view)
    validate_table(lens.update)
    return lens


@lru_cache(maxsize=None)
def lens_id(interface: Interface) -> Lens:
    return lens_from_functions(interface, interface, lambda x: x, lambda x, s: s)


@lru_cache(maxsize=4096)
def lens_compose(mu: Lens, lam: Lens) -> Lens:
    """``mu ∘ lam``: first ``lam`` then ``mu``."""
    require_same(lam.dst, mu.src, "cannot compose lenses")
    return validate_lens(
        lens_from_functions(
            lam.src,
            mu.dst,
            lambda x: mu.view(lam.view(x)),
            lambda x, q: lam.update((x, mu.update((lam.view(x), q)))),
        )
    )


@lru_cache(maxsize=4096)
def lens_tensor(first: Lens, second: Lens) -> Lens:
    if first.mode != second.mode:
        raise ModeError(f"cannot tensor a {first.mode} lens with a {second.mode} lens")

    def update(xs, rs):
        (x1, x2), (r2, r1) = xs, rs
        return (second.update((x2, r2)), first.update((x1, r1)))

    return validate_lens(
        lens_from_functions(
            first.src.tensor(second.src),
            first.dst.tensor(second.dst),
            lambda xs: (first.view(xs[0]), second.view(xs[1])),
            update,
        )
    )


def lens_structural(kind: str, carrier: Carrier) -> Lens:
    unit = unit_carrier(carrier.mode)
    point = unit.point()
    if kind == "copy":
        return lens_from_functions(
            Interface(carrier, unit),
            Interface(product(carrier, carrier), unit),
            lambda x: (x, x),
            lambda x, r: point,
        )
    if kind == "delete":
        return lens_from_functions(Interface(carrier, unit), Interface(unit, unit), lambda x: point, lambda x, r: point)
    if kind == "counit":
        return lens_from_functions(Interface(carrier, carrier), Interface(unit, unit), lambda x: point, lambda x, r: x)
    raise ValueError(f"unknown structural kind {kind!r}; expected one of {STRUCTURAL_KINDS}")


def lift(f: FnTable, variance: str = "cov") -> Lens:
    """Lift a function covariantly to ``(X,1) → (Y,1)`` or contravariantly to ``(1,Y) → (1,X)``."""
    unit = unit_carrier(f.src.mode)
    point = unit.point()
    if variance == "cov":
        return Lens(
            Interface(f.src, unit),
            Interface(f.dst, unit),
            f,
            FnTable.tabulate(product(f.src, unit), unit, lambda xr: point),
        )
    if variance == "contra":
        return lens_from_functions(Interface(unit, f.dst), Interface(unit, f.src), lambda x: point, lambda x, r: f(r))
    raise ValueError(f"unknown variance {variance!r}; expected one of {VARIANCES}")


@lru_cache(maxsize=None)
def lens_symmetry(a: Interface, b: Interface) -> Lens:
    return lens_from_functions(
        a.tensor(b),
        b.tensor(a),
        lambda xs: (xs[1], xs[0]),
        lambda xs, rs: (rs[1], rs[0]),
    )


@lru_cache(maxsize=None)
def lens_canonical(src: Interface, dst: Interface) -> Lens:
    require_coherent(src, dst)
    return lens_from_functions(
        src,
        dst,
        lambda x: dst.fwd.unflatten(src.fwd.flatten(x)),
        lambda x, r: src.bwd.unflatten(dst.bwd.flatten(r)),
    )


class LensCategory(MonoidalCategory):
    def __init__(self, mode: str):
        super().__init__(mode, f"Lens({mode})")

    def identity(self, interface: Interface) -> Lens:
        return lens_id(interface)

    def compose(self, after: Lens, before: Lens) -> Lens:
        return lens_compose(after, before)

    def tensor(self, first: Lens, second: Lens) -> Lens:
        return lens_tensor(first, second)

    def symmetry(self, a: Interface, b: Interface) -> Lens:
        return lens_symmetry(a, b)

    def canonical(self, src: Interface, dst: Interface) -> Lens:
        return lens_canonical(src, dst)

    def from_lens(self, lens: Lens) -> Lens:
        if lens.mode != self.mode:
            raise ModeError(f"{self.name} cannot hold a {lens.mode} lens")
        return lens

    def validate(self, morphism: Lens) -> Lens:
        return validate_lens(morphism)


lens_set = LensCategory(SET)
lens_dcpo = LensCategory(DCPO)
