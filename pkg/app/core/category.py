from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

from app.core.base import Carrier, EngineError, product, unit_carrier


class ModeError(EngineError):
    """An operation was used in a mode that does not support it."""


class InterfaceMismatchError(EngineError):
    """Two interfaces that must agree do not."""


@dataclass(frozen=True)
class Interface:
    """A pair ``(X, S)``: forward carrier and backward carrier."""

    fwd: Carrier
    bwd: Carrier

    def __post_init__(self):
        if self.fwd.mode != self.bwd.mode:
            raise ModeError(f"interface ({self.fwd}, {self.bwd}) mixes {self.fwd.mode} and {self.bwd.mode}")

    @property
    def mode(self) -> str:
        return self.fwd.mode

    def tensor(self, other: Interface) -> Interface:
        # The backward factors swap: (X1, S1) ⊗ (X2, S2) = (X1 × X2, S2 × S1).
        return Interface(product(self.fwd, other.fwd), product(other.bwd, self.bwd))

    def dual(self) -> Interface:
        return Interface(self.bwd, self.fwd)

    @property
    def left(self) -> Interface:
        """First tensor factor of an interface built by ``tensor``."""
        if not (self.fwd.is_product and self.bwd.is_product):
            raise InterfaceMismatchError(f"{self} is not a tensor of interfaces")
        return Interface(self.fwd.left, self.bwd.right)

    @property
    def right(self) -> Interface:
        if not (self.fwd.is_product and self.bwd.is_product):
            raise InterfaceMismatchError(f"{self} is not a tensor of interfaces")
        return Interface(self.fwd.right, self.bwd.left)

    @property
    def normal_form(self) -> tuple:
        return (self.fwd.normal_form, self.bwd.normal_form)

    def is_scalar(self) -> bool:
        return self.fwd.size == 1 and self.bwd.size == 1

    def __str__(self) -> str:
        return f"({self.fwd}, {self.bwd})"


def unit_interface(mode: str) -> Interface:
    u = unit_carrier(mode)
    return Interface(u, u)


def require_same(expected: Interface, actual: Interface, what: str) -> None:
    if expected != actual:
        raise InterfaceMismatchError(f"{what}: expected {expected}, got {actual}")


def require_coherent(src: Interface, dst: Interface) -> None:
    if src.normal_form != dst.normal_form:
        raise InterfaceMismatchError(f"{src} and {dst} are not canonically isomorphic")


class MonoidalCategory(ABC):
    """The operations open games need from a symmetric monoidal category.

    Objects are ``Interface`` values; morphisms are whatever the concrete
    category uses (``Lens`` or ``IntMorphism``) and always expose ``src`` and
    ``dst``.
    """

    def __init__(self, mode: str, name: str):
        self.mode = mode
        self.name = name

    def unit(self) -> Interface:
        return unit_interface(self.mode)

    @abstractmethod
    def identity(self, interface: Interface) -> Any:
        """Identity morphism on an interface"""

    @abstractmethod
    def compose(self, after, before) -> Any:
        """``after ∘ before``"""

    @abstractmethod
    def tensor(self, first, second) -> Any:
        """Parallel composition with the backward twist"""

    @abstractmethod
    def symmetry(self, a: Interface, b: Interface) -> Any:
        """The braiding ``a ⊗ b → b ⊗ a``"""

    @abstractmethod
    def canonical(self, src: Interface, dst: Interface) -> Any:
        """The canonical re-bracketing iso between coherently isomorphic interfaces"""

    @abstractmethod
    def from_lens(self, lens) -> Any:
        """Embed a lens built by the structural constructors"""

    @abstractmethod
    def validate(self, morphism) -> Any:
        """Check every table of a morphism; returns the morphism"""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"
