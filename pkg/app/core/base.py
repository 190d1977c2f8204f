"""Finite carriers, checked function tables, Kleene fixpoints and argmax.

A carrier is either a plain finite set (``set`` mode) or a finite flat domain
(``dcpo`` mode: an implicit bottom below pairwise incomparable atoms), closed
under binary products with the componentwise order.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any

SET = "set"
DCPO = "dcpo"
MODES = (SET, DCPO)

UNIT_ATOM = "*"


class EngineError(Exception):
    """Base class for every error raised by the engine."""


class CarrierError(EngineError):
    """Invalid carrier construction or mode mismatch."""


class TableError(EngineError):
    """Non-total or ill-typed function table."""


class MonotonicityError(TableError):
    """A dcpo table maps an ordered pair to an unordered one."""

    def __init__(self, message: str, pair: tuple[Any, Any]):
        super().__init__(message)
        self.pair = pair


class FixpointError(EngineError):
    """Kleene iteration did not stabilise within the height bound."""


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "⊥"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


@dataclass(frozen=True)
class Carrier:
    """A finite carrier: atomic (``left is None``) or a binary product."""

    mode: str
    atoms: tuple = ()
    left: Carrier | None = None
    right: Carrier | None = None
    name: str | None = None

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.mode, self.atoms, self.left, self.right, self.name))

    @property
    def is_product(self) -> bool:
        return self.left is not None

    @cached_property
    def elements(self) -> tuple:
        if self.is_product:
            return tuple(itertools.product(self.left.elements, self.right.elements))
        if self.mode == DCPO:
            return (BOTTOM, *self.atoms)
        return tuple(self.atoms)

    @cached_property
    def _index(self) -> dict:
        return {element: i for i, element in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, element) -> int:
        try:
            return self._index[element]
        except (KeyError, TypeError):
            raise CarrierError(f"{element!r} is not an element of {self}") from None

    def __contains__(self, element) -> bool:
        try:
            return element in self._index
        except TypeError:
            return False

    @cached_property
    def bottom(self):
        if self.mode != DCPO:
            raise CarrierError(f"set-mode carrier {self} has no bottom")
        if self.is_product:
            return (self.left.bottom, self.right.bottom)
        return BOTTOM

    @cached_property
    def is_unit(self) -> bool:
        return self == unit_carrier(self.mode)

    @cached_property
    def height(self) -> int:
        """Length of the longest strictly increasing chain."""
        if self.is_product:
            return self.left.height + self.right.height
        if self.mode == DCPO and self.atoms:
            return 1
        return 0

    def leq(self, a, b) -> bool:
        if self.is_product:
            return self.left.leq(a[0], b[0]) and self.right.leq(a[1], b[1])
        if self.mode == DCPO and a is BOTTOM:
            return True
        return a == b

    def lower_covers(self, element) -> list:
        """Elements immediately below ``element`` (one atomic component dropped to bottom)."""
        if self.mode != DCPO:
            return []
        if self.is_product:
            a, b = element
            return [(x, b) for x in self.left.lower_covers(a)] + [
                (a, y) for y in self.right.lower_covers(b)
            ]
        return [] if element is BOTTOM else [BOTTOM]

    @cached_property
    def normal_form(self) -> tuple[Carrier, ...]:
        if self.is_product:
            return self.left.normal_form + self.right.normal_form
        return () if self.is_unit else (self,)

    def flatten(self, element) -> tuple:
        if self.is_product:
            return self.left.flatten(element[0]) + self.right.flatten(element[1])
        return () if self.is_unit else (element,)

    def unflatten(self, parts) -> Any:
        element, rest = self._unflatten(tuple(parts))
        if rest:
            raise CarrierError(f"too many components for {self}: {parts!r}")
        return element

    def _unflatten(self, parts: tuple):
        if self.is_product:
            a, parts = self.left._unflatten(parts)
            b, parts = self.right._unflatten(parts)
            return (a, b), parts
        if self.is_unit:
            return self.elements[0], parts
        if not parts:
            raise CarrierError(f"too few components for {self}")
        return parts[0], parts[1:]

    def point(self):
        """The unique element of a one-element carrier."""
        if self.size != 1:
            raise CarrierError(f"{self} is not a singleton")
        return self.elements[0]

    def __str__(self) -> str:
        if self.is_product:
            right = f"({self.right})" if self.right.is_product and self.right.name is None else str(self.right)
            return f"{self.left} * {right}"
        if self.name is not None:
            return self.name
        return "{" + ", ".join(format_element(a) for a in self.atoms) + "}"


def format_element(element) -> str:
    if element is BOTTOM:
        return "⊥"
    if isinstance(element, tuple):
        return "(" + ", ".join(format_element(e) for e in element) + ")"
    return str(element)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise CarrierError(f"unknown mode {mode!r}; expected one of {MODES}")


def make_carrier(mode: str, atoms, name: str | None = None) -> Carrier:
    _check_mode(mode)
    atoms = tuple(atoms)
    seen = set()
    for atom in atoms:
        if atom is BOTTOM:
            raise CarrierError("bottom cannot be declared as an atom")
        if atom in seen:
            raise CarrierError(f"duplicate atom {atom!r}")
        seen.add(atom)
    return Carrier(mode=mode, atoms=atoms, name=name)


def unit_carrier(mode: str) -> Carrier:
    _check_mode(mode)
    if mode == SET:
        return Carrier(mode=SET, atoms=(UNIT_ATOM,), name="1")
    return Carrier(mode=DCPO, atoms=(), name="1")


def product(a: Carrier, b: Carrier) -> Carrier:
    if a.mode != b.mode:
        raise CarrierError(f"cannot form {a} * {b}: mode {a.mode} vs {b.mode}")
    return Carrier(mode=a.mode, left=a, right=b)


def fold_product(carriers, mode: str) -> Carrier:
    """Left-nested product of ``carriers``; the unit for an empty list."""
    carriers = list(carriers)
    if not carriers:
        return unit_carrier(mode)
    result = carriers[0]
    for carrier in carriers[1:]:
        result = product(result, carrier)
    return result


def fold_element(values):
    values = list(values)
    result = values[0]
    for value in values[1:]:
        result = (result, value)
    return result


def unfold_element(element, count: int) -> tuple:
    parts = []
    for _ in range(count - 1):
        element, last = element
        parts.append(last)
    parts.append(element)
    return tuple(reversed(parts))


def payoff_domain(mode: str, values=(), name: str = "R") -> Carrier:
    """The flat domain of exact rational payoffs, atoms in numeric order."""
    atoms = sorted({Fraction(v) for v in values})
    return make_carrier(mode, atoms, name=name)


def is_payoff_domain(carrier: Carrier) -> bool:
    return not carrier.is_product and all(isinstance(a, Fraction) for a in carrier.atoms)


@dataclass(frozen=True)
class FnTable:
    """A total map between carriers, stored as images in source order."""

    src: Carrier
    dst: Carrier
    images: tuple

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.src, self.dst, self.images))

    def __call__(self, element):
        return self.images[self.src.index(element)]

    def items(self):
        return zip(self.src.elements, self.images)

    @classmethod
    def tabulate(cls, src: Carrier, dst: Carrier, fn: Callable) -> FnTable:
        """Build a table from a Python function without validation."""
        return cls(src, dst, tuple(fn(x) for x in src.elements))

    def then(self, other: FnTable) -> FnTable:
        """Diagrammatic composite: first ``self``, then ``other``."""
        if self.dst != other.src:
            raise TableError(f"cannot compose {self.src} -> {self.dst} with {other.src} -> {other.dst}")
        return FnTable(self.src, other.dst, tuple(other(y) for y in self.images))


def check_monotone(table: FnTable) -> None:
    if table.src.mode != DCPO:
        return
    for x, image in table.items():
        for below in table.src.lower_covers(x):
            if not table.dst.leq(table(below), image):
                raise MonotonicityError(
                    f"not monotone: {format_element(below)} <= {format_element(x)} "
                    f"but {format_element(table(below))} is not <= {format_element(image)}",
                    (below, x),
                )


def validate_table(table: FnTable) -> FnTable:
    if table.src.mode != table.dst.mode:
        raise CarrierError(f"mode mismatch: {table.src.mode} -> {table.dst.mode}")
    if len(table.images) != table.src.size:
        raise TableError("table is not total")
    for image in table.images:
        if image not in table.dst:
            raise TableError(f"{format_element(image)} is not an element of {table.dst}")
    check_monotone(table)
    return table


def fn_table(src: Carrier, dst: Carrier, entries) -> FnTable:
    """Validated table from a mapping or a sequence of ``(input, output)`` pairs."""
    if src.mode != dst.mode:
        raise CarrierError(f"mode mismatch: {src.mode} -> {dst.mode}")
    pairs = entries.items() if isinstance(entries, Mapping) else entries
    mapping: dict = {}
    for x, y in pairs:
        if x not in src:
            raise TableError(f"{format_element(x)} is not an element of {src}")
        if x in mapping:
            raise TableError(f"duplicate entry for {format_element(x)}")
        mapping[x] = y
    missing = [x for x in src.elements if x not in mapping]
    if missing:
        raise TableError(f"missing entry for {format_element(missing[0])}")
    return validate_table(FnTable(src, dst, tuple(mapping[x] for x in src.elements)))


def identity_table(carrier: Carrier) -> FnTable:
    return FnTable(carrier, carrier, carrier.elements)


def constant_table(src: Carrier, dst: Carrier, value) -> FnTable:
    return FnTable(src, dst, (value,) * src.size)


def _candidates(src: Carrier, dst: Carrier, assigned: dict, x) -> list:
    lower = [assigned[p] for p in src.lower_covers(x)]
    return [y for y in dst.elements if all(dst.leq(b, y) for b in lower)]


def _search_maps(src: Carrier, dst: Carrier, order: Callable[[list], list]) -> Iterator[tuple]:
    # Source order is a linear extension of the dcpo order, so every lower
    # cover is assigned before the element itself.
    elements = src.elements
    assigned: dict = {}
    images: list = []

    def search(i: int):
        if i == len(elements):
            yield tuple(images)
            return
        x = elements[i]
        for y in order(_candidates(src, dst, assigned, x)):
            assigned[x] = y
            images.append(y)
            yield from search(i + 1)
            images.pop()
            del assigned[x]

    yield from search(0)


def iter_maps(src: Carrier, dst: Carrier) -> Iterator[FnTable]:
    """All total (set) or monotone total (dcpo) maps, lexicographic in atom order."""
    if src.mode != dst.mode:
        raise CarrierError(f"mode mismatch: {src.mode} -> {dst.mode}")
    if src.mode == SET:
        for images in itertools.product(dst.elements, repeat=src.size):
            yield FnTable(src, dst, images)
        return
    for images in _search_maps(src, dst, lambda cs: cs):
        yield FnTable(src, dst, images)


def enumerate_maps(src: Carrier, dst: Carrier) -> list[FnTable]:
    return list(iter_maps(src, dst))


def count_maps_upper_bound(src: Carrier, dst: Carrier) -> int:
    return dst.size ** src.size


def _compatible(carrier: Carrier, a, b) -> bool:
    """Whether ``a`` and ``b`` have a common upper bound."""
    if carrier.is_product:
        return _compatible(carrier.left, a[0], b[0]) and _compatible(carrier.right, a[1], b[1])
    return a is BOTTOM or b is BOTTOM or a == b


def _random_flat_column(rng: random.Random, src: Carrier, dst: Carrier) -> list:
    # A monotone map into a flat domain is fixed by (pattern, atom) rules whose
    # compatible patterns agree on the atom; x takes the atom of any pattern below it.
    rules: list = []
    if dst.atoms:
        for _ in range(rng.randint(0, min(src.size, 4))):
            pattern = rng.choice(src.elements)
            clashes = {atom for other, atom in rules if _compatible(src, pattern, other)}
            if len(clashes) > 1:
                continue
            rules.append((pattern, clashes.pop() if clashes else rng.choice(dst.atoms)))
    return [next((atom for pattern, atom in rules if src.leq(pattern, x)), BOTTOM) for x in src.elements]


def random_map(rng: random.Random, src: Carrier, dst: Carrier) -> FnTable:
    """A random total map, monotone in dcpo mode; deterministic for a seeded ``rng``."""
    if src.mode != dst.mode:
        raise CarrierError(f"mode mismatch: {src.mode} -> {dst.mode}")
    if src.mode == SET:
        return FnTable(src, dst, tuple(rng.choice(dst.elements) for _ in src.elements))
    # Maps into a product are monotone iff every component is.
    columns = [_random_flat_column(rng, src, factor) for factor in dst.normal_form]
    images = tuple(dst.unflatten(tuple(column[i] for column in columns)) for i in range(src.size))
    return FnTable(src, dst, images)


def least_fixpoint(carrier: Carrier, step: Callable[[Any], Any]):
    """Kleene iteration of ``step`` from bottom, bounded by the carrier height."""
    if carrier.mode != DCPO:
        raise CarrierError("least fixpoints need a dcpo-mode carrier")
    x = carrier.bottom
    for _ in range(carrier.height + 1):
        nxt = step(x)
        if nxt == x:
            return x
        x = nxt
    raise FixpointError(f"no fixpoint on {carrier} after {carrier.height + 1} iterations")


def kleene_fix(f: FnTable):
    if f.src != f.dst:
        raise TableError(f"kleene_fix needs an endomap, got {f.src} -> {f.dst}")
    return least_fixpoint(f.src, f)


def _payoff_key(value):
    # Bottom sits strictly below every rational.
    return (0, 0) if value is BOTTOM else (1, value)


def payoff_max(values):
    return max(values, key=_payoff_key)


def argmax(k: FnTable) -> list:
    """Elements of ``k.src`` whose payoff is maximal in the extended order."""
    if not is_payoff_domain(k.dst):
        raise CarrierError(f"argmax needs a payoff-domain codomain, got {k.dst}")
    if k.src.size == 0:
        return []
    best = _payoff_key(payoff_max(k.images))
    return [x for x, value in k.items() if _payoff_key(value) == best]
