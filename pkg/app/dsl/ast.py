"""Syntax tree of ``.og`` game files.

Every node records the ``(line, col)`` where it starts; positions are
excluded from equality so that re-parsed pretty output compares equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

NO_POS = (0, 0)


def _pos():
    return field(default=NO_POS, compare=False, repr=False)


class DslError(Exception):
    """A diagnostic tied to a source position."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(message)
        self.line = line
        self.col = col
        self.message = message

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class DslSyntaxError(DslError):
    """The text does not match the grammar."""


class ElaborationError(DslError):
    """The file parses but does not describe well-typed games."""

    @classmethod
    def at(cls, node, message: str) -> ElaborationError:
        line, col = node.pos
        return cls(line, col, message)


# Types


@dataclass(frozen=True)
class TypeName:
    name: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class TypeProduct:
    left: object
    right: object
    pos: tuple = _pos()


# Element literals


@dataclass(frozen=True)
class ElemAtom:
    name: str
    pos: tuple = _pos()


@dataclass(frozen=True)
class ElemNumber:
    value: Fraction
    pos: tuple = _pos()


@dataclass(frozen=True)
class ElemBottom:
    pos: tuple = _pos()


@dataclass(frozen=True)
class ElemUnit:
    pos: tuple = _pos()


@dataclass(frozen=True)
class ElemTuple:
    items: tuple
    pos: tuple = _pos()


# Game expressions


@dataclass(frozen=True)
class Seq:
    left: object
    right: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class Par:
    left: object
    right: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class Decision:
    observe: object
    choose: object
    player: str | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class Lift:
    name: str
    contra: bool = False
    pos: tuple = _pos()


@dataclass(frozen=True)
class Structural:
    kind: str
    carrier: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class Identity:
    fwd: object
    bwd: object | None = None
    pos: tuple = _pos()


@dataclass(frozen=True)
class Swap:
    first: object
    second: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class Transpose:
    body: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class Feedback:
    loop: object
    body: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class GameRef:
    name: str
    pos: tuple = _pos()


# Declarations


@dataclass(frozen=True)
class DomainDecl:
    name: str
    atoms: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class FnDecl:
    name: str
    src: object
    dst: object
    entries: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class PayoffDecl:
    name: str
    params: tuple
    rows: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class GameDecl:
    name: str
    body: object
    pos: tuple = _pos()


@dataclass(frozen=True)
class ContextDecl:
    game: str
    parts: tuple
    pos: tuple = _pos()


@dataclass(frozen=True)
class GameFile:
    mode: str
    decls: tuple
    pos: tuple = _pos()
