"""Canonical printer for ``.og`` syntax trees; ``parse(pretty(ast)) == ast``."""

from __future__ import annotations

from app.dsl.ast import (
    ContextDecl,
    Decision,
    DomainDecl,
    ElemAtom,
    ElemBottom,
    ElemNumber,
    ElemTuple,
    ElemUnit,
    Feedback,
    FnDecl,
    GameDecl,
    GameFile,
    GameRef,
    Identity,
    Lift,
    Par,
    PayoffDecl,
    Seq,
    Structural,
    Swap,
    Transpose,
    TypeName,
    TypeProduct,
)

INDENT = "  "

# Binding strength: `;` is loosest, `||` next, everything else is atomic.
_SEQ, _PAR, _ATOM = 1, 2, 3


def pretty_type(node) -> str:
    if isinstance(node, TypeName):
        return node.name
    if isinstance(node, TypeProduct):
        right = pretty_type(node.right)
        if isinstance(node.right, TypeProduct):
            right = f"({right})"
        return f"{pretty_type(node.left)} * {right}"
    raise TypeError(f"not a type node: {node!r}")


def pretty_elem(node) -> str:
    if isinstance(node, ElemAtom):
        return node.name
    if isinstance(node, ElemNumber):
        return str(node.value)
    if isinstance(node, ElemBottom):
        return "bot"
    if isinstance(node, ElemUnit):
        return "*"
    if isinstance(node, ElemTuple):
        return "(" + ", ".join(pretty_elem(item) for item in node.items) + ")"
    raise TypeError(f"not an element node: {node!r}")


def _strength(node) -> int:
    if isinstance(node, Seq):
        return _SEQ
    if isinstance(node, Par):
        return _PAR
    return _ATOM


def _chain(node) -> str:
    """A left-nested run of one operator, walked along its spine."""
    kind = type(node)
    operator, first, rest = (" ; ", _SEQ, _PAR) if kind is Seq else (" || ", _PAR, _ATOM)
    items = []
    while isinstance(node, kind):
        items.append(pretty_game(node.right, rest))
        node = node.left
    items.append(pretty_game(node, first))
    return operator.join(reversed(items))


def pretty_game(node, minimum: int = _SEQ) -> str:
    if isinstance(node, (Seq, Par)):
        text = _chain(node)
    elif isinstance(node, Decision):
        args = [pretty_type(node.observe), pretty_type(node.choose)]
        if node.player is not None:
            args.append(node.player)
        text = f"decision({', '.join(args)})"
    elif isinstance(node, Lift):
        text = f"{'liftop' if node.contra else 'lift'} {node.name}"
    elif isinstance(node, Structural):
        text = f"{node.kind}({pretty_type(node.carrier)})"
    elif isinstance(node, Identity):
        if node.bwd is None:
            text = f"id({pretty_type(node.fwd)})"
        else:
            text = f"id({pretty_type(node.fwd)}, {pretty_type(node.bwd)})"
    elif isinstance(node, Swap):
        text = f"swap({pretty_type(node.first)}, {pretty_type(node.second)})"
    elif isinstance(node, Transpose):
        text = f"transpose({pretty_game(node.body)})"
    elif isinstance(node, Feedback):
        text = f"feedback({pretty_type(node.loop)}, {pretty_game(node.body)})"
    elif isinstance(node, GameRef):
        text = node.name
    else:
        raise TypeError(f"not a game node: {node!r}")
    return f"({text})" if _strength(node) < minimum else text


def _entries(entries) -> list[str]:
    return [f"{INDENT}{pretty_elem(lhs)} -> {pretty_elem(rhs)}" for lhs, rhs in entries]


def pretty_decl(decl) -> str:
    if isinstance(decl, DomainDecl):
        return f"domain {decl.name} = {{{', '.join(decl.atoms)}}}"
    if isinstance(decl, FnDecl):
        head = f"fn {decl.name} : {pretty_type(decl.src)} -> {pretty_type(decl.dst)} {{"
        return "\n".join([head, *_entries(decl.entries), "}"])
    if isinstance(decl, PayoffDecl):
        head = f"payoff {decl.name}({', '.join(pretty_type(p) for p in decl.params)}) {{"
        return "\n".join([head, *_entries(decl.rows), "}"])
    if isinstance(decl, GameDecl):
        return f"game {decl.name} = {pretty_game(decl.body)}"
    if isinstance(decl, ContextDecl):
        return f"context {decl.game} = {', '.join(decl.parts)}"
    raise TypeError(f"not a declaration: {decl!r}")


def pretty(ast: GameFile) -> str:
    blocks = [f"#mode {ast.mode}", *(pretty_decl(decl) for decl in ast.decls)]
    return "\n\n".join(blocks) + "\n"
