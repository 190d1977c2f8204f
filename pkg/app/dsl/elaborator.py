"""Turn a parsed game file into carriers, tables, payoffs and open games."""

from __future__ import annotations

import copy
import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass, field

from app.core.base import (
    BOTTOM,
    DCPO,
    SET,
    Carrier,
    EngineError,
    FnTable,
    MonotonicityError,
    TableError,
    fold_product,
    format_element,
    make_carrier,
    payoff_domain,
    product,
    unfold_element,
    unit_carrier,
    validate_table,
)
from app.core.builders import PayoffTable, payoff_table
from app.core.category import Interface
from app.core.context import ContextStructure, TracedContextStructure, structure_for
from app.core.lens import lens_structural, lift
from app.core.opengame import (
    BudgetExceededError,
    OpenGame,
    og_collapse,
    og_decision,
    og_feedback,
    og_pure,
    og_reshape,
    og_tensor,
    og_then,
    og_transpose,
)
from app.dsl.ast import (
    ContextDecl,
    Decision,
    DomainDecl,
    ElaborationError,
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

logger = logging.getLogger(__name__)

RESERVED_TYPES = ("1", "R")

# Largest label table a run of pure steps is collapsed into at elaboration.
COLLAPSE_LIMIT = 4096


@dataclass
class GameEnv:
    """Everything a game file declares, resolved and checked."""

    mode: str
    structure: ContextStructure
    reals: Carrier
    domains: dict[str, Carrier] = field(default_factory=dict)
    functions: dict[str, FnTable] = field(default_factory=dict)
    payoffs: dict[str, PayoffTable] = field(default_factory=dict)
    games: dict[str, OpenGame] = field(default_factory=dict)
    contexts: dict[str, object] = field(default_factory=dict)

    def context_from_names(self, game: OpenGame, names, node=None):
        """A context for ``game`` from declared tables: ``(h, k)`` or a single ``m``.

        ``h`` is a table ``1 -> X`` giving the history, ``k`` a table from the
        game's target forward carrier to its backward one. A single table is
        a reverse morphism and is only meaningful in dcpo mode.
        """
        tables = []
        for name in names:
            if name not in self.functions:
                raise _error(node, f"undeclared fn {name}")
            tables.append(self.functions[name])
        with _reporting(node):
            if len(tables) == 2:
                h, k = tables
                if h.src.size != 1:
                    raise _error(node, f"history table must start at 1, got {h.src}")
                return self.structure.from_parts(game.src, game.dst, h.images[0], k)
            if len(tables) == 1 and isinstance(self.structure, TracedContextStructure):
                return self.structure.from_table(game.src, game.dst, tables[0])
            raise _error(node, "a context needs two tables h, k (or one reverse table in dcpo mode)")


class _Origin:
    pos = (1, 1)


_ORIGIN = _Origin()


def _error(node, message: str) -> ElaborationError:
    return ElaborationError.at(node or _ORIGIN, message)


@contextmanager
def _reporting(node):
    """Re-raise engine errors as diagnostics at ``node``; budgets pass through."""
    try:
        yield
    except (ElaborationError, BudgetExceededError):
        raise
    except EngineError as exc:
        raise _error(node, str(exc)) from None


def _literal_numbers(node, out: set) -> None:
    if isinstance(node, ElemNumber):
        out.add(node.value)
    elif isinstance(node, ElemTuple):
        for item in node.items:
            _literal_numbers(item, out)


def _leaves(node) -> list:
    if isinstance(node, ElemTuple):
        return [leaf for item in node.items for leaf in _leaves(item)]
    if isinstance(node, ElemUnit):
        return []
    return [node]


class Elaborator:
    def __init__(self, ast: GameFile):
        self.ast = ast
        values: set = set()
        for decl in ast.decls:
            if isinstance(decl, (FnDecl, PayoffDecl)):
                for lhs, rhs in decl.entries if isinstance(decl, FnDecl) else decl.rows:
                    _literal_numbers(lhs, values)
                    _literal_numbers(rhs, values)
        self.env = GameEnv(ast.mode, structure_for(ast.mode), payoff_domain(ast.mode, values))
        self._decisions = 0

    @property
    def mode(self) -> str:
        return self.env.mode

    def run(self) -> GameEnv:
        for decl in self.ast.decls:
            if isinstance(decl, DomainDecl):
                self._domain(decl)
            elif isinstance(decl, FnDecl):
                self._fn(decl)
            elif isinstance(decl, PayoffDecl):
                self._payoff(decl)
            elif isinstance(decl, GameDecl):
                self._game(decl)
            elif isinstance(decl, ContextDecl):
                self._context(decl)
        return self.env

    # Declarations

    def _domain(self, decl: DomainDecl) -> None:
        if decl.name in RESERVED_TYPES:
            raise _error(decl, f"domain name {decl.name} is reserved")
        if decl.name in self.env.domains:
            raise _error(decl, f"duplicate domain {decl.name}")
        if len(set(decl.atoms)) != len(decl.atoms):
            duplicate = next(a for a in decl.atoms if decl.atoms.count(a) > 1)
            raise _error(decl, f"duplicate atom {duplicate} in domain {decl.name}")
        self.env.domains[decl.name] = make_carrier(self.mode, decl.atoms, name=decl.name)
        logger.debug("domain %s = %s", decl.name, decl.atoms)

    def _fn(self, decl: FnDecl) -> None:
        if decl.name in self.env.functions:
            raise _error(decl, f"duplicate fn {decl.name}")
        src, dst = self.carrier(decl.src), self.carrier(decl.dst)
        mapping: dict = {}
        for lhs, rhs in decl.entries:
            x = self.element(lhs, src)
            if x in mapping:
                raise _error(lhs, f"duplicate entry for {format_element(x)} in fn {decl.name}")
            mapping[x] = self.element(rhs, dst)
        images = []
        for x in src.elements:
            if x in mapping:
                images.append(mapping[x])
            elif self.mode == DCPO and _mentions_bottom(x):
                images.append(dst.bottom)
            else:
                raise _error(decl, f"fn {decl.name} is missing an entry for {format_element(x)}")
        table = FnTable(src, dst, tuple(images))
        try:
            validate_table(table)
        except MonotonicityError as exc:
            raise _error(decl, f"fn {decl.name} is {exc}") from None
        self.env.functions[decl.name] = table

    def _payoff(self, decl: PayoffDecl) -> None:
        if decl.name in self.env.payoffs:
            raise _error(decl, f"duplicate payoff {decl.name}")
        players = [self.carrier(p) for p in decl.params]
        moves_carrier = fold_product(players, self.mode)
        pays_carrier = fold_product([self.env.reals] * len(players), self.mode)
        n = len(players)
        rows = []
        for lhs, rhs in decl.rows:
            moves = self.element(lhs, moves_carrier)
            pays = self.element(rhs, pays_carrier)
            rows.append((unfold_element(moves, n), unfold_element(pays, n)))
        try:
            self.env.payoffs[decl.name] = payoff_table(players, self.env.reals, rows)
        except TableError as exc:
            raise _error(decl, f"payoff {decl.name}: {exc}") from None

    def _game(self, decl: GameDecl) -> None:
        if decl.name in self.env.games:
            raise _error(decl, f"duplicate game {decl.name}")
        self._decisions = 0
        try:
            game = copy.copy(self.game(decl.body))
            size = game.strategies.size
        except RecursionError:
            raise _error(decl, f"game {decl.name} is nested too deeply") from None
        game.name = decl.name
        self.env.games[decl.name] = game
        logger.debug("game %s: %s -> %s, %d profiles", decl.name, game.src, game.dst, size)

    def _context(self, decl: ContextDecl) -> None:
        if decl.game not in self.env.games:
            raise _error(decl, f"undeclared game {decl.game}")
        if decl.game in self.env.contexts:
            raise _error(decl, f"duplicate context for game {decl.game}")
        game = self.env.games[decl.game]
        self.env.contexts[decl.game] = self.env.context_from_names(game, decl.parts, decl)

    # Types and elements

    def carrier(self, node) -> Carrier:
        if isinstance(node, TypeProduct):
            return product(self.carrier(node.left), self.carrier(node.right))
        if not isinstance(node, TypeName):
            raise _error(node, f"unknown type expression {type(node).__name__}")
        if node.name == "1":
            return unit_carrier(self.mode)
        if node.name == "R":
            return self.env.reals
        if node.name not in self.env.domains:
            raise _error(node, f"undeclared domain {node.name}")
        return self.env.domains[node.name]

    def element(self, node, carrier: Carrier):
        if carrier.is_unit and isinstance(node, ElemUnit):
            return carrier.point()
        if isinstance(node, ElemBottom):
            if carrier.mode != DCPO:
                raise _error(node, "bot is only available in dcpo mode")
            return carrier.bottom
        if isinstance(node, ElemTuple) and len(node.items) == 2 and carrier.is_product:
            return (self.element(node.items[0], carrier.left), self.element(node.items[1], carrier.right))
        if not isinstance(node, ElemTuple) and not carrier.is_product:
            return self._atom(node, carrier)
        leaves = _leaves(node)
        factors = carrier.normal_form
        if len(leaves) != len(factors):
            raise _error(node, f"expected {len(factors)} components for {carrier}, got {len(leaves)}")
        return carrier.unflatten(tuple(self.element(leaf, factor) for leaf, factor in zip(leaves, factors)))

    def _atom(self, node, carrier: Carrier):
        if isinstance(node, ElemAtom):
            value = node.name
        elif isinstance(node, ElemNumber):
            value = node.value
        else:
            value = None
        if value is None or value not in carrier.atoms:
            raise _error(node, f"{_describe(node)} is not an element of {carrier}")
        return value

    # Game expressions

    def game(self, node) -> OpenGame:
        structure = self.env.structure
        category = structure.category
        if isinstance(node, Seq):
            return self._sequence(node)
        if isinstance(node, Par):
            return self._parallel(node)
        if isinstance(node, Decision):
            observe, choose = self.carrier(node.observe), self.carrier(node.choose)
            self._decisions += 1
            player = node.player or f"decision{self._decisions}"
            with _reporting(node):
                return og_decision(structure, observe, choose, self.env.reals, player)
        if isinstance(node, Lift):
            if node.name not in self.env.functions:
                raise _error(node, f"undeclared fn {node.name}")
            lens = lift(self.env.functions[node.name], "contra" if node.contra else "cov")
            return og_pure(structure, category.from_lens(lens), name=f"lift {node.name}")
        if isinstance(node, Structural):
            carrier = self.carrier(node.carrier)
            return og_pure(structure, category.from_lens(lens_structural(node.kind, carrier)), name=node.kind)
        if isinstance(node, Identity):
            bwd = unit_carrier(self.mode) if node.bwd is None else self.carrier(node.bwd)
            interface = Interface(self.carrier(node.fwd), bwd)
            return og_pure(structure, category.identity(interface), name="id")
        if isinstance(node, Swap):
            a, b = self.carrier(node.first), self.carrier(node.second)
            table = FnTable.tabulate(product(a, b), product(b, a), lambda p: (p[1], p[0]))
            return og_pure(structure, category.from_lens(lift(table)), name="swap")
        if isinstance(node, Transpose):
            self._require_dcpo(node, "transpose")
            body = self.game(node.body)
            with _reporting(node):
                return og_transpose(body)
        if isinstance(node, Feedback):
            self._require_dcpo(node, "feedback")
            return self._feedback(node)
        if isinstance(node, GameRef):
            if node.name not in self.env.games:
                raise _error(node, f"undeclared game {node.name}")
            return self.env.games[node.name]
        raise _error(node, f"unknown game expression {type(node).__name__}")

    def _sequence(self, node: Seq) -> OpenGame:
        """Compose a ``;`` chain left to right; each run of pure steps becomes one pure game."""
        head, links = _spine(node, Seq)
        games = [self.game(head)]
        for link in links:
            right = self.game(link.right)
            if games[-1].dst.normal_form != right.src.normal_form:
                raise _error(link, f"cannot compose: {games[-1].dst} does not match {right.src}")
            games.append(right)

        result = pending = None
        for link, game in zip([node, *links], games):
            with _reporting(link):
                if game.pure:
                    pending = game if pending is None else _collapse(og_then(pending, game))
                    continue
                if pending is not None:
                    result = pending if result is None else og_then(result, pending)
                    pending = None
                result = game if result is None else og_then(result, game)
        if pending is not None:
            with _reporting(node):
                result = pending if result is None else og_then(result, pending)
        return result

    def _parallel(self, node: Par) -> OpenGame:
        head, links = _spine(node, Par)
        result = self.game(head)
        pure = result.pure
        for link in links:
            right = self.game(link.right)
            pure = pure and right.pure
            with _reporting(link):
                result = og_tensor(result, right)
                if pure:
                    result = _collapse(result)
        return result

    def _require_dcpo(self, node, what: str) -> None:
        if self.mode == SET:
            raise _error(node, f"{what} is only available in dcpo mode")

    def _feedback(self, node: Feedback) -> OpenGame:
        loop_carrier = self.carrier(node.loop)
        body = self.game(node.body)
        unit = unit_carrier(self.mode)
        loop = Interface(loop_carrier, unit)
        tail = loop_carrier.normal_form
        src_parts, dst_parts = body.src.fwd.normal_form, body.dst.fwd.normal_form
        if not (_ends_with(src_parts, tail) and _ends_with(dst_parts, tail)):
            raise _error(
                node,
                f"feedback loop {loop_carrier} does not match the trailing factors of {body.src} -> {body.dst}",
            )
        cut = len(src_parts) - len(tail)
        a = Interface(fold_product(src_parts[:cut], self.mode), body.src.bwd)
        cut = len(dst_parts) - len(tail)
        b = Interface(fold_product(dst_parts[:cut], self.mode), body.dst.bwd)
        with _reporting(node):
            return og_feedback(og_reshape(body, a.tensor(loop), b.tensor(loop)), loop)


def _collapse(game: OpenGame) -> OpenGame:
    """Collapse a pure composite unless its label table would exceed ``COLLAPSE_LIMIT`` entries."""
    if _count(game.src.fwd) * _count(game.dst.bwd) > COLLAPSE_LIMIT:
        return game
    return og_collapse(game)


def _count(carrier: Carrier) -> int:
    return math.prod(factor.size for factor in carrier.normal_form)


def _spine(node, kind) -> tuple:
    """The leftmost operand of a left-nested ``kind`` chain and its links, innermost first."""
    links = []
    while isinstance(node, kind):
        links.append(node)
        node = node.left
    return node, links[::-1]


def _ends_with(parts: tuple, tail: tuple) -> bool:
    return len(tail) <= len(parts) and parts[len(parts) - len(tail):] == tail


def _mentions_bottom(element) -> bool:
    if isinstance(element, tuple):
        return any(_mentions_bottom(e) for e in element)
    return element is BOTTOM


def _describe(node) -> str:
    if isinstance(node, ElemAtom):
        return node.name
    if isinstance(node, ElemNumber):
        return str(node.value)
    if isinstance(node, ElemBottom):
        return "bot"
    if isinstance(node, ElemUnit):
        return "*"
    return "tuple"


def elaborate(ast: GameFile) -> GameEnv:
    return Elaborator(ast).run()
