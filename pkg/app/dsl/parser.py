"""pyparsing grammar for ``.og`` game files."""

from __future__ import annotations

import logging
from fractions import Fraction

import pyparsing as pp

from app.dsl.ast import (
    ContextDecl,
    Decision,
    DomainDecl,
    DslSyntaxError,
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

pp.ParserElement.enable_packrat()

KEYWORDS = frozenset(
    {
        "domain",
        "fn",
        "payoff",
        "game",
        "context",
        "decision",
        "lift",
        "liftop",
        "copy",
        "delete",
        "counit",
        "transpose",
        "feedback",
        "id",
        "swap",
        "bot",
    }
)


class _Op:
    """An infix operator token with its position."""

    def __init__(self, symbol: str, pos: tuple):
        self.symbol = symbol
        self.pos = pos


def _at(s: str, loc: int) -> tuple:
    return (pp.lineno(loc, s), pp.col(loc, s))


def _node(build):
    def action(s, loc, toks):
        return [build(list(toks), _at(s, loc))]

    return action


def _fold(node_cls):
    def action(s, loc, toks):
        items = list(toks[0])
        result = items[0]
        for i in range(1, len(items), 2):
            result = node_cls(result, items[i + 1], pos=items[i].pos)
        return [result]

    return action


def _fold_type(toks, pos):
    result = toks[0]
    for right in toks[1:]:
        result = TypeProduct(result, right, pos=pos)
    return result


def _tuple_or_item(toks, pos):
    return toks[0] if len(toks) == 1 else ElemTuple(tuple(toks), pos=pos)


def _kw(word: str):
    return pp.Keyword(word).suppress()


class GameParser:
    def __init__(self):
        lpar, rpar = pp.Suppress("("), pp.Suppress(")")
        lbrace, rbrace = pp.Suppress("{"), pp.Suppress("}")
        comma, colon, equals = pp.Suppress(","), pp.Suppress(":"), pp.Suppress("=")
        arrow, star = pp.Suppress("->"), pp.Suppress("*")

        self.ident = pp.Regex(r"[^\W\d]\w*").add_condition(
            lambda toks: toks[0] not in KEYWORDS, message="reserved word"
        )
        self.ident.set_name("identifier")

        # Element literals
        number = pp.Regex(r"-?\d+(?:/0*[1-9]\d*)?").set_name("number")
        number.set_parse_action(_node(lambda t, pos: ElemNumber(Fraction(t[0]), pos=pos)))
        bottom = (pp.Keyword("bot") | pp.Literal("⊥")).set_parse_action(_node(lambda t, pos: ElemBottom(pos=pos)))
        unit_elem = pp.Literal("*").set_parse_action(_node(lambda t, pos: ElemUnit(pos=pos)))
        atom = self.ident.copy().add_parse_action(_node(lambda t, pos: ElemAtom(t[0], pos=pos)))
        self.elem = pp.Forward().set_name("element")
        elem_tuple = (lpar + self.elem + pp.ZeroOrMore(comma + self.elem) + rpar).set_parse_action(
            _node(_tuple_or_item)
        )
        self.elem <<= bottom | number | unit_elem | atom | elem_tuple
        entry = (self.elem + arrow + self.elem + pp.Optional(comma)).set_parse_action(
            lambda toks: [(toks[0], toks[1])]
        )

        # Types
        self.type_ = pp.Forward().set_name("type")
        unit_type = pp.Regex(r"1(?!\w)").set_parse_action(_node(lambda t, pos: TypeName("1", pos=pos)))
        named_type = self.ident.copy().add_parse_action(_node(lambda t, pos: TypeName(t[0], pos=pos)))
        type_atom = unit_type | named_type | (lpar + self.type_ + rpar)
        self.type_ <<= (type_atom + pp.ZeroOrMore(star + type_atom)).set_parse_action(_node(_fold_type))

        # Game expressions
        self.gexpr = pp.Forward().set_name("game expression")
        decision = (
            _kw("decision") + lpar + self.type_ + comma + self.type_ + pp.Optional(comma + self.ident) + rpar
        ).set_parse_action(_node(lambda t, pos: Decision(t[0], t[1], t[2] if len(t) > 2 else None, pos=pos)))
        lift = (_kw("lift") + self.ident).set_parse_action(_node(lambda t, pos: Lift(t[0], False, pos=pos)))
        liftop = (_kw("liftop") + self.ident).set_parse_action(_node(lambda t, pos: Lift(t[0], True, pos=pos)))
        structural = (
            (pp.Keyword("copy") | pp.Keyword("delete") | pp.Keyword("counit")) + lpar + self.type_ + rpar
        ).set_parse_action(_node(lambda t, pos: Structural(t[0], t[1], pos=pos)))
        transpose = (_kw("transpose") + lpar + self.gexpr + rpar).set_parse_action(
            _node(lambda t, pos: Transpose(t[0], pos=pos))
        )
        feedback = (_kw("feedback") + lpar + self.type_ + comma + self.gexpr + rpar).set_parse_action(
            _node(lambda t, pos: Feedback(t[0], t[1], pos=pos))
        )
        identity = (_kw("id") + lpar + self.type_ + pp.Optional(comma + self.type_) + rpar).set_parse_action(
            _node(lambda t, pos: Identity(t[0], t[1] if len(t) > 1 else None, pos=pos))
        )
        swap = (_kw("swap") + lpar + self.type_ + comma + self.type_ + rpar).set_parse_action(
            _node(lambda t, pos: Swap(t[0], t[1], pos=pos))
        )
        ref = self.ident.copy().add_parse_action(_node(lambda t, pos: GameRef(t[0], pos=pos)))
        operand = decision | liftop | lift | structural | transpose | feedback | identity | swap | ref

        par_op = pp.Literal("||").set_parse_action(lambda s, loc, toks: [_Op("||", _at(s, loc))])
        seq_op = pp.Literal(";").set_parse_action(lambda s, loc, toks: [_Op(";", _at(s, loc))])
        self.gexpr <<= pp.infix_notation(
            operand,
            [
                (par_op, 2, pp.OpAssoc.LEFT, _fold(Par)),
                (seq_op, 2, pp.OpAssoc.LEFT, _fold(Seq)),
            ],
        )

        # Declarations
        domain = (
            _kw("domain") - (self.ident + equals + lbrace + self.ident + pp.ZeroOrMore(comma + self.ident) + rbrace)
        ).set_parse_action(_node(lambda t, pos: DomainDecl(t[0], tuple(t[1:]), pos=pos)))
        fn = (
            _kw("fn") - (self.ident + colon + self.type_ + arrow + self.type_ + lbrace + pp.OneOrMore(entry) + rbrace)
        ).set_parse_action(_node(lambda t, pos: FnDecl(t[0], t[1], t[2], tuple(t[3:]), pos=pos)))
        payoff = (
            _kw("payoff")
            - (
                self.ident
                + lpar
                + self.type_
                + pp.ZeroOrMore(comma + self.type_)
                + rpar
                + lbrace
                + pp.OneOrMore(entry)
                + rbrace
            )
        ).set_parse_action(_node(self._payoff))
        game = (_kw("game") - (self.ident + equals + self.gexpr)).set_parse_action(
            _node(lambda t, pos: GameDecl(t[0], t[1], pos=pos))
        )
        context = (
            _kw("context") - (self.ident + equals + self.ident + pp.Optional(comma + self.ident))
        ).set_parse_action(_node(lambda t, pos: ContextDecl(t[0], tuple(t[1:]), pos=pos)))
        decl = domain | fn | payoff | game | context

        pragma = pp.Literal("#mode").suppress() + (pp.Keyword("set") | pp.Keyword("dcpo"))
        self.file = (pragma + pp.ZeroOrMore(decl) + pp.StringEnd()).set_parse_action(
            _node(lambda t, pos: GameFile(t[0], tuple(t[1:]), pos=(1, 1)))
        )
        self.file.ignore(pp.dbl_slash_comment)

    @staticmethod
    def _payoff(toks, pos):
        name = toks[0]
        params = tuple(t for t in toks[1:] if not isinstance(t, tuple))
        rows = tuple(t for t in toks[1:] if isinstance(t, tuple))
        return PayoffDecl(name, params, rows, pos=pos)

    def parse(self, text: str) -> GameFile:
        try:
            return self.file.parse_string(text, parse_all=True)[0]
        except pp.ParseBaseException as exc:
            raise DslSyntaxError(exc.lineno, exc.col, f"syntax error: {exc.msg}") from None
        except RecursionError:
            raise DslSyntaxError(1, 1, "syntax error: expression nested too deeply") from None


game_parser = GameParser()


def parse(text: str) -> GameFile:
    return game_parser.parse(text)


def parse_bytes(data: bytes) -> GameFile:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DslSyntaxError(1, 1, f"invalid UTF-8 at byte {exc.start}") from None
    return parse(text)
