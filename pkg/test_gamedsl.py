import random
from pathlib import Path

import pytest

from app.config.settings import settings
from app.core.base import BOTTOM, DCPO, SET
from app.core.builders import bimatrix_nash, fixpoint_nash, payoff_from_function, sequential_nash
from app.core.opengame import PURE_SPACE, BudgetExceededError, og_equilibria
from app.dsl import DslError, DslSyntaxError, ElaborationError, elaborate, parse, parse_bytes, pretty
from app.dsl.ast import Decision, GameDecl, Par, Seq

FIXTURES = Path(__file__).parent / "fixtures"
MALFORMED = sorted((FIXTURES / "malformed").glob("*.og"))
GAME_FILES = sorted(FIXTURES.glob("*.og"))


@pytest.fixture(autouse=True)
def _clean_overrides():
    yield
    settings.clear_overrides()


def load(name: str):
    return elaborate(parse_bytes((FIXTURES / name).read_bytes()))


def _first_moves(game, profiles):
    return {tuple(s.images[0] for s in game.flatten(p)) for p in profiles}


# Parsing and printing -----------------------------------------------------------


@pytest.mark.parametrize("path", GAME_FILES + MALFORMED, ids=lambda p: p.name)
def test_pretty_output_parses_back(path):
    ast = parse(path.read_text(encoding="utf-8"))
    text = pretty(ast)
    assert parse(text) == ast
    assert pretty(parse(text)) == text


def test_operator_precedence():
    ast = parse("#mode set\ngame g = a || b ; c || d ; e\n")
    (decl,) = ast.decls
    assert isinstance(decl, GameDecl)
    body = decl.body
    assert isinstance(body, Seq) and isinstance(body.left, Seq)
    assert isinstance(body.left.left, Par) and isinstance(body.left.right, Par)


def test_pretty_brackets_right_nested_sequences():
    ast = parse("#mode set\ngame g = a ; (b ; c)\n")
    assert "a ; (b ; c)" in pretty(ast)
    assert parse(pretty(ast)) == ast


def test_positions_are_not_part_of_equality():
    spaced = parse("#mode set\n\n\ngame   g =   decision( 1 , 1 )\n")
    tight = parse("#mode set\ngame g = decision(1, 1)\n")
    assert spaced == tight
    assert spaced.decls[0].pos == (4, 1)


def test_decision_player_is_optional():
    (decl,) = parse("#mode set\ngame g = decision(1, 1)\n").decls
    assert decl.body == Decision(decl.body.observe, decl.body.choose, None)


def test_comments_are_ignored():
    ast = parse("#mode set\n// nothing here\ndomain Coin = {H, T} // trailing\n")
    assert pretty(ast) == "#mode set\n\ndomain Coin = {H, T}\n"


@pytest.mark.parametrize(
    "text, line",
    [
        ("domain Coin = {H}\n", 1),
        ("#mode set\ndomain = {H}\n", 2),
        ("#mode set\ndomain Coin = {}\n", 2),
        ("#mode set\ngame g = decision(1)\n", 2),
        ("#mode set\ngame fn = decision(1, 1)\n", 2),
    ],
)
def test_syntax_errors_carry_a_position(text, line):
    with pytest.raises(DslSyntaxError) as info:
        parse(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"{line}:{info.value.col}: syntax error")


def test_invalid_utf8_is_a_diagnostic():
    with pytest.raises(DslSyntaxError) as info:
        parse_bytes(b"#mode set\n\xff")
    assert str(info.value) == "1:1: invalid UTF-8 at byte 10"


# Elaboration ----------------------------------------------------------------------


@pytest.mark.parametrize("path", MALFORMED, ids=lambda p: p.stem)
def test_malformed_fixtures_match_their_diagnostics(path):
    expected = path.with_suffix(".err").read_text(encoding="utf-8").strip()
    with pytest.raises(ElaborationError) as info:
        elaborate(parse_bytes(path.read_bytes()))
    assert str(info.value) == expected


def test_default_player_names_count_decisions():
    env = elaborate(parse("#mode set\ndomain Coin = {H, T}\ngame g = decision(1, Coin) || decision(1, Coin)\n"))
    assert env.games["g"].strategies.labels() == ["decision1", "decision2"]


def test_repeated_player_names_get_a_path():
    env = elaborate(parse("#mode set\ndomain Coin = {H, T}\ngame g = decision(1, Coin, p) || decision(1, Coin, p)\n"))
    assert env.games["g"].strategies.labels() == ["p@L", "p@R"]


def test_pure_steps_collapse_into_one_game():
    source = "#mode set\ndomain Coin = {H, T}\ngame g = decision(1, Coin, p) ; id(Coin, R) ; id(Coin, R)\n"
    env = elaborate(parse(source))
    strategies = env.games["g"].strategies
    assert strategies.labels() == ["p"]
    assert strategies.left.name == "p"
    assert strategies.right == PURE_SPACE


def test_game_references_keep_their_own_name():
    env = elaborate(parse("#mode set\ndomain Coin = {H, T}\ngame g = decision(1, Coin)\ngame h = g\n"))
    assert env.games["g"].name == "g"
    assert env.games["h"].name == "h"


def test_payoff_domain_collects_every_literal():
    env = load("prisoners_dilemma.og")
    assert [str(v) for v in env.reals.atoms] == ["-3", "-2", "-1", "0"]
    assert env.mode == SET


def test_dcpo_functions_default_bottom_rows():
    env = load("fixpoint_pennies.og")
    back = env.functions["back"]
    assert env.mode == DCPO
    assert back((BOTTOM, "a")) == (BOTTOM, BOTTOM)


def test_duplicate_context_is_rejected():
    source = (FIXTURES / "guess.og").read_text(encoding="utf-8") + "context guess = start, penalty\n"
    with pytest.raises(ElaborationError) as info:
        elaborate(parse(source))
    assert "duplicate context for game guess" in str(info.value)


def test_reverse_table_context_needs_dcpo():
    source = (FIXTURES / "guess.og").read_text(encoding="utf-8").replace("context guess = start, prize", "")
    source += "context guess = prize\n"
    with pytest.raises(ElaborationError) as info:
        elaborate(parse(source))
    assert "one reverse table in dcpo mode" in str(info.value)


# Games written in the language agree with the builders ------------------------------


@pytest.mark.parametrize(
    "name, game, payoff",
    [
        ("matching_pennies.og", "pennies", "pennies"),
        ("prisoners_dilemma.og", "dilemma", "dilemma"),
        ("coordination.og", "meet", "meet"),
    ],
)
def test_bimatrix_files(name, game, payoff):
    env = load(name)
    g = env.games[game]
    assert g.is_scalar()
    assert _first_moves(g, og_equilibria(g)) == set(bimatrix_nash(env.payoffs[payoff]))


def test_threat_file_matches_the_sequential_formula():
    env = load("threat.og")
    game = env.games["entry"]
    assert game.strategies.labels() == ["leader", "follower"]
    found = {(sigma.images[0], tau.images) for sigma, tau in (game.flatten(p) for p in og_equilibria(game))}
    oracle = {(a, tau.images) for a, tau in sequential_nash(env.functions["see"], env.payoffs["entry"])}
    assert found == oracle
    assert len(found) == 4


def test_fixpoint_file_matches_the_closed_form():
    env = load("fixpoint_pennies.og")
    assert not env.games["body"].is_scalar()
    game = env.games["pennies"]
    assert game.is_scalar()
    assert game.strategies.size == 121
    p = env.domains["P"]
    payoffs = payoff_from_function([p, p], env.reals, lambda x, y: (1, 0) if x == y else (0, 1))
    assert {game.flatten(profile) for profile in og_equilibria(game)} == set(fixpoint_nash(payoffs))


def test_declared_and_named_contexts():
    env = load("guess.og")
    game = env.games["guess"]
    declared = og_equilibria(game, env.contexts["guess"])
    assert _first_moves(game, declared) == {("H",)}
    named = og_equilibria(game, env.context_from_names(game, ["start", "penalty"]))
    assert _first_moves(game, named) == {("T",)}


# Robustness --------------------------------------------------------------------------


def _mutate(rng: random.Random, text: str) -> str:
    kind = rng.randrange(4)
    i = rng.randrange(len(text) + 1)
    if kind == 0:
        return text[:i] + text[i + rng.randint(1, 8):]
    if kind == 1:
        return text[:i] + rng.choice("(){},;*|-> \n=:abPR01⊥") + text[i:]
    if kind == 2:
        lines = text.splitlines(keepends=True)
        j = rng.randrange(len(lines))
        return "".join(lines[: j + 1] + lines[j:])
    j = rng.randrange(len(text) + 1)
    return text[: min(i, j)] + text[max(i, j):]


_GAME_HEADER = "#mode dcpo\ndomain P = {a, b}\nfn flip : P -> P {\n  a -> b\n  b -> a\n}\n"
_GAME_ATOMS = (
    "id(1)",
    "id(P)",
    "id(P, R)",
    "decision(P, P)",
    "decision(1, P)",
    "copy(P)",
    "delete(P)",
    "counit(P)",
    "swap(P, P)",
    "lift flip",
    "liftop flip",
)


def _random_game(rng: random.Random, depth: int) -> str:
    if depth <= 0 or rng.random() < 0.2:
        return rng.choice(_GAME_ATOMS)
    kind = rng.randrange(6)
    if kind == 0:
        return f"{_random_game(rng, depth - 1)} ; {_random_game(rng, depth - 1)}"
    if kind == 1:
        return f"{_random_game(rng, depth - 1)} || {_random_game(rng, depth - 1)}"
    if kind == 2:
        return f"transpose({_random_game(rng, depth - 1)})"
    if kind == 3:
        return f"feedback(P, {_random_game(rng, depth - 1)})"
    if kind == 4:
        return f"({_random_game(rng, depth - 1)})"
    operator = rng.choice((" ; ", " || "))
    return operator.join(rng.choice(_GAME_ATOMS) for _ in range(rng.randint(2, 40)))


def _fuzz(cases: int, seed: int) -> None:
    settings.set_override("MAX_PROFILES", 2000)
    rng = random.Random(seed)
    sources = [path.read_text(encoding="utf-8") for path in GAME_FILES]
    for n in range(cases):
        if n % 4 == 0:
            data = bytes(rng.randrange(256) for _ in range(rng.randint(0, 60)))
        elif n % 4 == 1:
            data = f"{_GAME_HEADER}game g = {_random_game(rng, rng.randint(1, 8))}\n".encode("utf-8")
        else:
            data = _mutate(rng, rng.choice(sources)).encode("utf-8")
        try:
            elaborate(parse_bytes(data))
        except (DslError, BudgetExceededError):
            pass


def test_fuzzed_inputs_only_raise_diagnostics():
    _fuzz(400, seed=2024)


@pytest.mark.slow
def test_fuzzed_inputs_only_raise_diagnostics_at_scale():
    _fuzz(10**5, seed=7)


def _chain_source(term: str, operator: str, count: int = 1500) -> str:
    return f"#mode set\n\ngame chain = {operator.join([term] * count)}\n"


def test_long_sequential_chains_elaborate_and_print():
    text = _chain_source("id(1)", " ; ")
    ast = parse(text)
    assert pretty(ast) == text
    game = elaborate(ast).games["chain"]
    assert game.strategies == PURE_SPACE
    assert len(og_equilibria(game)) == 1


@pytest.mark.parametrize(
    "term, operator",
    [("id(1)", " || "), ("decision(1, 1)", " || "), ("decision(1, 1)", " ; ")],
)
def test_long_chains_end_in_a_diagnostic_at_worst(term, operator):
    text = _chain_source(term, operator)
    assert pretty(parse(text)) == text
    try:
        elaborate(parse(text))
    except ElaborationError as exc:
        assert exc.line == 3
        assert "nested too deeply" in exc.message or "cannot compose" in exc.message
