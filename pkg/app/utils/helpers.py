import hashlib
from fractions import Fraction

from app.core.base import BOTTOM, FnTable, format_element


def content_sha256(content: bytes) -> str:
    """Hex digest identifying an input file in reports"""
    return hashlib.sha256(content).hexdigest()


def format_rational(value) -> str:
    """Exact payoff text: integers as ``3``, others as ``p/q``; bottom as ``⊥``."""
    if value is BOTTOM:
        return "⊥"
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_value(element) -> str:
    """Element text with exact rationals inside tuples as well."""
    if isinstance(element, Fraction):
        return format_rational(element)
    if isinstance(element, tuple):
        return "(" + ", ".join(format_value(e) for e in element) + ")"
    return format_element(element)


def format_strategy(strategy) -> str:
    if isinstance(strategy, FnTable):
        if strategy.src.size == 1:
            return format_value(strategy.images[0])
        pairs = ", ".join(f"{format_value(x)}->{format_value(y)}" for x, y in strategy.items())
        return "{" + pairs + "}"
    return format_value(strategy)


def format_table(table: FnTable) -> str:
    """A table with its type, for counterexamples."""
    return f"{table.src} -> {table.dst}: {format_strategy(table)}"
