from app.dsl.ast import DslError, DslSyntaxError, ElaborationError
from app.dsl.elaborator import GameEnv, elaborate
from app.dsl.parser import parse, parse_bytes
from app.dsl.pretty import pretty

__all__ = [
    "DslError",
    "DslSyntaxError",
    "ElaborationError",
    "GameEnv",
    "elaborate",
    "parse",
    "parse_bytes",
    "pretty",
]
