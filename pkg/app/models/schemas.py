from typing import Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1
TOOL_NAME = "ogame"


class DecisionPlay(BaseModel):
    """One decision's visible play under the analysed context."""

    player: str
    history: str
    move: str
    payoff: str
    best: List[str] = Field(default_factory=list)
    ok: bool = True


class EquilibriumEntry(BaseModel):
    profile: Dict[str, str]
    plays: List[DecisionPlay] = Field(default_factory=list)


class GameReport(BaseModel):
    name: str
    mode: str
    structure: str
    src: str
    dst: str
    players: List[str] = Field(default_factory=list)
    profile_count: int
    context: str
    equilibrium_count: int
    equilibria: List[EquilibriumEntry] = Field(default_factory=list)
    elapsed_seconds: Optional[float] = None


class AnalysisReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    tool: str = TOOL_NAME
    version: str
    input: str
    input_sha256: str
    mode: str
    games: List[GameReport] = Field(default_factory=list)


class LawResult(BaseModel):
    name: str
    module: str
    description: str = ""
    instances: int
    failures: int = 0
    passed: bool = True
    counterexample: Optional[Dict[str, str]] = None
    elapsed_seconds: Optional[float] = None


class LawReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    tool: str = TOOL_NAME
    version: str
    seed: int
    instances: int
    max_atoms: int
    fault: Optional[str] = None
    passed: bool = True
    laws: List[LawResult] = Field(default_factory=list)
    elapsed_seconds: Optional[float] = None
