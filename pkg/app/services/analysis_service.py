import logging
import time
from pathlib import Path
from typing import List, Optional, Sequence

from app import __version__
from app.config.settings import settings
from app.core.base import DCPO
from app.core.opengame import OpenGame, og_equilibria
from app.dsl import GameEnv, elaborate, parse_bytes, pretty
from app.models.schemas import AnalysisReport, DecisionPlay, EquilibriumEntry, GameReport
from app.utils.helpers import content_sha256, format_strategy, format_value

logger = logging.getLogger(__name__)


class AnalysisError(Exception):
    """A request the game file cannot answer: unknown game, missing or bad context."""


class AnalysisService:
    def load(self, data: bytes) -> GameEnv:
        """Parse and elaborate a game file."""
        return elaborate(parse_bytes(data))

    def format_source(self, data: bytes) -> str:
        return pretty(parse_bytes(data))

    def analyze_file(
        self,
        path: Path,
        game: Optional[str] = None,
        context: Optional[Sequence[str]] = None,
        budget: Optional[int] = None,
    ) -> AnalysisReport:
        data = Path(path).read_bytes()
        return self.analyze(data, str(path), game=game, context=context, budget=budget)

    def analyze(
        self,
        data: bytes,
        source: str,
        game: Optional[str] = None,
        context: Optional[Sequence[str]] = None,
        budget: Optional[int] = None,
    ) -> AnalysisReport:
        """Equilibria of one game, or of every analysable game in declaration order.

        A game is analysable against a ``--context`` given on the command line,
        a ``context`` declaration in the file, or, if it is scalar, the trivial
        context. Without ``game``, games with none of these are skipped.
        """
        env = self.load(data)
        if game is not None and game not in env.games:
            raise AnalysisError(f"unknown game {game}")
        if context and game is None and len(env.games) != 1:
            raise AnalysisError("--context needs --game when the file declares several games")

        names = [game] if game is not None else list(env.games)
        reports: List[GameReport] = []
        for name in names:
            ctx, origin = self._context(env, env.games[name], context, required=game is not None)
            if ctx is None:
                logger.warning("skipping %s: not scalar and no context declared", name)
                continue
            try:
                reports.append(self._report(env, env.games[name], ctx, origin, budget))
            except RecursionError:
                raise AnalysisError(f"game {name} is nested too deeply to analyze") from None

        return AnalysisReport(
            version=__version__,
            input=source,
            input_sha256=content_sha256(data),
            mode=env.mode,
            games=reports,
        )

    def _context(self, env: GameEnv, game: OpenGame, names, required: bool):
        if names:
            return env.context_from_names(game, names), "argument"
        if game.name in env.contexts:
            return env.contexts[game.name], "declared"
        if game.is_scalar():
            return env.structure.trivial(game.src, game.dst), "trivial"
        if required:
            raise AnalysisError(
                f"game {game.name} is not scalar ({game.src} -> {game.dst}); declare a context or pass --context"
            )
        return None, None

    def _report(self, env: GameEnv, game: OpenGame, ctx, origin: str, budget: Optional[int]) -> GameReport:
        started = time.perf_counter()
        budget = settings.max_profiles if budget is None else budget
        equilibria = og_equilibria(game, ctx, budget=budget)
        labels = game.strategies.labels()
        entries = []
        for profile in equilibria:
            strategies = [format_strategy(s) for s in game.flatten(profile)]
            plays = [self._play(play) for play in game.outcomes(profile, ctx)] if env.mode == DCPO else []
            entries.append(EquilibriumEntry(profile=dict(zip(labels, strategies)), plays=plays))
        elapsed = time.perf_counter() - started
        logger.info("%s: %d of %d profiles in equilibrium", game.name, len(entries), game.strategies.size)
        return GameReport(
            name=game.name,
            mode=env.mode,
            structure=env.structure.name,
            src=str(game.src),
            dst=str(game.dst),
            players=labels,
            profile_count=game.strategies.size,
            context=origin,
            equilibrium_count=len(entries),
            equilibria=entries,
            elapsed_seconds=round(elapsed, 3) if settings.report_timing else None,
        )

    @staticmethod
    def _play(play) -> DecisionPlay:
        return DecisionPlay(
            player=play.player,
            history=format_value(play.history),
            move=format_value(play.move),
            payoff=format_value(play.payoff),
            best=[format_value(y) for y in play.best],
            ok=play.ok,
        )


analysis_service = AnalysisService()
