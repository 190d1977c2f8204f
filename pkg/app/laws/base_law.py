import logging
import random
import time
from abc import ABC, abstractmethod
from typing import Dict, Optional

from app.core.base import DCPO, SET, EngineError, FnTable
from app.core.category import Interface
from app.core.intcat import IntMorphism, TracedContext
from app.core.lens import Lens, LensCategory, LensContext, lens_compose, lens_dcpo, lens_from_functions, lens_set
from app.models.schemas import LawResult
from app.utils.helpers import format_table, format_value

logger = logging.getLogger(__name__)

FAULTS = ("compose",)

Counterexample = Dict[str, str]


class FaultyLensCategory(LensCategory):
    """Lens composition that feeds a fixed view point to the outer update."""

    def compose(self, after: Lens, before: Lens) -> Lens:
        lens = lens_compose(after, before)
        stuck = after.src.fwd.elements[-1]
        return lens_from_functions(
            lens.src,
            lens.dst,
            lens.view,
            lambda x, q: before.update((x, after.update((stuck, q)))),
        )


def describe(**values) -> Counterexample:
    """Render the pieces of a failing instance as text."""
    out: Counterexample = {}
    for key, value in values.items():
        if isinstance(value, FnTable):
            out[key] = format_table(value)
        elif isinstance(value, Lens):
            out[key] = f"{value.src} -> {value.dst}; view {format_table(value.view)}; update {format_table(value.update)}"
        elif isinstance(value, IntMorphism):
            out[key] = f"{value.src} -> {value.dst}; {format_table(value.table)}"
        elif isinstance(value, Interface):
            out[key] = str(value)
        elif isinstance(value, LensContext):
            out[key] = f"history {format_value(value.history)}; continuation {format_table(value.continuation)}"
        elif isinstance(value, TracedContext):
            out[key] = f"reverse {format_table(value.morphism.table)}"
        else:
            out[key] = format_value(value)
    return out


class BaseLaw(ABC):
    """A property checked on seeded random instances.

    ``check`` returns ``None`` when the instance satisfies the law and a
    counterexample otherwise. The first counterexample is kept.
    """

    modes = (SET, DCPO)
    min_instances = 1

    def __init__(self, name: str, module: str, description: str = ""):
        self.name = name
        self.module = module
        self.description = description
        self.fault: Optional[str] = None

    @abstractmethod
    def check(self, rng: random.Random, mode: str, max_atoms: int) -> Optional[Counterexample]:
        """Check one random instance"""

    def lenses(self, mode: str) -> LensCategory:
        if self.fault == "compose":
            return FaultyLensCategory(mode)
        return lens_set if mode == SET else lens_dcpo

    def run(self, seed: int, instances: int, max_atoms: int, timing: bool = False) -> LawResult:
        """Check ``instances`` seeded instances, or the law's own ``min_instances`` if that is larger."""
        instances = max(instances, self.min_instances)
        rng = random.Random(f"{seed}:{self.name}")
        started = time.perf_counter()
        failures = 0
        counterexample = None
        for i in range(instances):
            mode = self.modes[i % len(self.modes)]
            try:
                found = self.check(rng, mode, max_atoms)
            except EngineError as exc:
                found = {"error": f"{type(exc).__name__}: {exc}"}
            if found is not None:
                failures += 1
                if counterexample is None:
                    counterexample = {"instance": str(i), "mode": mode, **found}
        elapsed = time.perf_counter() - started
        logger.debug("law %s: %d/%d failed in %.3fs", self.name, failures, instances, elapsed)
        return LawResult(
            name=self.name,
            module=self.module,
            description=self.description,
            instances=instances,
            failures=failures,
            passed=failures == 0,
            counterexample=counterexample,
            elapsed_seconds=round(elapsed, 3) if timing else None,
        )
