import logging
import time
from typing import List, Optional, Sequence

from app import __version__
from app.config.settings import settings
from app.laws.base_law import FAULTS, BaseLaw
from app.laws.context_laws import CONTEXT_LAWS
from app.laws.game_laws import GAME_LAWS
from app.laws.int_laws import INT_LAWS
from app.laws.kleene_laws import BASE_LAWS
from app.laws.lens_laws import LENS_LAWS
from app.models.schemas import LawReport

logger = logging.getLogger(__name__)

MAX_ATOMS_LIMIT = 3


class LawConfigError(ValueError):
    """Invalid law-run parameters."""


class LawService:
    def __init__(self):
        self.catalogue = (*BASE_LAWS, *LENS_LAWS, *CONTEXT_LAWS, *INT_LAWS, *GAME_LAWS)

    def names(self) -> List[str]:
        return [law.name for law in self.laws()]

    def laws(self, fault: Optional[str] = None, only: Optional[Sequence[str]] = None) -> List[BaseLaw]:
        laws = [law_cls() for law_cls in self.catalogue]
        if only:
            unknown = set(only) - {law.name for law in laws}
            if unknown:
                raise LawConfigError(f"unknown law(s): {', '.join(sorted(unknown))}")
            laws = [law for law in laws if law.name in only]
        for law in laws:
            law.fault = fault
        return laws

    def run(
        self,
        seed: Optional[int] = None,
        instances: Optional[int] = None,
        max_atoms: Optional[int] = None,
        fault: Optional[str] = None,
        only: Optional[Sequence[str]] = None,
    ) -> LawReport:
        """Run every law (or the ``only`` subset) and collect the results."""
        seed = settings.law_seed if seed is None else seed
        instances = settings.law_instances if instances is None else instances
        max_atoms = settings.law_max_atoms if max_atoms is None else max_atoms
        if instances < 1:
            raise LawConfigError(f"instances must be positive, got {instances}")
        if not 1 <= max_atoms <= MAX_ATOMS_LIMIT:
            raise LawConfigError(f"max atoms must be between 1 and {MAX_ATOMS_LIMIT}, got {max_atoms}")
        if fault is not None and fault not in FAULTS:
            raise LawConfigError(f"unknown fault {fault!r}; expected one of {FAULTS}")
        timing = settings.report_timing

        started = time.perf_counter()
        results = []
        for law in self.laws(fault, only):
            logger.info("running %s (%d instances)", law.name, instances)
            results.append(law.run(seed, instances, max_atoms, timing=timing))
        elapsed = time.perf_counter() - started

        failed = [result.name for result in results if not result.passed]
        if failed:
            logger.warning("law violations: %s", ", ".join(failed))
        return LawReport(
            version=__version__,
            seed=seed,
            instances=instances,
            max_atoms=max_atoms,
            fault=fault,
            passed=not failed,
            laws=results,
            elapsed_seconds=round(elapsed, 3) if timing else None,
        )


law_service = LawService()
