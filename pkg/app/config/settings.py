import os

try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    # dotenv not available, use environment variables directly
    pass


def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in {"1", "true", "yes", "on"}


class Settings:
    def __init__(self):
        # Load default values from environment
        self._load_defaults()
        # Runtime overrides - these will be updated from CLI flags
        self._runtime_overrides = {}

    def _load_defaults(self):
        # Brute-force budgets
        self.MAX_PROFILES: str = os.getenv("OGAME_MAX_PROFILES", "1000000")
        self.MAX_CONTEXTS: str = os.getenv("OGAME_MAX_CONTEXTS", "1000000")

        # Law suites
        self.LAW_SEED: str = os.getenv("OGAME_LAW_SEED", "0")
        self.LAW_INSTANCES: str = os.getenv("OGAME_LAW_INSTANCES", "500")
        self.LAW_MAX_ATOMS: str = os.getenv("OGAME_LAW_MAX_ATOMS", "3")

        # Reports
        self.REPORT_TIMING: str = os.getenv("OGAME_REPORT_TIMING", "False")

        # Application Settings
        self.LOG_LEVEL: str = os.getenv("OGAME_LOG_LEVEL", "WARNING")
        self.DEBUG: bool = os.getenv("DEBUG", "False").lower() == "true"

    def get_value(self, key: str):
        """Get value with runtime override support"""
        return self._runtime_overrides.get(key, getattr(self, key, ""))

    def set_override(self, key: str, value):
        """Set runtime override for a setting"""
        if value is None:
            self._runtime_overrides.pop(key, None)
            return
        value = str(value)
        if value.strip():
            self._runtime_overrides[key] = value.strip()
        elif key in self._runtime_overrides:
            # Remove override if empty value provided
            del self._runtime_overrides[key]

    def clear_overrides(self):
        """Clear all runtime overrides"""
        self._runtime_overrides.clear()

    def get_overrides_status(self) -> dict:
        """Get status of which settings have been overridden"""
        return {
            key: key in self._runtime_overrides
            for key in (
                "MAX_PROFILES",
                "MAX_CONTEXTS",
                "LAW_SEED",
                "LAW_INSTANCES",
                "LAW_MAX_ATOMS",
                "REPORT_TIMING",
                "LOG_LEVEL",
            )
        }

    def _get_int(self, key: str) -> int:
        raw = self.get_value(key)
        try:
            return int(raw)
        except (TypeError, ValueError):
            raise ValueError(f"Setting {key} must be an integer, got {raw!r}")

    # Typed accessors, reading through the override layer
    @property
    def max_profiles(self) -> int:
        return self._get_int("MAX_PROFILES")

    @property
    def max_contexts(self) -> int:
        return self._get_int("MAX_CONTEXTS")

    @property
    def law_seed(self) -> int:
        return self._get_int("LAW_SEED")

    @property
    def law_instances(self) -> int:
        return self._get_int("LAW_INSTANCES")

    @property
    def law_max_atoms(self) -> int:
        return self._get_int("LAW_MAX_ATOMS")

    @property
    def report_timing(self) -> bool:
        return _as_bool(self.get_value("REPORT_TIMING"))

    @property
    def log_level(self) -> str:
        if self.DEBUG:
            return "DEBUG"
        return str(self.get_value("LOG_LEVEL")).upper()


settings = Settings()
