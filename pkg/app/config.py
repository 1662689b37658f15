from dataclasses import dataclass, fields, replace
import os

SCHEMA_VERSION = 1

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"

# --- Exit codes ---
EXIT_OK           = 0
EXIT_INPUT_ERROR  = 1
EXIT_INEQUIVALENT = 2
EXIT_UNDETERMINED = 3

ENV_PREFIX = "TORUSINV_"


@dataclass(frozen=True)
class Settings:
    """
    Run settings. Defaults here, overridden by TORUSINV_* environment
    variables, overridden in turn by command line flags.
    """
    seed: int = 0
    trials: int = 1000
    node_cap: int = 1_000_000
    grid: int = 1000
    step: float = 1e-5
    h_max: float = 0.9
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, environ=None) -> "Settings":
        environ = os.environ if environ is None else environ
        settings = cls()
        overrides = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            try:
                overrides[f.name] = type(getattr(settings, f.name))(raw)
            except ValueError:
                raise ValueError(f"Invalid value {raw!r} for {ENV_PREFIX + f.name.upper()}.")
        return replace(settings, **overrides)

    def with_overrides(self, **values) -> "Settings":
        return replace(self, **{k: v for k, v in values.items() if v is not None})


DEFAULT_SETTINGS = Settings()
