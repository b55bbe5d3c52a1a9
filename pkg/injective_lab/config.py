"""Runtime settings, read from the environment (and an optional .env file)."""

import os
from dataclasses import dataclass
from dotenv import load_dotenv

load_dotenv()


def _int_setting(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    budget: int
    extension_budget: int
    jobs: int
    log_level: str
    output_dir: str


def load_settings() -> Settings:
    """Build settings from INJLAB_* variables."""
    return Settings(
        budget=_int_setting("INJLAB_BUDGET", 2_000_000),
        extension_budget=_int_setting("INJLAB_EXTENSION_BUDGET", 200_000),
        jobs=_int_setting("INJLAB_JOBS", 1),
        log_level=os.getenv("INJLAB_LOG_LEVEL", "WARNING").upper(),
        output_dir=os.getenv("INJLAB_OUTPUT_DIR", "runs"),
    )
