"""Default enumeration caps, overridable through the environment."""

import os

DEFAULT_MAX_SUBSETS = 100_000
DEFAULT_MAX_REMAPS = 100_000


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


def max_subsets() -> int:
    return _env_int("SPIKIT_MAX_SUBSETS", DEFAULT_MAX_SUBSETS)


def max_remaps() -> int:
    return _env_int("SPIKIT_MAX_REMAPS", DEFAULT_MAX_REMAPS)
