import os

DEFAULT_LEVEL_CAP = 100_000
DEFAULT_ENUMERATION_CAP = 1_000_000


def size_cap(default: int) -> int:
    """Structure cap, overridable through ``TYPFORGE_SIZE_CAP``."""
    raw = os.environ.get("TYPFORGE_SIZE_CAP")
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default
