import os
from functools import cache

from perimeter_app.lib.errors import InvalidInputError


def _int_from_env(name: str, default: int, minimum: int = 1) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.replace("_", ""))
    except ValueError as e:
        raise InvalidInputError(f"{name} must be an integer, got {raw!r}") from e
    if value < minimum:
        raise InvalidInputError(f"{name} must be >= {minimum}, got {value}")
    return value


@cache
def enumeration_budget() -> int:
    # Upper bound on polycube visits a single enumeration may spend before it is refused.
    return _int_from_env("PERIMETER_APP_ENUMERATION_BUDGET", 50_000_000)


@cache
def merged_tree_limit() -> int:
    # Largest n for the exhaustive merged-label tree census: (n-2) n^(n-3) objects.
    return _int_from_env("PERIMETER_APP_MERGED_TREE_LIMIT", 9, minimum=3)


@cache
def dense_cell_limit() -> int:
    return _int_from_env("PERIMETER_APP_DENSE_CELL_LIMIT", 1 << 22)


@cache
def default_jobs() -> int:
    return _int_from_env("PERIMETER_APP_JOBS", 1)


@cache
def formula_n_limit() -> int:
    # Largest n the HTTP service evaluates a closed-form table or DX value for.
    return _int_from_env("PERIMETER_APP_FORMULA_N_LIMIT", 60, minimum=2)


def clear_settings_cache() -> None:
    for accessor in (enumeration_budget, merged_tree_limit, dense_cell_limit, default_jobs, formula_n_limit):
        accessor.cache_clear()
