"""
Runtime settings for lambda-fdg.

Values come from the environment (a local `.env` file is honoured) and are
read once per process. Tests that patch the environment call
`get_settings.cache_clear()` afterwards.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    # accept "2**64" style values as well as plain integers
    if "**" in raw:
        base, exp = raw.split("**", 1)
        return int(base.strip()) ** int(exp.strip())
    return int(raw)


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Settings:
    factor_limit: int = 2**64
    orbit_capacity: int = 2**16
    aut_capacity: int = 10**8
    poly_capacity: int = 2**22
    oracle_candidates: int = 2**18
    self_check: bool = True
    self_check_order: int = 10**4
    affine_transversal: bool = False
    seed: int = 20240917
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Load settings from the environment (once)."""
    load_dotenv()
    return Settings(
        factor_limit=_env_int("LAMBDA_FACTOR_LIMIT", 2**64),
        orbit_capacity=_env_int("LAMBDA_ORBIT_CAPACITY", 2**16),
        aut_capacity=_env_int("LAMBDA_AUT_CAPACITY", 10**8),
        poly_capacity=_env_int("LAMBDA_POLY_CAPACITY", 2**22),
        oracle_candidates=_env_int("LAMBDA_ORACLE_CANDIDATES", 2**18),
        self_check=_env_bool("LAMBDA_SELF_CHECK", True),
        self_check_order=_env_int("LAMBDA_SELF_CHECK_ORDER", 10**4),
        affine_transversal=_env_bool("LAMBDA_AFFINE_TRANSVERSAL", False),
        seed=_env_int("LAMBDA_SEED", 20240917),
        log_level=os.getenv("LAMBDA_LOG_LEVEL", "WARNING").upper(),
    )
