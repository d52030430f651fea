"""
Runtime Settings Helper
Reads process-level overrides (output directory, log level, workers) from environment variables
"""

import os
import logging
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "NIB_PLANNER_OUTPUT_DIR"
LOG_LEVEL_ENV = "NIB_PLANNER_LOG_LEVEL"
WORKERS_ENV = "NIB_PLANNER_WORKERS"
EXACT_CAP_ENV = "NIB_PLANNER_EXACT_CAP"

DEFAULT_OUTPUT_DIR = "outputs"


def get_output_dir(cli_value: Optional[str] = None) -> Path:
    """
    Resolve the artifact directory

    Args:
        cli_value: Value of --out, if given

    Returns:
        Environment override if set, else the CLI value, else ./outputs
    """
    env_value = os.getenv(OUTPUT_DIR_ENV, "").strip()
    if env_value:
        logger.debug(f"Output directory from {OUTPUT_DIR_ENV}: {env_value}")
        return Path(env_value)
    if cli_value:
        return Path(cli_value)
    return Path(DEFAULT_OUTPUT_DIR)


def get_log_level(cli_value: Optional[str] = None) -> str:
    """
    Resolve the logging level name

    Args:
        cli_value: Value of --log-level, if given

    Returns:
        Upper-case level name, INFO by default
    """
    if cli_value:
        return cli_value.upper()
    return os.getenv(LOG_LEVEL_ENV, "INFO").strip().upper() or "INFO"


def _get_int(name: str) -> Optional[int]:
    raw = os.getenv(name, "").strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}")
        return None


def get_worker_count(configured: int) -> int:
    """Thread count for Monte Carlo trials; the environment wins over the scenario file"""
    value = _get_int(WORKERS_ENV)
    if value is not None and value >= 1:
        logger.debug(f"Worker count from {WORKERS_ENV}: {value}")
        return value
    return configured


def get_exact_cap(configured: int) -> int:
    """Largest K handed to the exact cover solver"""
    value = _get_int(EXACT_CAP_ENV)
    if value is not None and value >= 1:
        logger.debug(f"Exact cover cap from {EXACT_CAP_ENV}: {value}")
        return value
    return configured
