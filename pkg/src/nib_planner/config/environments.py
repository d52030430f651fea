"""
Environment Presets
Loads the area-class propagation parameters shipped with the package
"""

import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict

import yaml

logger = logging.getLogger(__name__)

PRESETS_PATH = Path(__file__).parent / "environments.yaml"


@lru_cache(maxsize=1)
def load_environment_presets() -> Dict[str, Dict[str, float]]:
    """
    Load all environment presets from the bundled YAML file

    Returns:
        Mapping of area label to its propagation parameters
    """
    with open(PRESETS_PATH, "r", encoding="utf-8") as handle:
        presets = yaml.safe_load(handle) or {}
    logger.debug(f"Loaded {len(presets)} environment presets from {PRESETS_PATH}")
    return presets


def get_environment_preset(label: str) -> Dict[str, float]:
    """
    Get the propagation parameters of one area class

    Args:
        label: Area class, e.g. 'sub-urban' or 'dense-urban'

    Returns:
        Copy of the preset parameters

    Raises:
        KeyError: If the label is not a known preset
    """
    presets = load_environment_presets()
    if label not in presets:
        raise KeyError(f"Unknown environment preset '{label}'; known: {sorted(presets)}")
    return dict(presets[label])
