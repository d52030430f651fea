"""
Named random substreams derived from one master seed
"""

import numpy as np

STREAM_KEYS = {
    "users": 0,
    "fading": 1,
    "backhaul": 2,
    "baselines": 3,
}


def substream(seed: int, name: str, *keys: int) -> np.random.Generator:
    """
    Build an independent generator for one named purpose

    Args:
        seed: Master scenario seed
        name: One of STREAM_KEYS
        keys: Extra integers (trial, epoch, ...) that further separate the stream

    Returns:
        numpy Generator whose sequence depends only on (seed, name, keys)
    """
    if name not in STREAM_KEYS:
        raise KeyError(f"Unknown random stream '{name}'")
    spawn_key = (STREAM_KEYS[name],) + tuple(int(k) for k in keys)
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=spawn_key))
