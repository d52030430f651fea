"""
Scenario configuration, seeded user generation and RAT demand assignment
"""

from nib_planner.scenario.config_loader import (
    config_hash,
    load_config,
    parse_config,
    validate,
    with_overrides,
)
from nib_planner.scenario.random_streams import substream
from nib_planner.scenario.users import UserPopulation, generate_users, sample_population

__all__ = [
    'UserPopulation',
    'config_hash',
    'generate_users',
    'load_config',
    'parse_config',
    'sample_population',
    'substream',
    'validate',
    'with_overrides',
]
