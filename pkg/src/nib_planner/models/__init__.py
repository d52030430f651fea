"""
Pydantic models for scenario input and run artifacts
"""

from nib_planner.models.schemas import (
    ConfigViolation,
    Environment,
    EpochSummary,
    GroundUser,
    HapsConfig,
    InfeasibilityReport,
    MetricBundle,
    NibConfig,
    NibNode,
    RatProfile,
    RunArtifacts,
    RunManifest,
    ScenarioConfig,
)

__all__ = [
    'ConfigViolation',
    'Environment',
    'EpochSummary',
    'GroundUser',
    'HapsConfig',
    'InfeasibilityReport',
    'MetricBundle',
    'NibConfig',
    'NibNode',
    'RatProfile',
    'RunArtifacts',
    'RunManifest',
    'ScenarioConfig',
]
