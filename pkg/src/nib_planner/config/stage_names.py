"""
Stage Name Mappings - Single Source of Truth
Consolidates planning-stage names used across monitoring, the orchestrator and reports
"""

from typing import List, Optional

# Stage display names in planning-loop order
STAGE_DISPLAY_NAMES = {
    'users': 'User Generation',
    'deployment': 'Disk-Cover Deployment',
    'association': 'User Association',
    'beamopt': 'Beam Optimization',
    'haps_power': 'HAPS Power Schedule',
    'channels': 'Channel Realization',
    'backhaul': 'Backhaul NOMA Allocation',
    'access': 'Access SCA Allocation',
    'metrics': 'Performance Metrics',
    'guardrails': 'Constraint Guardrails',
}

# Stages whose failure marks an epoch infeasible rather than aborting the run
EPOCH_LOCAL_STAGES = {
    'deployment',
    'association',
    'beamopt',
    'backhaul',
    'access',
    'guardrails',
}


def get_stage_display_name(stage: str) -> str:
    """
    Get standardized display name for a stage

    Args:
        stage: Raw stage key

    Returns:
        Clean display name for the stage
    """
    if not stage:
        return stage
    if stage in STAGE_DISPLAY_NAMES:
        return STAGE_DISPLAY_NAMES[stage]
    return stage.replace('_', ' ').title()


def is_epoch_local(stage: str) -> bool:
    """Check whether a stage failure is confined to its epoch"""
    return stage in EPOCH_LOCAL_STAGES


def stages_through(stop_after: Optional[str] = None) -> List[str]:
    """
    Stage keys in execution order, up to and including `stop_after`

    Args:
        stop_after: Last stage to run; None runs every stage

    Returns:
        Ordered stage keys

    Raises:
        ValueError: If the stage key is unknown
    """
    order = list(STAGE_DISPLAY_NAMES)
    if stop_after is None:
        return order
    if stop_after not in STAGE_DISPLAY_NAMES:
        raise ValueError(f"unknown stage '{stop_after}', expected one of {order}")
    return order[:order.index(stop_after) + 1]
