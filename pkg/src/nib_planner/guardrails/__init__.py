"""
Guardrails - independent post-hoc verification of planning constraints
"""

from nib_planner.guardrails.checks import (
    GuardrailReport,
    check_access,
    check_association,
    check_cover,
    check_geometry,
    check_noma,
)
from nib_planner.guardrails.guardrail_config import GuardrailConfig

__all__ = [
    'GuardrailConfig',
    'GuardrailReport',
    'check_access',
    'check_association',
    'check_cover',
    'check_geometry',
    'check_noma',
]
