"""
Guardrail Configuration
Tolerances used when re-verifying planning constraints after each epoch
"""

import logging

logger = logging.getLogger(__name__)


class GuardrailConfig:
    """Tolerances for the post-hoc constraint checks"""

    # Absolute tolerances in the unit of the checked quantity
    TOLERANCES = {
        'coverage_m': 1e-6,          # user-to-centre distance vs radius
        'geometry': 1e-6,            # altitude (m) and beamwidth (deg) bounds
        'power_budget': 1e-9,        # sum of fractions/coefficients vs 1
        'rate_relative': 1e-9,       # rate floors and caps, relative
    }

    @staticmethod
    def get_tolerance(check: str) -> float:
        """Get tolerance for a check type"""
        return GuardrailConfig.TOLERANCES.get(check, 1e-9)
