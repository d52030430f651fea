"""
Access-link precoding and power allocation
"""

from nib_planner.access.precoding import PrecodingState, default_regularization, rzf_precoder
from nib_planner.access.problem import AccessProblem, CellChannels, idealized_rates, rate_gradient
from nib_planner.access.sca import AccessAllocation, AccessRates, access_rates, sca_allocate, uniform_allocation

__all__ = [
    'AccessAllocation',
    'AccessProblem',
    'AccessRates',
    'CellChannels',
    'PrecodingState',
    'access_rates',
    'default_regularization',
    'idealized_rates',
    'rate_gradient',
    'rzf_precoder',
    'sca_allocate',
    'uniform_allocation',
]
