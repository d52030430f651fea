"""
HAPS backhaul: NOMA power split and the OFDMA baseline
"""

from nib_planner.backhaul.noma import (
    NomaAllocation,
    backhaul_sinr,
    backhaul_sinrs,
    noma_closed_form,
    oma_baseline,
    order_nibs,
)

__all__ = [
    'NomaAllocation',
    'backhaul_sinr',
    'backhaul_sinrs',
    'noma_closed_form',
    'oma_baseline',
    'order_nibs',
]
