"""
User-to-NIB association
"""

from nib_planner.association.sinr import (
    CandidateLinks,
    association_sinrs,
    build_candidates,
    estimate_association_sinr,
    score_candidates,
)
from nib_planner.association.user_association import (
    AssociationMap,
    associate,
    associate_max_sinr,
    associate_nearest,
    associate_random,
)

__all__ = [
    'AssociationMap',
    'CandidateLinks',
    'associate',
    'associate_max_sinr',
    'associate_nearest',
    'associate_random',
    'association_sinrs',
    'build_candidates',
    'estimate_association_sinr',
    'score_candidates',
]
