"""
NIB beam optimization: enclosing circle, optimal elevation, altitude and beamwidth
"""

from nib_planner.beamopt.elevation import edge_path_loss_db, edge_path_loss_slope, optimal_elevation
from nib_planner.beamopt.enclosing_circle import DualCircle, min_enclosing_circle, min_enclosing_circle_qp, welzl
from nib_planner.beamopt.geometry import (
    BEAM_FLOOR_FACTOR,
    BeamGeometry,
    beam_objective_db,
    finalize_geometry,
    optimize_beam,
)

__all__ = [
    'BEAM_FLOOR_FACTOR',
    'BeamGeometry',
    'DualCircle',
    'beam_objective_db',
    'edge_path_loss_db',
    'edge_path_loss_slope',
    'finalize_geometry',
    'min_enclosing_circle',
    'min_enclosing_circle_qp',
    'optimal_elevation',
    'optimize_beam',
    'welzl',
]
