"""
Link-budget math: fading, beam gains, path losses, noise and assembled channels
"""

from nib_planner.channel.antenna import al_beam_gain, haps_beam_gain, haps_peak_gain, off_axis_angle_deg
from nib_planner.channel.fading import FadingSample, sample_rayleigh, sample_rician
from nib_planner.channel.links import (
    AccessChannel,
    BackhaulChannel,
    LinkBudget,
    access_link_budget,
    build_access_channel,
    build_backhaul_channel,
    draw_access_gains,
    draw_backhaul,
)
from nib_planner.channel.path_loss import al_path_loss, elevation_deg, haps_fspl, los_correction_db
from nib_planner.channel.units import (
    db_to_linear,
    dbm_to_watts,
    dbw_to_watts,
    linear_to_db,
    noise_power_dbm,
    noise_power_w,
    watts_to_dbm,
)

__all__ = [
    'AccessChannel',
    'BackhaulChannel',
    'FadingSample',
    'LinkBudget',
    'access_link_budget',
    'al_beam_gain',
    'al_path_loss',
    'build_access_channel',
    'build_backhaul_channel',
    'db_to_linear',
    'dbm_to_watts',
    'dbw_to_watts',
    'draw_access_gains',
    'draw_backhaul',
    'elevation_deg',
    'haps_beam_gain',
    'haps_fspl',
    'haps_peak_gain',
    'linear_to_db',
    'los_correction_db',
    'noise_power_dbm',
    'noise_power_w',
    'off_axis_angle_deg',
    'sample_rayleigh',
    'sample_rician',
    'watts_to_dbm',
]
