import numpy as np
import pytest
from numpy.testing import assert_allclose

from nib_planner.channel import (
    FadingSample,
    access_link_budget,
    al_beam_gain,
    al_path_loss,
    db_to_linear,
    draw_access_gains,
    draw_backhaul,
    elevation_deg,
    haps_beam_gain,
    haps_fspl,
    haps_peak_gain,
    linear_to_db,
    noise_power_dbm,
    noise_power_w,
    sample_rayleigh,
    sample_rician,
    watts_to_dbm,
)
from nib_planner.models.schemas import Environment, HapsConfig


@pytest.fixture
def suburban():
    return Environment(preset="sub-urban")


def test_unit_conversions():
    assert_allclose(db_to_linear(30.0), 1000.0)
    assert_allclose(linear_to_db(0.01), -20.0)
    assert_allclose(watts_to_dbm(1.0), 30.0)
    assert_allclose(noise_power_dbm(1e6), -114.0)
    assert_allclose(noise_power_dbm(20e6, 7.0), -174.0 + 10.0 * np.log10(20e6) + 7.0)
    assert_allclose(noise_power_w(1e6), 10.0 ** (-144.0 / 10.0))
    with pytest.raises(ValueError):
        noise_power_dbm(0.0)


def test_path_loss_grows_6db_per_distance_doubling(suburban):
    # same elevation, so only the distance term changes
    near = al_path_loss(500.0, 300.0, 2e9, suburban)
    far = al_path_loss(1000.0, 600.0, 2e9, suburban)
    assert_allclose(far - near, 20.0 * np.log10(2.0), rtol=1e-12)


def test_path_loss_is_vectorized_and_rejects_short_links(suburban):
    loss = al_path_loss(np.array([300.0, 400.0]), np.array([300.0, 300.0]), 2e9, suburban)
    assert loss.shape == (2,)
    with pytest.raises(ValueError):
        al_path_loss(100.0, 200.0, 2e9, suburban)
    with pytest.raises(ValueError):
        al_path_loss(100.0, 0.0, 2e9, suburban)


def test_los_term_vanishes_without_excess_gap():
    flat = Environment(eta_los_db=3.0, eta_nlos_db=3.0)
    distance, altitude, freq = 1000.0, 500.0, 2e9
    expected = 20.0 * np.log10(distance) + 20.0 * np.log10(4.0 * np.pi * freq / 299792458.0) + 3.0
    assert_allclose(al_path_loss(distance, altitude, freq, flat), expected)
    assert_allclose(elevation_deg(1000.0, 500.0), 30.0)


def test_bessel_beam_pattern():
    assert_allclose(al_beam_gain(0.0, 30.0, 200.0), 200.0)
    # Taylor branch near boresight joins the closed form
    assert_allclose(al_beam_gain(1e-9, 30.0, 1.0), 1.0, rtol=1e-12)
    assert_allclose(al_beam_gain(1e-3, 30.0, 1.0), 1.0, rtol=1e-5)
    # half power at the half-power angle
    assert_allclose(al_beam_gain(30.0, 30.0, 1.0), 0.5, rtol=1e-2)
    gains = al_beam_gain(np.array([0.0, 10.0, 20.0]), 30.0, 1.0)
    assert np.all(np.diff(gains) < 0)
    with pytest.raises(ValueError):
        al_beam_gain(90.0, 30.0, 1.0)
    with pytest.raises(ValueError):
        al_beam_gain(10.0, 0.0, 1.0)


def test_haps_pattern():
    peak = haps_peak_gain(0.7, 40.0)
    assert_allclose(peak, 21.15796, rtol=1e-5)
    assert_allclose(haps_beam_gain((0.0, 0.0), (0.0, 0.0), 20e3, 300.0, 0.7, 40.0), peak)
    off = haps_beam_gain(np.array([[5000.0, 0.0]]), (0.0, 0.0), 20e3, np.array([300.0]), 0.7, 40.0)
    assert off[0] < peak
    with pytest.raises(ValueError):
        haps_beam_gain((0.0, 0.0), (0.0, 0.0), 20e3, 25e3, 0.7, 40.0)


def test_free_space_loss():
    assert_allclose(haps_fspl(1.0, 4.0 * np.pi), 1.0)
    assert_allclose(haps_fspl(2000.0, 0.05) / haps_fspl(1000.0, 0.05), 4.0)
    with pytest.raises(ValueError):
        haps_fspl(0.0, 0.05)


def test_rayleigh_power(rng):
    sample = sample_rayleigh(0.5, rng, size=200_000)
    assert sample.distribution == "rayleigh"
    assert_allclose(np.mean(sample.power), 2.0 * 0.5 ** 2, rtol=2e-2)
    with pytest.raises(ValueError):
        sample_rayleigh(0.0, rng)


def test_rician_power_and_k_factor(rng):
    sample = sample_rician(10.0, 1.0, rng, size=200_000)
    assert_allclose(sample.k_factor, 10.0)
    assert_allclose(np.mean(sample.power), 1.0, rtol=2e-2)
    assert_allclose(sample.los_amplitude ** 2 + 2.0 * sample.scatter_std ** 2, 1.0)
    with pytest.raises(ValueError):
        sample_rician(-1.0, 1.0, rng)


def test_access_gains_scale_with_budget(rng, suburban):
    budget = access_link_budget(
        np.array([[0.0, 0.0], [200.0, 0.0]]), 2e9, np.array([0.0, 0.0]), 300.0, 40.0, suburban, 100.0,
    )
    assert_allclose(budget.off_axis_deg[0], 0.0)
    assert_allclose(budget.beam_gain[0], 100.0)
    assert budget.mean_gain[0] > budget.mean_gain[1]
    gains = draw_access_gains(budget.mean_gain, 4, rng, 1.0 / np.sqrt(2.0))
    assert gains.shape == (2, 4)
    assert gains.dtype == complex


def test_backhaul_aleph_with_unit_fading():
    haps = HapsConfig()
    fading = FadingSample.fixed(np.ones(2))
    channel = draw_backhaul(
        np.array([[0.0, 0.0], [3000.0, 0.0]]), np.array([300.0, 300.0]), haps, 5.0, 10.0,
        np.random.default_rng(0), tx_power_w=100.0, fading=fading,
    )
    slant = np.hypot([0.0, 3000.0], haps.altitude_m - 300.0)
    loss = haps_fspl(slant, haps.wavelength_m)
    gain = haps_beam_gain(np.array([[0.0, 0.0], [3000.0, 0.0]]), haps.center, haps.altitude_m,
                          np.array([300.0, 300.0]), haps.aperture_efficiency, haps.hpbw_deg)
    expected = noise_power_w(haps.bandwidth_hz, 5.0) * loss / (100.0 * gain)
    assert_allclose(channel.aleph, expected)
    assert channel.aleph[0] < channel.aleph[1]
