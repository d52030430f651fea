import numpy as np

from nib_planner.guardrails import (
    GuardrailConfig,
    GuardrailReport,
    check_access,
    check_association,
    check_cover,
    check_geometry,
    check_noma,
)


def test_check_cover():
    positions = np.array([[0.0, 0.0], [10.0, 0.0], [100.0, 0.0]])
    assert check_cover(positions, np.array([[0.0, 0.0], [100.0, 0.0]]), 10.0) == []
    assert check_cover(positions, np.array([[0.0, 0.0]]), 10.0) == ["user 2 uncovered"]
    assert check_cover(positions, np.zeros((0, 2)), 10.0) == ["3 user(s) and no disks"]
    assert check_cover(np.zeros((0, 2)), np.zeros((0, 2)), 10.0) == []


def test_check_association():
    positions = np.array([[0.0, 0.0], [50.0, 0.0]])
    centers = np.array([[0.0, 0.0], [60.0, 0.0]])
    assert check_association(positions, np.array([0, 1]), centers, [5.0, 15.0]) == []
    found = check_association(positions, np.array([0, 0]), centers, [5.0, 15.0])
    assert len(found) == 1 and found[0].startswith("user 1")
    assert "no valid NIB" in check_association(positions, np.array([0, 4]), centers, [5.0, 15.0])[0]


def test_check_geometry():
    assert check_geometry([100.0, 5000.0], [5.0, 60.0], (100.0, 5000.0), (5.0, 60.0)) == []
    found = check_geometry([99.0, 300.0], [30.0, 61.0], (100.0, 5000.0), (5.0, 60.0))
    assert len(found) == 2
    assert "altitude" in found[0]
    assert "beamwidth" in found[1]


def test_check_noma_flags_a_tampered_split():
    aleph = np.array([0.03, 0.01])
    served = np.array([True, True])
    bandwidth, target = 100e6, 20e6
    # weak NIB barely above threshold
    step = 2.0 ** (target / bandwidth) - 1.0
    f_strong = (1.0 - step * aleph[0]) / (1.0 + step)
    good = np.array([1.0 - f_strong, f_strong])
    assert check_noma(good, aleph, served, target, bandwidth) == []
    starved = np.array([0.05, 0.95])
    assert any("served position 0" in v for v in check_noma(starved, aleph, served, target, bandwidth))
    over = np.array([0.6, 0.6])
    assert any("fractions sum" in v for v in check_noma(over, aleph, served, target, bandwidth))
    increasing = check_noma(good, aleph, served, target, bandwidth, fractions_hat=np.array([0.1, 0.2]))
    assert any("non-increasing" in v for v in increasing)


def test_check_noma_unserved_nib_must_be_silent():
    aleph = np.array([5.0, 0.01])
    found = check_noma(np.array([0.1, 0.9]), aleph, np.array([False, True]), 20e6, 100e6)
    assert "unserved NIB has a nonzero fraction" in found


def test_check_access():
    cell = np.array([0, 0, 1])
    gain = np.array([100.0, 100.0, 100.0])
    bandwidth = np.full(3, 1e6)
    min_rate = np.full(3, 1e5)
    power = np.array([0.5, 0.5, 1.0])
    assert check_access(cell, power, gain, bandwidth, min_rate) == []
    assert any("budget" in v for v in check_access(cell, np.array([0.7, 0.5, 1.0]), gain, bandwidth, min_rate))
    assert any("minimum rate" in v for v in check_access(cell, np.array([0.0, 0.5, 1.0]), gain, bandwidth, min_rate))
    assert any("outside [0, 1]" in v for v in check_access(cell, np.array([0.5, 0.5, 1.1]), gain, bandwidth, min_rate))
    group = np.array([0, -1, 0])
    capped = check_access(cell, power, gain, bandwidth, min_rate, group=group, caps=np.array([1e6]))
    assert len(capped) == 1 and capped[0].startswith("backhaul group 0")


def test_report_collects_prefixed_violations():
    report = GuardrailReport()
    report.extend("cover", [])
    assert report.passed
    report.extend("noma", ["bad split"])
    assert not report.passed
    assert report.checks_run == ["cover", "noma"]
    assert report.violations == ["noma: bad split"]


def test_unknown_tolerance_falls_back():
    assert GuardrailConfig.get_tolerance("coverage_m") == 1e-6
    assert GuardrailConfig.get_tolerance("anything-else") == 1e-9
