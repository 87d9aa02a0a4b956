import numpy as np
import pytest

import onefifth as of
from onefifth.errors import DimensionMismatchError

GAMMA = float(np.exp(1.0 / 3.0))
Q = 4.0


def test_v_function_branches():
    fn = of.sphere(2)
    assert np.isclose(of.v_function(fn, np.array([2.0, 0.0])), 4.0)
    assert np.isclose(of.v_function(fn, np.array([0.5, 0.0])), 4.0)
    assert np.isclose(of.v_function(fn, np.array([1.0, 0.0])), 1.0)
    with pytest.raises(ValueError):
        of.v_function(fn, np.zeros(2))
    with pytest.raises(ValueError):
        of.v_function(of.linear(2), np.ones(2))


def test_linear_increase_condition_reference_values():
    good = of.linear_increase_condition(GAMMA, Q, 2.0)
    assert np.isclose(good, 0.5 * (np.exp(-2 / 3) + np.exp(1 / 6)))
    assert np.isclose(good, 0.84739, atol=5e-6)
    bad = of.linear_increase_condition(4.0, 0.5, 2.0)
    assert np.isclose(bad, 128.03125)
    with pytest.raises(ValueError):
        of.linear_increase_condition(-1.0, Q, 2.0)


def test_drift_ratio_mc_validation():
    params = of.AlgoParams(3, GAMMA, Q)
    with pytest.raises(ValueError):
        of.drift_ratio_mc(params, of.sphere(3), np.ones(3), 10)
    with pytest.raises(DimensionMismatchError):
        of.drift_ratio_mc(params, of.sphere(3), np.ones(4), 2000)


def test_drift_ratio_near_zero_matches_closed_form():
    # as z -> 0 every candidate is rejected, so the ratio is deterministic
    params = of.AlgoParams(3, GAMMA, Q)
    est = of.drift_ratio_mc(params, of.sphere(3), 1e-8 * np.ones(3), 2000,
                            seed=0)
    assert np.isclose(est.value, GAMMA ** (-2.0 / Q), rtol=1e-12)
    assert est.std_error < 1e-6


def test_drift_scan_grid_and_verdict():
    params = of.AlgoParams(3, GAMMA, Q)
    scan = of.drift_scan(params, of.sphere(3), [1e-3, 1e-1, 10.0, 1e3],
                         samples=4000, seed=1)
    assert scan.ratios.shape == (4, 4)
    assert scan.drift_holds_empirically
    # inner radii sit within two decades of f = 1 and are excluded
    outer = scan._outer_mask()
    assert list(outer[:, 0]) == [True, False, False, True]


def test_drift_scan_rejects_narrow_radius_span():
    params = of.AlgoParams(3, GAMMA, Q)
    with pytest.raises(ValueError):
        of.drift_scan(params, of.sphere(3), [0.5, 1.0, 2.0])


def test_drift_scan_detects_divergent_parameters():
    params = of.AlgoParams(3, 4.0, 0.5, allow_divergent=True)
    scan = of.drift_scan(params, of.sphere(3), [1e-3, 1e3], samples=4000,
                         seed=2)
    assert not scan.drift_holds_empirically
    assert scan.ratios[1].min() > 1.0
