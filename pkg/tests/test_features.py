import math

import numpy as np
import pytest

from qutrit_negativity.features import (
    ANTIPARALLEL,
    PARALLEL,
    compare_field_directions,
    detect_peaks,
    negativity_curve,
    symmetric_grid,
)


def pairs(b, y):
    return list(zip(b, y))


def test_monotone_has_no_peaks():
    b = np.linspace(0, 1, 50)
    assert detect_peaks(pairs(b, b**2)).count == 0
    assert detect_peaks(pairs(b, -b)).count == 0


def test_synthetic_gaussians():
    b = np.linspace(-5, 5, 1001)
    y = np.exp(-((b + 2) ** 2) / 0.1) + 0.5 * np.exp(-((b - 2) ** 2) / 0.1)
    rep = detect_peaks(np.vstack([b, y]), 0.01, curve_id="two")
    assert rep.curve_id == "two"
    assert rep.peak_locations == pytest.approx((-2.0, 2.0), abs=1e-9)
    assert rep.peak_heights == pytest.approx((1.0, 0.5), abs=1e-6)
    assert rep.prominences == pytest.approx((1.0, 0.5), abs=1e-6)


def test_prominence_threshold_filters_ripple():
    b = np.linspace(0, 10, 2001)
    y = np.exp(-((b - 5) ** 2)) + 0.004 * np.sin(40 * b)
    assert detect_peaks(pairs(b, y), 0.01).count == 1


def test_small_bump_on_shoulder_uses_higher_flank():
    b = np.arange(7.0)
    y = [0.0, 1.0, 0.5, 0.55, 0.3, 0.0, 0.0]
    rep = detect_peaks(pairs(b, y), 0.01)
    assert rep.peak_locations == (1.0, 3.0)
    assert rep.prominences == pytest.approx((1.0, 0.05))
    assert detect_peaks(pairs(b, y), 0.1).peak_locations == (1.0,)


def test_plateau_counts_once_at_midpoint():
    b = np.arange(7.0)
    rep = detect_peaks(pairs(b, [0, 1, 2, 2, 2, 1, 0]), 0.5)
    assert rep.peak_locations == (3.0,)
    rep = detect_peaks(pairs(b[:6], [0, 1, 2, 2, 1, 0]), 0.5)
    assert rep.peak_locations == (2.5,)


def test_endpoints_are_not_peaks():
    b = np.arange(5.0)
    assert detect_peaks(pairs(b, [5, 4, 3, 2, 1]), 0.01).count == 0


def test_input_validation():
    with pytest.raises(ValueError):
        detect_peaks([(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        detect_peaks([(0, 1), (1, 2), (2, 1)], 0.0)
    with pytest.raises(ValueError):
        detect_peaks([(0, 1), (2, 2), (1, 1)])


def test_symmetric_grid():
    b = symmetric_grid(3.0, 0.01)
    assert b.size == 601
    assert np.array_equal(b, -b[::-1])
    assert b[300] == 0.0


def test_parallel_low_temperature_three_peaks():
    b, n = negativity_curve(PARALLEL, 0.05)
    rep = detect_peaks(pairs(b, n), 0.01)
    assert rep.count == 3
    assert abs(rep.peak_locations[1]) <= 0.005
    assert np.all(np.diff(rep.peak_locations) > 0)
    assert all(h > 0 for h in rep.peak_heights)


def test_antiparallel_split_peaks():
    b, n = negativity_curve(ANTIPARALLEL, 0.6)
    rep = detect_peaks(pairs(b, n), 0.01)
    assert rep.count == 2
    assert abs(rep.peak_locations[0] + rep.peak_locations[1]) <= 0.01


@pytest.mark.parametrize("theta,t", [(PARALLEL, 0.05), (ANTIPARALLEL, 0.6), (ANTIPARALLEL, 0.05)])
def test_grid_refinement_stability(theta, t):
    coarse = detect_peaks(pairs(*negativity_curve(theta, t, step=0.02)), 0.01)
    fine = detect_peaks(pairs(*negativity_curve(theta, t, step=0.01)), 0.01)
    assert coarse.count == fine.count
    assert np.abs(np.subtract(coarse.peak_locations, fine.peak_locations)).max() < 0.02


def test_compare_field_directions():
    n_par, n_anti = compare_field_directions(2.0, 0.05)
    assert n_anti > n_par
    n_par, n_anti = compare_field_directions(0.0, 0.4)
    assert n_par == pytest.approx(n_anti, abs=1e-12)
    n_par, n_anti = compare_field_directions(1.0, 0.6)
    assert n_anti > 2 * n_par
    with pytest.raises(ValueError):
        compare_field_directions(math.inf, 0.1)
