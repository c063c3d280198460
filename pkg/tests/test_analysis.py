import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aokr import (
    EnergyCurve,
    MomentumHistogram,
    curve_deviation,
    peak_half_width,
    saturation_kick,
    truncated_second_moment,
)


def curve(axis, energy):
    axis = np.asarray(axis, dtype=float)
    return EnergyCurve(axis, energy, np.zeros_like(axis))


def gaussian_histogram(sigma=8.0, wing=0.0, edges=np.linspace(-100, 100, 2001)):
    c = 0.5 * (edges[1:] + edges[:-1])
    counts = np.exp(-c ** 2 / (2 * sigma ** 2)) + wing * np.exp(-np.abs(c) / (3 * sigma))
    return MomentumHistogram(edges, counts)


def test_two_spikes():
    edges = np.arange(-10.5, 11.5, 1.0)
    counts = np.zeros(edges.size - 1)
    centers = 0.5 * (edges[1:] + edges[:-1])
    counts[np.isin(centers, [-4, 4])] = 1.0
    assert truncated_second_moment(MomentumHistogram(edges, counts), 10) == pytest.approx(4.0)


def test_truncation_underestimates_heavy_wings():
    hist = gaussian_histogram(wing=0.05)
    assert truncated_second_moment(hist, 16.0) < 8.0


def test_no_truncation_recovers_sigma():
    hist = gaussian_histogram()
    # direct moment of the same binned weights
    c, w = hist.centers, hist.counts
    oracle = np.sqrt(np.sum(w * c ** 2) / np.sum(w))
    assert truncated_second_moment(hist, 1e6) == pytest.approx(oracle, rel=1e-12)
    assert truncated_second_moment(hist, 1e6) == pytest.approx(8.0, rel=1e-3)


def test_from_samples():
    rng = np.random.default_rng(0)
    hist = MomentumHistogram.from_samples(rng.normal(0, 8, 200_000), bins=400, range=(-60, 60))
    assert truncated_second_moment(hist, 100) == pytest.approx(8.0, rel=0.01)


def test_truncated_errors():
    hist = gaussian_histogram()
    with pytest.raises(ValueError):
        truncated_second_moment(hist, 0)
    edges = np.array([-1.0, 0.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        truncated_second_moment(MomentumHistogram(edges, [1.0, 0.0, 1.0]), 0.4)
    with pytest.raises(ValueError):
        MomentumHistogram([0.0, 1.0], [1.0])
    with pytest.raises(ValueError):
        MomentumHistogram([0.0, 1.0, 3.0], [1.0, 1.0])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 10), min_size=4, max_size=30).filter(lambda c: sum(c) > 0),
       st.floats(0.1, 20), st.floats(0.1, 20))
def test_truncated_monotone_in_cut(counts, a, b):
    hist = MomentumHistogram(np.arange(len(counts) + 1) - len(counts) / 2, counts)
    lo, hi = sorted((a, b))
    try:
        s_lo = truncated_second_moment(hist, lo)
    except ValueError:
        return
    assert truncated_second_moment(hist, hi) >= s_lo - 1e-12


def test_half_width_synthetic_lorentzian():
    tau = np.linspace(0, 10, 100001)
    scan = curve(tau, 1 / (1 + (tau / 0.05) ** 2) + 1)
    # baseline window far out on the tail, where the profile is 1 to within 3e-5
    assert peak_half_width(scan, (9.0, 10.0)) == pytest.approx(0.05, rel=1e-3)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 100))
def test_half_width_scale_invariant(scale):
    tau = np.linspace(0.005, 0.4, 80)
    energy = 30 / (1 + (tau / 0.04) ** 2) + 5
    a = peak_half_width(curve(tau, energy))
    b = peak_half_width(curve(tau, scale * energy))
    assert b == pytest.approx(a, rel=1e-9)


def test_half_width_errors():
    tau = np.linspace(0.01, 0.4, 40)
    with pytest.raises(ValueError):
        peak_half_width(curve(tau, np.ones_like(tau)))
    with pytest.raises(ValueError):
        peak_half_width(curve(tau, 1 / tau), (0.5, 0.6))


def test_saturation_constant_curve():
    assert saturation_kick(curve(range(10), np.full(10, 3.0))) == 0


def test_saturation_overshoot():
    t = np.arange(21)
    energy = np.where(t <= 5, 30 + 2.0 * t ** 2, 80 - np.clip(t - 5, 0, 3))
    assert saturation_kick(curve(t, energy)) == 5


def test_saturation_requires_plateau():
    t = np.arange(10)
    with pytest.raises(ValueError):
        saturation_kick(curve(t, 1.0 + t ** 2))


def test_curve_deviation():
    a = curve([1, 2, 3], [1.0, 2.0, 4.0])
    assert curve_deviation(a, a) == 0
    b = curve([1, 2, 3], 1.1 * a.energy)
    assert curve_deviation(a, b) == pytest.approx(0.1 / 1.1)
    with pytest.raises(ValueError):
        curve_deviation(a, curve([1, 2, 4], a.energy))
    zero = curve([1, 2, 3], [0.0, 0.0, 0.0])
    assert curve_deviation(zero, zero) == 0
