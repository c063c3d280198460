"""Experiment-facing reductions of simulated (or measured) data."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import EnergyCurve

HALF_WIDTH_DEFINITION = "half maximum above frozen-plateau baseline"


@dataclass
class MomentumHistogram:
    """Momentum distribution on uniform bins (momenta in two-photon recoils)."""

    bin_edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        self.bin_edges = np.asarray(self.bin_edges, dtype=float)
        self.counts = np.asarray(self.counts, dtype=float)
        if self.bin_edges.ndim != 1 or self.bin_edges.size < 3:
            raise ValueError("need at least two bins")
        if self.counts.shape != (self.bin_edges.size - 1,):
            raise ValueError("counts must have one entry per bin")
        widths = np.diff(self.bin_edges)
        if np.any(widths <= 0):
            raise ValueError("bin edges must be strictly increasing")
        if not np.allclose(widths, widths[0], rtol=1e-6):
            raise ValueError("bins must be uniform")
        if np.any(self.counts < 0):
            raise ValueError("counts must be non-negative")

    @classmethod
    def from_samples(cls, p, bins: int = 200, range: tuple[float, float] | None = None):
        counts, edges = np.histogram(np.asarray(p, dtype=float), bins=bins, range=range)
        return cls(edges, counts)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])


def truncated_second_moment(hist: MomentumHistogram, p_cut: float) -> float:
    """Standard deviation of the distribution with wings beyond ``p_cut`` discarded.

    The centre is the mean of the full histogram and stays fixed, so the
    result never decreases as ``p_cut`` grows. Any cut removes genuine
    signal from non-Gaussian wings and biases the width low.
    """
    if not p_cut > 0:
        raise ValueError("p_cut must be positive")
    total = hist.counts.sum()
    if total <= 0:
        raise ValueError("histogram is empty")
    centers = hist.centers
    mean = np.dot(hist.counts, centers) / total
    keep = np.abs(centers - mean) <= p_cut
    w = hist.counts[keep]
    if w.sum() <= 0:
        raise ValueError("every bin was truncated")
    return math.sqrt(np.dot(w, (centers[keep] - mean) ** 2) / w.sum())


def peak_half_width(scan: EnergyCurve, baseline_window: tuple[float, float] = (0.2, 0.4)) -> float:
    """Half width of the resonance peak sitting at the small-tau edge of ``scan``.

    The baseline is the mean energy over ``baseline_window`` and the peak is
    the energy at the smallest sampled tau. Returns the tau where the curve
    first drops to half way between the two, interpolated linearly.
    """
    tau, energy = scan.axis, scan.energy
    lo, hi = baseline_window
    mask = (tau >= lo) & (tau <= hi)
    if not np.any(mask):
        raise ValueError(f"no scan points inside the baseline window {baseline_window}")
    baseline = float(np.mean(energy[mask]))
    peak = float(energy[0])
    if not peak > baseline:
        raise ValueError("no peak above the baseline")
    half = baseline + 0.5 * (peak - baseline)
    below = np.nonzero(energy <= half)[0]
    if below.size == 0:
        raise ValueError("scan never drops to half height")
    i = int(below[0])
    e0, e1 = energy[i - 1], energy[i]
    return float(tau[i - 1] + (e0 - half) / (e0 - e1) * (tau[i] - tau[i - 1]))


def saturation_kick(curve: EnergyCurve, tolerance: float = 0.15) -> float:
    """Kick number at which the initial energy growth stops.

    Returns the first ``t`` whose following kick adds at most
    ``tolerance * (E(t) - E(0))``. Near resonance the curve overshoots and
    rings about its final level like ``G`` does, so the end of the ballistic
    rise is used rather than the first entry into a settled band.
    """
    if not tolerance >= 0:
        raise ValueError("tolerance must be non-negative")
    energy = curve.energy
    if energy.size < 2:
        raise ValueError("need at least two points")
    growth = np.diff(energy)
    gained = energy[:-1] - energy[0]
    stopped = np.nonzero(growth <= tolerance * np.abs(gained))[0]
    if stopped.size == 0:
        raise ValueError("curve has no plateau")
    return float(curve.axis[stopped[0]])


def curve_deviation(a: EnergyCurve, b: EnergyCurve, floor: float = 1e-9) -> float:
    """Largest relative deviation ``|a - b| / max(|b|, floor)`` along the common axis."""
    if a.axis.shape != b.axis.shape or not np.array_equal(a.axis, b.axis):
        raise ValueError("curves are sampled on different axes")
    return float(np.max(np.abs(a.energy - b.energy) / np.maximum(np.abs(b.energy), floor)))
