"""Pendulum approximation of the near-resonant map and the scaling function G.

In scaled variables ``Jbar = J / sqrt(k tau)`` and ``s = t sqrt(k tau)`` the
resonant Hamiltonian ``J**2/2 + k tau cos(theta)`` becomes the parameter free
pendulum::

    dtheta/ds = Jbar,    dJbar/ds = sin(theta)

whose conserved energy is ``Jbar**2/2 + cos(theta)``. ``G(x)`` is the average
of ``Jbar(x)**2`` over initial angles with ``Jbar(0) = 0``; the mean energy
gain of a near-resonant ensemble is ``k/(2 tau) * G(t sqrt(k tau))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

DEFAULT_STEP = 1e-3
ALPHA_WINDOW = (4.0, 10.0)


@dataclass(frozen=True)
class ScaledPendulumState:
    theta: float
    Jbar: float
    s: float

    @property
    def energy(self) -> float:
        return 0.5 * self.Jbar ** 2 + math.cos(self.theta)


def _leapfrog(theta, Jbar, h, n):
    """``n`` kick-drift-kick steps of size ``h``; works on scalars or arrays."""
    Jbar = Jbar + 0.5 * h * np.sin(theta)
    for i in range(n):
        theta = theta + h * Jbar
        if i < n - 1:
            Jbar = Jbar + h * np.sin(theta)
    Jbar = Jbar + 0.5 * h * np.sin(theta)
    return theta, Jbar


@dataclass(frozen=True)
class PendulumOrbit:
    """Sampled orbit; indexing yields :class:`ScaledPendulumState`."""

    s: np.ndarray
    theta: np.ndarray
    Jbar: np.ndarray

    def __len__(self) -> int:
        return self.s.size

    def __getitem__(self, i) -> ScaledPendulumState:
        return ScaledPendulumState(float(self.theta[i]), float(self.Jbar[i]), float(self.s[i]))

    @property
    def energy(self) -> np.ndarray:
        return 0.5 * self.Jbar ** 2 + np.cos(self.theta)


def pendulum_orbit(theta0: float, Jbar0: float, x_end: float,
                   step: float = DEFAULT_STEP) -> PendulumOrbit:
    """Integrate the scaled pendulum from ``s = 0`` to ``x_end`` with leapfrog.

    The last step is shortened so the orbit ends exactly at ``x_end``.
    """
    if not (math.isfinite(theta0) and math.isfinite(Jbar0)):
        raise ValueError("initial state must be finite")
    if not step > 0:
        raise ValueError("step must be positive")
    if not x_end >= 0:
        raise ValueError("x_end must be non-negative")
    if step >= x_end:
        raise ValueError("step must be smaller than x_end")

    n_full = int(math.floor(x_end / step + 1e-9))
    rest = x_end - n_full * step
    sizes = [step] * n_full + ([rest] if rest > 1e-12 * step else [])

    s = np.empty(len(sizes) + 1)
    theta = np.empty_like(s)
    Jbar = np.empty_like(s)
    s[0], theta[0], Jbar[0] = 0.0, theta0, Jbar0
    th, jb = theta0, Jbar0
    # velocity Verlet, one step at a time so every intermediate state is kept
    for i, h in enumerate(sizes, start=1):
        jb_half = jb + 0.5 * h * math.sin(th)
        th = th + h * jb_half
        jb = jb_half + 0.5 * h * math.sin(th)
        s[i], theta[i], Jbar[i] = s[i - 1] + h, th, jb
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(Jbar))):
        raise FloatingPointError("pendulum integration produced non-finite values")
    return PendulumOrbit(s, theta, Jbar)


class ResonantPrediction(NamedTuple):
    energy: np.ndarray | float
    extrapolated: np.ndarray | bool


@dataclass
class ScalingFunctionTable:
    """Tabulated ``G(x)`` with its saturation level ``alpha``."""

    x: np.ndarray
    G: np.ndarray
    alpha: float
    n_theta: int

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.G = np.asarray(self.G, dtype=float)
        if self.x.ndim != 1 or self.x.shape != self.G.shape or self.x.size == 0:
            raise ValueError("x and G must be non-empty 1-d arrays of equal length")
        if np.any(np.diff(self.x) <= 0):
            raise ValueError("x must be strictly increasing")
        if np.any(self.G < 0):
            raise ValueError("G must be non-negative")

    def __call__(self, x):
        """Linear interpolation; points past the table take the value ``alpha``."""
        x = np.asarray(x, dtype=float)
        out = np.interp(x, self.x, self.G)
        return np.where(x > self.x[-1], self.alpha, out)


def scaling_function(x_grid: Sequence[float], n_theta: int = 2000,
                     step: float = DEFAULT_STEP,
                     alpha_window: tuple[float, float] = ALPHA_WINDOW) -> ScalingFunctionTable:
    """Average of ``Jbar(x)**2`` over ``n_theta`` equally spaced initial angles.

    Trajectories start at rest, ``Jbar(0) = 0``. The integration step is
    adjusted inside each grid interval so every grid point is hit exactly.
    ``alpha`` is filled from :func:`saturation_level` when the grid reaches
    into ``alpha_window``, otherwise it is NaN.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.size == 0:
        raise ValueError("empty x grid")
    if n_theta < 2:
        raise ValueError("n_theta must be at least 2")
    if not step > 0:
        raise ValueError("step must be positive")
    if np.any(x_grid < 0) or np.any(np.diff(x_grid) <= 0):
        raise ValueError("x grid must be non-negative and strictly increasing")

    theta = np.arange(n_theta) * (2.0 * np.pi / n_theta)
    Jbar = np.zeros(n_theta)
    G = np.empty(x_grid.size)
    s = 0.0
    for i, x in enumerate(x_grid):
        span = x - s
        if span > 0:
            n = max(1, int(math.ceil(span / step - 1e-9)))
            theta, Jbar = _leapfrog(theta, Jbar, span / n, n)
            s = x
        G[i] = np.mean(Jbar ** 2)
    if not np.all(np.isfinite(G)):
        raise FloatingPointError("scaling function integration produced non-finite values")

    table = ScalingFunctionTable(x_grid, G, float("nan"), n_theta)
    lo, hi = alpha_window
    if np.any((x_grid >= lo) & (x_grid <= hi)):
        table.alpha = saturation_level(table, lo, hi)
    return table


def saturation_level(table: ScalingFunctionTable, x_min: float = ALPHA_WINDOW[0],
                     x_max: float = ALPHA_WINDOW[1]) -> float:
    """Mean of ``G`` over the table points with ``x_min <= x <= x_max``."""
    mask = (table.x >= x_min) & (table.x <= x_max)
    if not np.any(mask):
        raise ValueError(f"no table points in the window [{x_min}, {x_max}]")
    return float(np.mean(table.G[mask]))


def resonant_energy_prediction(k: float, tau: float, t, table: ScalingFunctionTable
                               ) -> ResonantPrediction:
    """Pendulum-approximation energy gain ``k/(2 tau) G(t sqrt(k tau))``.

    ``t`` may be an array. Where the scaled time runs past the table the
    saturated value ``alpha`` is used and ``extrapolated`` is set.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    t_arr = np.asarray(t, dtype=float)
    x = t_arr * math.sqrt(k * tau)
    extrapolated = x > table.x[-1]
    if np.any(extrapolated) and not math.isfinite(table.alpha):
        raise ValueError("table has no saturation level to extrapolate with")
    energy = k / (2.0 * tau) * table(x)
    if t_arr.ndim == 0:
        return ResonantPrediction(float(energy), bool(extrapolated))
    return ResonantPrediction(energy, extrapolated)


def quadratic_limit(k: float, t):
    """Ballistic energy gain ``k**2 t**2 / 4`` reached as tau -> 0."""
    if np.any(np.asarray(t) < 0):
        raise ValueError("t must be non-negative")
    return k * k * t * t / 4.0


def frozen_limit(k: float, tau: float, alpha: float) -> float:
    """Saturated (frozen) energy gain ``k alpha / (2 tau)``."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    return k * alpha / (2.0 * tau)
