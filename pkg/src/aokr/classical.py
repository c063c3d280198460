"""Classical kicked-rotor map in scaled momentum ``J = tau * p``.

One kick period advances the angle with the current momentum and then kicks
the momentum with the already advanced angle::

    theta' = theta + J   (mod 2 pi)
    J'     = J + ktilde * sin(theta')

with ``ktilde = tau * k``. Mean energies are reported in recoil units,
``<p**2>/2`` with ``p = J / tau``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._parallel import chunk_bounds, ordered_map
from .params import EnergyCurve, EnergyScan, InitialEnsembleSpec, KickParams

TWO_PI = 2.0 * np.pi


def _wrap_angle(theta):
    return np.mod(theta, TWO_PI)


@dataclass(frozen=True)
class ClassicalState:
    """A single point ``(theta, J)`` remembering its initial momentum ``J0``."""

    theta: float
    J: float
    J0: float = field(default=None)

    def __post_init__(self):
        if self.J0 is None:
            object.__setattr__(self, "J0", self.J)
        for name in ("theta", "J", "J0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite, got {getattr(self, name)!r}")
        object.__setattr__(self, "theta", float(_wrap_angle(self.theta)))

    @property
    def dJ(self) -> float:
        return self.J - self.J0


def map_step(state: ClassicalState, ktilde: float) -> ClassicalState:
    """Apply one period of the map to ``state``."""
    if not math.isfinite(ktilde):
        raise ValueError(f"ktilde must be finite, got {ktilde!r}")
    theta = float(_wrap_angle(state.theta + state.J))
    J = state.J + ktilde * math.sin(theta)
    return ClassicalState(theta, J, state.J0)


def evolve_trajectory(theta0: float, J0: float, ktilde: float, t: int) -> list[ClassicalState]:
    """Orbit of length ``t + 1`` starting at ``(theta0, J0)``."""
    if t < 0:
        raise ValueError("kick count must be non-negative")
    states = [ClassicalState(theta0, J0)]
    for _ in range(t):
        states.append(map_step(states[-1], ktilde))
    return states


def _advance(theta: np.ndarray, J: np.ndarray, ktilde: float, scratch: np.ndarray) -> None:
    # in-place map step on whole arrays
    theta += J
    np.mod(theta, TWO_PI, out=theta)
    np.sin(theta, out=scratch)
    scratch *= ktilde
    J += scratch


@dataclass
class ClassicalEnsemble:
    """Flat arrays of ensemble states; row-major in (momentum, angle)."""

    theta: np.ndarray
    J: np.ndarray
    J0: np.ndarray
    tau: float
    n_momenta: int
    n_angles: int

    def __len__(self) -> int:
        return self.theta.size

    def iterate(self, ktilde: float, kicks: int = 1) -> "ClassicalEnsemble":
        theta, J = self.theta.copy(), self.J.copy()
        scratch = np.empty_like(J)
        for _ in range(kicks):
            _advance(theta, J, ktilde, scratch)
        return ClassicalEnsemble(theta, J, self.J0, self.tau, self.n_momenta, self.n_angles)

    def mean_energy(self) -> float:
        return float(np.mean(self.J ** 2)) / (2.0 * self.tau ** 2)

    def mean_gain(self) -> float:
        return float(np.mean((self.J - self.J0) ** 2)) / (2.0 * self.tau ** 2)


def sample_initial_ensemble(spec: InitialEnsembleSpec, tau: float) -> ClassicalEnsemble:
    """Materialise the ensemble described by ``spec`` at scaled period ``tau``."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    if spec.size == 0:
        raise ValueError("empty ensemble")
    p = spec.sample_momenta()
    J = np.repeat(tau * p, spec.n_angles)
    theta = np.tile(spec.angle_grid(), spec.n_momenta)
    return ClassicalEnsemble(theta, J, J.copy(), tau, spec.n_momenta, spec.n_angles)


def _chunk_energies(p: np.ndarray, angles: np.ndarray, k: float, tau: float,
                    record: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Per-momentum angle averages of p**2/2 and (p - p0)**2/2 at kicks in ``record``.

    ``record`` must be sorted ascending.
    """
    shape = (p.size, angles.size)
    theta = np.broadcast_to(angles, shape).copy()
    J0 = np.broadcast_to((tau * p)[:, None], shape)
    J = J0.copy()
    scratch = np.empty(shape)
    ktilde = tau * k
    norm = 1.0 / (2.0 * tau ** 2)

    absolute = np.empty((p.size, len(record)))
    gain = np.empty((p.size, len(record)))
    t = 0
    for col, target in enumerate(record):
        while t < target:
            _advance(theta, J, ktilde, scratch)
            t += 1
        absolute[:, col] = np.mean(J * J, axis=1) * norm
        np.subtract(J, J0, out=scratch)
        scratch *= scratch
        gain[:, col] = np.mean(scratch, axis=1) * norm
    return absolute, gain


def _mean_and_stderr(per_momentum: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = per_momentum.shape[0]
    mean = per_momentum.mean(axis=0)
    if n < 2:
        return mean, np.zeros_like(mean)
    return mean, per_momentum.std(axis=0, ddof=1) / np.sqrt(n)


@dataclass
class EnsembleEnergies:
    """Absolute energy ``<p_t**2>/2`` and gain ``<(p_t - p_0)**2>/2`` against kick number."""

    absolute: EnergyCurve
    gain: EnergyCurve


def ensemble_energy_curve(spec: InitialEnsembleSpec, params: KickParams,
                          workers: int = 1) -> EnsembleEnergies:
    """Mean energy of the ensemble after 0..params.kicks kicks."""
    record = list(range(params.kicks + 1))
    scan = _scan(spec, params.k, record, [params.tau], workers)
    meta = {**params.as_meta(), **spec.as_meta()}
    axis = np.array(record, dtype=float)
    (abs_mean, abs_err), (gain_mean, gain_err) = scan[0]
    return EnsembleEnergies(
        EnergyCurve(axis, abs_mean, abs_err, {**meta, "observable": "absolute"}),
        EnergyCurve(axis, gain_mean, gain_err, {**meta, "observable": "gain"}),
    )


def _scan(spec: InitialEnsembleSpec, k: float, record: list[int], taus: Sequence[float],
          workers: int):
    angles = spec.angle_grid()
    bounds = chunk_bounds(spec.n_momenta)
    momenta = [spec.sample_momenta(lo, hi) for lo, hi in bounds]
    tasks = [(i_tau, i_chunk) for i_tau in range(len(taus)) for i_chunk in range(len(bounds))]

    def run(task):
        i_tau, i_chunk = task
        return _chunk_energies(momenta[i_chunk], angles, k, taus[i_tau], record)

    results = ordered_map(run, tasks, workers)
    out = []
    for i_tau in range(len(taus)):
        parts = results[i_tau * len(bounds):(i_tau + 1) * len(bounds)]
        absolute = np.concatenate([a for a, _ in parts])
        gain = np.concatenate([g for _, g in parts])
        out.append((_mean_and_stderr(absolute), _mean_and_stderr(gain)))
    return out


def energy_vs_tau_scan(spec: InitialEnsembleSpec, k: float, t_list: Iterable[int],
                       tau_grid: Sequence[float], workers: int = 1) -> EnergyScan:
    """Mean energy over ``tau_grid`` for every kick number in ``t_list``.

    Every tau value reuses the same sampled momenta, so neighbouring points
    share their sampling noise and the curves come out smooth.
    """
    tau_grid = np.asarray(tau_grid, dtype=float)
    t_list = sorted(set(int(t) for t in t_list))
    if tau_grid.size == 0:
        raise ValueError("empty tau grid")
    if not t_list:
        raise ValueError("empty list of kick numbers")
    if np.any(tau_grid <= 0) or np.any(np.diff(tau_grid) <= 0):
        raise ValueError("tau grid must be positive and strictly increasing")
    if t_list[0] < 0:
        raise ValueError("kick numbers must be non-negative")
    if not k >= 0:
        raise ValueError(f"k must be non-negative, got {k!r}")

    per_tau = _scan(spec, k, t_list, tau_grid, workers)
    meta = {"k": k, **spec.as_meta()}
    curves, gains = {}, {}
    for col, t in enumerate(t_list):
        m = {**meta, "kicks": t}
        curves[t] = EnergyCurve(tau_grid, [r[0][0][col] for r in per_tau],
                                [r[0][1][col] for r in per_tau], {**m, "observable": "absolute"})
        gains[t] = EnergyCurve(tau_grid, [r[1][0][col] for r in per_tau],
                               [r[1][1][col] for r in per_tau], {**m, "observable": "gain"})
    return EnergyScan(tau_grid, curves, gains, meta)


def phase_portrait(ktilde: float, initial_grid: Iterable[tuple[float, float]],
                   iterations: int) -> np.ndarray:
    """Orbits of the map folded into the cell [0, 2pi) x [-pi, pi).

    Returns an array of shape ``(n_seeds, iterations + 1, 2)`` holding
    ``(theta, J)``; index 0 along the second axis is the folded seed.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    seeds = np.asarray(list(initial_grid), dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(seeds)) or not math.isfinite(ktilde):
        raise ValueError("non-finite phase-space seed or ktilde")
    theta = _wrap_angle(seeds[:, 0].copy())
    J = seeds[:, 1].copy()
    scratch = np.empty_like(J)
    out = np.empty((seeds.shape[0], iterations + 1, 2))
    out[:, 0, 0] = theta
    out[:, 0, 1] = J
    for i in range(1, iterations + 1):
        _advance(theta, J, ktilde, scratch)
        out[:, i, 0] = theta
        out[:, i, 1] = J
    out[:, :, 1] = np.mod(out[:, :, 1] + np.pi, TWO_PI) - np.pi
    return out
