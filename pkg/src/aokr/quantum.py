"""Quantum kicked rotor at fixed quasimomentum.

A wavefunction is stored as amplitudes ``c_n`` on integer momenta
``n = -N .. N-1``; the physical momentum of component ``n`` is ``n + beta``.
One period applies free evolution ``exp(-i tau (n + beta)**2 / 2)`` and then
the kick ``exp(-i k cos(theta))``, the latter on a ``2N`` point angle grid
reached by FFT.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._parallel import chunk_bounds, ordered_map
from .classical import EnsembleEnergies
from .params import EnergyCurve, EnergyScan, InitialEnsembleSpec

BOUNDARY_THRESHOLD = 1e-8


class BasisOverflowError(RuntimeError):
    """Probability reached the edge of the momentum basis."""


@dataclass
class RotorWavefunction:
    beta: float
    amplitudes: np.ndarray
    basis_half_size: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"quasimomentum must lie in [0, 1), got {self.beta!r}")
        if self.amplitudes.shape != (2 * self.basis_half_size,):
            raise ValueError("amplitudes must have length 2 * basis_half_size")

    @property
    def n(self) -> np.ndarray:
        return np.arange(-self.basis_half_size, self.basis_half_size)

    @property
    def momenta(self) -> np.ndarray:
        return self.n + self.beta

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sum(self.probabilities))

    def energy(self) -> float:
        """Mean kinetic energy ``<(n + beta)**2> / 2``."""
        return float(np.sum(self.probabilities * self.momenta ** 2)) / 2.0

    def boundary_occupancy(self) -> float:
        return float(_boundary_occupancy(self.amplitudes[None, :]))


def _boundary_occupancy(c: np.ndarray) -> float:
    edge = np.abs(c[:, [0, 1, -1]]) ** 2
    return float(edge.max()) if edge.size else 0.0


def init_plane_wave(n0: int, beta: float, N: int) -> RotorWavefunction:
    """Momentum eigenstate ``n0 + beta``."""
    if not -N < n0 < N:
        raise ValueError(f"n0={n0} lies outside the basis of half size {N}")
    c = np.zeros(2 * N, dtype=complex)
    c[n0 + N] = 1.0
    return RotorWavefunction(float(beta), c, N)


def _free_phases(n: np.ndarray, beta, tau: float) -> np.ndarray:
    p = n[None, :] + np.reshape(beta, (-1, 1))
    return np.exp(-0.5j * tau * p * p)


def _kick_factor(N: int, k: float) -> np.ndarray:
    theta = np.arange(2 * N) * (np.pi / N)
    return np.exp(-1j * k * np.cos(theta))


def _kick_rows(c: np.ndarray, factor: np.ndarray) -> np.ndarray:
    # rows hold c_n for n = -N..N-1; ifftshift moves n = 0 to index 0
    psi = np.fft.ifft(np.fft.ifftshift(c, axes=-1), axis=-1)
    psi *= factor
    return np.fft.fftshift(np.fft.fft(psi, axis=-1), axes=-1)


def apply_free_evolution(psi: RotorWavefunction, tau: float) -> RotorWavefunction:
    phases = _free_phases(psi.n, psi.beta, tau)[0]
    return RotorWavefunction(psi.beta, psi.amplitudes * phases, psi.basis_half_size)


def apply_kick(psi: RotorWavefunction, k: float) -> RotorWavefunction:
    """Multiply by ``exp(-i k cos(theta))`` in the angle representation."""
    c = _kick_rows(psi.amplitudes[None, :], _kick_factor(psi.basis_half_size, k))
    if _boundary_occupancy(c) > BOUNDARY_THRESHOLD:
        raise BasisOverflowError(
            f"basis half size {psi.basis_half_size} too small for kick strength {k}")
    return RotorWavefunction(psi.beta, c[0], psi.basis_half_size)


def propagate(psi: RotorWavefunction, k: float, tau: float, t: int
              ) -> tuple[RotorWavefunction, np.ndarray]:
    """Apply ``t`` periods (free evolution, then kick) to ``psi``.

    Returns the final state and the mean energy after 0..t kicks.
    """
    if t < 0:
        raise ValueError("kick count must be non-negative")
    energies = [psi.energy()]
    for _ in range(t):
        psi = apply_kick(apply_free_evolution(psi, tau), k)
        energies.append(psi.energy())
    return psi, np.array(energies)


def choose_basis_size(p_max: float, k: float, t: int) -> int:
    """Smallest power of two covering the momenta reachable in ``t`` kicks."""
    kt = k * t
    need = abs(p_max) + kt + 8.0 * math.sqrt(kt) + 32.0
    return 1 << max(5, math.ceil(math.log2(need)))


def _chunk_quantum(p: np.ndarray, k: float, tau: float, N: int,
                   record: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample energy and gain at the kick numbers in ``record`` (ascending)."""
    n0 = np.floor(p)
    beta = p - n0
    n = np.arange(-N, N)
    c = np.zeros((p.size, 2 * N), dtype=complex)
    c[np.arange(p.size), n0.astype(int) + N] = 1.0
    free = _free_phases(n, beta, tau)
    kick = _kick_factor(N, k)
    momenta2 = (n[None, :] + beta[:, None]) ** 2
    shift2 = (n[None, :] - n0[:, None]) ** 2

    absolute = np.empty((p.size, len(record)))
    gain = np.empty((p.size, len(record)))
    t = 0
    for col, target in enumerate(record):
        while t < target:
            c = _kick_rows(c * free, kick)
            t += 1
        prob = np.abs(c) ** 2
        absolute[:, col] = 0.5 * np.sum(prob * momenta2, axis=1)
        gain[:, col] = 0.5 * np.sum(prob * shift2, axis=1)
    if _boundary_occupancy(c) > BOUNDARY_THRESHOLD:
        raise BasisOverflowError(f"basis half size {N} too small (k={k}, t={t})")
    return absolute, gain


def _stats(per_sample: np.ndarray):
    n = per_sample.shape[0]
    err = per_sample.std(axis=0, ddof=1) / np.sqrt(n) if n > 1 else np.zeros(per_sample.shape[1])
    return per_sample.mean(axis=0), err


def _quantum_scan(spec: InitialEnsembleSpec, k: float, taus: Sequence[float],
                  record: list[int], N: int | None, workers: int):
    bounds = chunk_bounds(spec.n_momenta)
    momenta = [spec.sample_momenta(lo, hi) for lo, hi in bounds]
    if N is None:
        p_max = max(float(np.max(np.abs(p))) for p in momenta)
        N = choose_basis_size(p_max + 1.0, k, record[-1])
    for p in momenta:
        if np.any(np.abs(np.floor(p)) >= N - 1):
            raise BasisOverflowError(f"initial momenta exceed basis half size {N}")
    tasks = [(i, j) for i in range(len(taus)) for j in range(len(bounds))]
    results = ordered_map(lambda task: _chunk_quantum(momenta[task[1]], k, taus[task[0]], N, record),
                          tasks, workers)
    out = []
    for i in range(len(taus)):
        parts = results[i * len(bounds):(i + 1) * len(bounds)]
        out.append((_stats(np.concatenate([a for a, _ in parts])),
                    _stats(np.concatenate([g for _, g in parts]))))
    return out, N


def quantum_ensemble_energy(spec: InitialEnsembleSpec, k: float, tau: float, t: int,
                            basis_half_size: int | None = None,
                            workers: int = 1) -> EnsembleEnergies:
    """Mean energy against kick number for an incoherent ensemble of plane waves.

    Each sampled momentum ``p`` becomes the plane wave ``n0 = floor(p)``,
    ``beta = p - n0``. ``spec.n_angles`` is ignored.
    """
    if t < 0:
        raise ValueError("kick count must be non-negative")
    if not tau > 0:
        raise ValueError("tau must be positive")
    record = list(range(t + 1))
    (res,), N = _quantum_scan(spec, k, [tau], record, basis_half_size, workers)
    (a_mean, a_err), (g_mean, g_err) = res
    meta = {"k": k, "tau": tau, "kicks": t, "basis_half_size": N, **spec.as_meta()}
    meta.pop("n_angles")
    axis = np.array(record, dtype=float)
    return EnsembleEnergies(
        EnergyCurve(axis, a_mean, a_err, {**meta, "observable": "absolute"}),
        EnergyCurve(axis, g_mean, g_err, {**meta, "observable": "gain"}),
    )


def quantum_energy_scan(spec: InitialEnsembleSpec, k: float, t_list: Iterable[int],
                        tau_grid: Sequence[float], basis_half_size: int | None = None,
                        workers: int = 1) -> EnergyScan:
    """Quantum counterpart of :func:`aokr.classical.energy_vs_tau_scan`."""
    tau_grid = np.asarray(tau_grid, dtype=float)
    t_list = sorted(set(int(t) for t in t_list))
    if tau_grid.size == 0 or not t_list:
        raise ValueError("empty tau grid or kick list")
    if np.any(tau_grid <= 0) or np.any(np.diff(tau_grid) <= 0):
        raise ValueError("tau grid must be positive and strictly increasing")
    if t_list[0] < 0:
        raise ValueError("kick numbers must be non-negative")
    per_tau, N = _quantum_scan(spec, k, tau_grid, t_list, basis_half_size, workers)
    meta = {"k": k, "basis_half_size": N, **spec.as_meta()}
    meta.pop("n_angles")
    curves, gains = {}, {}
    for col, t in enumerate(t_list):
        m = {**meta, "kicks": t}
        curves[t] = EnergyCurve(tau_grid, [r[0][0][col] for r in per_tau],
                                [r[0][1][col] for r in per_tau], {**m, "observable": "absolute"})
        gains[t] = EnergyCurve(tau_grid, [r[1][0][col] for r in per_tau],
                               [r[1][1][col] for r in per_tau], {**m, "observable": "gain"})
    return EnergyScan(tau_grid, curves, gains, meta)
