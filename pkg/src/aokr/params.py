"""Parameter and result containers shared by the simulation modules.

Momenta are in units of two-photon recoils (2*hbar*k_L), energies in units of
(2*hbar*k_L)**2 / m, so a single momentum component ``p`` carries energy
``p**2 / 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Literal, Mapping

import numpy as np

EnsembleKind = Literal["uniform", "gaussian", "delta"]
ENSEMBLE_KINDS = ("uniform", "gaussian", "delta")

# momenta per independent random stream; part of the sampling contract
STREAM_BLOCK = 1024


@dataclass(frozen=True)
class KickParams:
    """Kick strength ``k``, scaled period ``tau`` and kick count ``kicks``."""

    k: float
    tau: float
    kicks: int

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k >= 0):
            raise ValueError(f"k must be non-negative and finite, got {self.k!r}")
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValueError(f"tau must be positive and finite, got {self.tau!r}")
        if int(self.kicks) != self.kicks or self.kicks < 0:
            raise ValueError(f"kicks must be a non-negative integer, got {self.kicks!r}")
        object.__setattr__(self, "kicks", int(self.kicks))

    @property
    def ktilde(self) -> float:
        """Stochasticity parameter of the standard map, ``tau * k``."""
        return self.tau * self.k

    def as_meta(self) -> Dict[str, Any]:
        return {"k": self.k, "tau": self.tau, "kicks": self.kicks}


@dataclass(frozen=True)
class InitialEnsembleSpec:
    """Recipe for the initial momentum ensemble.

    Parameters
    ----------
    kind : {"uniform", "gaussian", "delta"}
        ``uniform`` draws p uniformly in [0, 1) (a flat quasimomentum
        distribution), ``gaussian`` draws p ~ N(p_mean, sigma_p**2) and
        ``delta`` puts every momentum at ``p0``.
    n_momenta, n_angles : int
        Number of momentum samples and of equally spaced angles attached to
        each of them.
    seed : int
        Root seed. Momentum ``i`` is drawn from a stream keyed by
        ``(seed, i // STREAM_BLOCK)``, so samples do not depend on how the
        ensemble is split between workers.
    """

    kind: EnsembleKind = "gaussian"
    n_momenta: int = 25000
    n_angles: int = 200
    seed: int = 0
    sigma_p: float = 8.0
    p_mean: float = 0.0
    p0: float = 0.0

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.n_momenta < 1 or self.n_angles < 1:
            raise ValueError("ensemble must contain at least one momentum and one angle")
        if not self.sigma_p >= 0:
            raise ValueError(f"sigma_p must be non-negative, got {self.sigma_p!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        for name in ("sigma_p", "p_mean", "p0"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def size(self) -> int:
        return self.n_momenta * self.n_angles

    def sample_momenta(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Momenta with indices ``start..stop-1`` of the full ensemble."""
        stop = self.n_momenta if stop is None else stop
        if not 0 <= start <= stop <= self.n_momenta:
            raise ValueError("momentum index range out of bounds")
        if self.kind == "delta":
            return np.full(stop - start, float(self.p0))

        out = np.empty(stop - start)
        first, last = start // STREAM_BLOCK, (stop - 1) // STREAM_BLOCK
        for block in range(first, last + 1):
            rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(block,)))
            if self.kind == "uniform":
                draws = rng.random(STREAM_BLOCK)
            else:
                draws = self.p_mean + self.sigma_p * rng.standard_normal(STREAM_BLOCK)
            lo = max(start, block * STREAM_BLOCK)
            hi = min(stop, (block + 1) * STREAM_BLOCK)
            out[lo - start:hi - start] = draws[lo - block * STREAM_BLOCK:hi - block * STREAM_BLOCK]
        return out

    def angle_grid(self) -> np.ndarray:
        return np.arange(self.n_angles) * (2.0 * np.pi / self.n_angles)

    def as_meta(self) -> Dict[str, Any]:
        meta: Dict[str, Any] = {
            "dist": self.kind,
            "n_momenta": self.n_momenta,
            "n_angles": self.n_angles,
            "seed": self.seed,
        }
        if self.kind == "gaussian":
            meta.update(sigma_p=self.sigma_p, p_mean=self.p_mean)
        elif self.kind == "delta":
            meta["p0"] = self.p0
        return meta


@dataclass
class EnergyCurve:
    """Mean energy sampled along ``axis`` (kick numbers or tau values)."""

    axis: np.ndarray
    energy: np.ndarray
    stderr: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.axis = np.asarray(self.axis, dtype=float)
        self.energy = np.asarray(self.energy, dtype=float)
        self.stderr = np.asarray(self.stderr, dtype=float)
        if not (self.axis.ndim == 1 and self.axis.shape == self.energy.shape == self.stderr.shape):
            raise ValueError("axis, energy and stderr must be 1-d arrays of equal length")
        if self.axis.size > 1 and np.any(np.diff(self.axis) <= 0):
            raise ValueError("curve axis must be strictly increasing")
        if np.any(self.energy < 0):
            raise ValueError("mean energies must be non-negative")

    def __len__(self) -> int:
        return self.axis.size


@dataclass
class EnergyScan:
    """Energy against tau for several kick numbers.

    ``curves[t]`` holds the absolute mean energy and ``gains[t]`` the energy
    gained relative to the initial momenta.
    """

    tau: np.ndarray
    curves: Dict[int, EnergyCurve]
    gains: Dict[int, EnergyCurve]
    meta: Mapping[str, Any] = field(default_factory=dict)

    @property
    def kicks(self) -> list[int]:
        return sorted(self.curves)
