"""Laboratory units for the cesium kicked-rotor experiment."""
from __future__ import annotations

from dataclasses import dataclass

from scipy.constants import hbar

CS_MASS = 2.2069e-25  # kg, cesium-133
K_LASER = 7.37e6  # 1/m, kicking-laser wavenumber


@dataclass(frozen=True)
class PhysicalConstants:
    k_L: float = K_LASER
    mass: float = CS_MASS

    def __post_init__(self):
        if not (self.k_L > 0 and self.mass > 0):
            raise ValueError("k_L and mass must be positive")

    @property
    def omega_r(self) -> float:
        """Recoil frequency hbar k_L**2 / (2 m) in rad/s."""
        return hbar * self.k_L ** 2 / (2.0 * self.mass)


def convert_period(T: float, constants: PhysicalConstants = PhysicalConstants()) -> float:
    """Scaled period ``tau = 8 omega_r T`` for a kicking period ``T`` in seconds."""
    if not T > 0:
        raise ValueError(f"kicking period must be positive, got {T!r}")
    return 8.0 * constants.omega_r * T
