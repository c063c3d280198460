"""Drivers that turn a run configuration into CSV data files.

Every file starts with ``# key=value`` lines carrying the effective
configuration (minus the output directory and worker count, which never
change the numbers), so a file can be regenerated from its own header.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List

import numpy as np

from . import __version__
from .analysis import HALF_WIDTH_DEFINITION, curve_deviation, peak_half_width
from .classical import energy_vs_tau_scan, ensemble_energy_curve, phase_portrait
from .io import write_csv
from .params import EnergyCurve, EnergyScan, InitialEnsembleSpec, KickParams
from .pendulum import scaling_function
from .quantum import quantum_energy_scan, quantum_ensemble_energy
from .units import PhysicalConstants, convert_period

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


def _floats(value) -> List[float]:
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    return [float(v) for v in str(value).replace(" ", "").split(",") if v]


def _kick_list(value) -> List[int]:
    """Parse ``"3,4,5"``, ``"1..8"`` or a mix such as ``"1,3..5"``."""
    if isinstance(value, int):
        return [value]
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    out: List[int] = []
    for part in str(value).replace(" ", "").split(","):
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _int(value) -> int:
    f = float(value)
    if f != int(f):
        raise ValueError(f"expected an integer, got {value!r}")
    return int(f)


# canonical keys, in header order, with their parsers
SCHEMA: Dict[str, Callable[[Any], Any]] = {
    "k": float,
    "tau": _floats,
    "tau_min": float,
    "tau_max": float,
    "tau_steps": _int,
    "kicks": _kick_list,
    "dist": str,
    "sigma_p": float,
    "p_mean": float,
    "p0": float,
    "n_momenta": _int,
    "n_angles": _int,
    "quantum_samples": _int,
    "basis": _int,
    "seed": _int,
    "x_max": float,
    "x_step": float,
    "n_theta": _int,
    "step": float,
    "iterations": _int,
    "n_seeds": _int,
    "inset_taus": _floats,
    "inset_kicks": _int,
    "period": float,
    "k_l": float,
    "mass": float,
    "threads": _int,
    "out": str,
}
NOT_IN_HEADER = {"threads", "out"}

DEFAULTS: Dict[str, Any] = {
    "dist": "gaussian",
    "sigma_p": 8.0,
    "p_mean": 0.0,
    "p0": 0.0,
    "n_momenta": 25000,
    "n_angles": 200,
    "quantum_samples": 2000,
    "seed": 0,
    "x_max": 10.0,
    "x_step": 0.01,
    "n_theta": 2000,
    "step": 1e-3,
    "iterations": 400,
    "n_seeds": 24,
    "k_l": 7.37e6,
    "mass": 2.2069e-25,
    "threads": 1,
    "out": ".",
}

FIGURE_DEFAULTS: Dict[int, Dict[str, Any]] = {
    1: {"k": 2.5, "tau": [0.1]},
    2: {"k": 2.5, "sigma_p": 8.4, "kicks": [3, 4, 5, 6, 7, 8],
        "tau_min": 0.005, "tau_max": 0.4, "tau_steps": 80},
    # t = 1 is computed for the one-kick reference column
    3: {"k": 4.9, "sigma_p": 8.0, "kicks": [1, 3, 5, 7, 12, 16, 20],
        "tau_min": 0.005, "tau_max": 0.4, "tau_steps": 80},
    4: {"k": 4.9, "sigma_p": 8.0, "kicks": [5], "tau_min": 0.02, "tau_max": 1.0,
        "tau_steps": 50, "inset_taus": [0.034, 0.2], "inset_kicks": 20},
}


def parse_config_file(path) -> Dict[str, str]:
    """Read flat ``key = value`` lines; ``#`` starts a comment."""
    values: Dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


@dataclass
class RunConfig:
    """Merged configuration: built-in defaults < figure defaults < file < flags."""

    command: str
    values: Dict[str, Any] = field(default_factory=dict)
    figure: int | None = None

    @classmethod
    def build(cls, command: str, *layers: Dict[str, Any], figure: int | None = None) -> "RunConfig":
        merged: Dict[str, Any] = dict(DEFAULTS)
        if figure is not None:
            if figure not in FIGURE_DEFAULTS:
                raise ConfigError(f"unknown figure {figure!r}; choose from 1, 2, 3, 4")
            merged.update(FIGURE_DEFAULTS[figure])
        for layer in layers:
            for key, value in layer.items():
                if value is None:
                    continue
                key = key.replace("-", "_")
                if key not in SCHEMA:
                    raise ConfigError(f"unknown configuration key {key!r}")
                try:
                    merged[key] = SCHEMA[key](value)
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"bad value for {key}: {value!r}") from exc
        return cls(command, merged, figure)

    def __getitem__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise ConfigError(f"missing required setting {key!r}") from None

    def get(self, key, default=None):
        return self.values.get(key, default)

    @property
    def out(self) -> Path:
        return Path(self["out"])

    @property
    def workers(self) -> int:
        return max(1, int(self.get("threads", 1)))

    def header(self, **extra) -> Dict[str, Any]:
        meta: Dict[str, Any] = {"command": self.command}
        if self.figure is not None:
            meta["figure"] = self.figure
        meta["aokr_version"] = __version__
        meta["numpy_version"] = np.__version__
        for key in SCHEMA:
            if key in self.values and key not in NOT_IN_HEADER:
                meta[key] = self.values[key]
        meta.update(extra)
        return meta

    def ensemble(self, n_momenta: int | None = None) -> InitialEnsembleSpec:
        kind = self["dist"]
        try:
            return InitialEnsembleSpec(
                kind=kind,
                n_momenta=int(n_momenta if n_momenta is not None else self["n_momenta"]),
                n_angles=int(self["n_angles"]),
                seed=int(self["seed"]),
                sigma_p=float(self["sigma_p"]),
                p_mean=float(self["p_mean"]),
                p0=float(self["p0"]),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def tau_grid(self) -> np.ndarray:
        if "tau_min" in self.values or "tau_max" in self.values:
            steps = int(self.get("tau_steps", 0))
            lo, hi = self["tau_min"], self["tau_max"]
            if steps < 1:
                raise ConfigError("empty tau grid (tau_steps must be at least 1)")
            if not 0 < lo <= hi:
                raise ConfigError("need 0 < tau_min <= tau_max")
            grid = np.linspace(lo, hi, steps) if steps > 1 else np.array([lo])
        else:
            grid = np.asarray(self.get("tau", []), dtype=float)
        if grid.size == 0:
            raise ConfigError("empty tau grid")
        if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
            raise ConfigError("tau grid must be positive and strictly increasing")
        return grid

    def single_tau(self) -> float:
        taus = self.get("tau", [])
        if len(taus) != 1:
            raise ConfigError("exactly one tau value is required")
        if not taus[0] > 0:
            raise ConfigError("tau must be positive")
        return taus[0]

    def kicks(self) -> List[int]:
        kicks = sorted(set(self["kicks"]))
        if not kicks:
            raise ConfigError("empty kick list")
        if kicks[0] < 0:
            raise ConfigError("kick numbers must be non-negative")
        return kicks

    def k(self) -> float:
        k = self["k"]
        if not k >= 0:
            raise ConfigError("k must be non-negative")
        return k


def _tag(value: float) -> str:
    return f"{value:g}".replace(".", "p")


def _write_scan(scan: EnergyScan, config: RunConfig, prefix: str, model: str,
                extra_meta: Dict[str, Any] | None = None,
                extra_columns: Callable[[int, EnergyCurve], Dict[str, np.ndarray]] | None = None
                ) -> List[Path]:
    paths = []
    reference = scan.curves.get(1)
    for t in scan.kicks:
        curve, gain = scan.curves[t], scan.gains[t]
        columns = {"axis": curve.axis, "energy": curve.energy, "stderr": curve.stderr,
                   "gain": gain.energy, "gain_stderr": gain.stderr}
        if reference is not None and t != 1:
            columns["energy_1kick"] = reference.energy
            columns["stderr_1kick"] = reference.stderr
        if extra_columns is not None:
            columns.update(extra_columns(t, curve))
        meta = config.header(model=model, axis="tau", kicks_in_file=t,
                             **(extra_meta or {}).get(t, {}))
        paths.append(write_csv(config.out / f"{prefix}_t{t}.csv", columns, meta))
    return paths


def _write_kick_curve(energies, config: RunConfig, path: Path, model: str, tau: float) -> Path:
    columns = {"axis": energies.absolute.axis, "energy": energies.absolute.energy,
               "stderr": energies.absolute.stderr, "gain": energies.gain.energy,
               "gain_stderr": energies.gain.stderr}
    return write_csv(path, columns, config.header(model=model, axis="kicks", tau_in_file=tau))


def _scaling_table(config: RunConfig):
    x_max, x_step = config["x_max"], config["x_step"]
    if not (x_max > 0 and x_step > 0):
        raise ConfigError("x_max and x_step must be positive")
    x = np.round(np.arange(0.0, x_max + 0.5 * x_step, x_step), 12)
    try:
        return scaling_function(x, int(config["n_theta"]), float(config["step"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _portrait_seeds(n_seeds: int) -> list[tuple[float, float]]:
    # half the seeds through the elliptic point, half through the hyperbolic one
    half = max(1, n_seeds // 2)
    J = np.linspace(0.0, np.pi, half, endpoint=False)
    return [(np.pi, j) for j in J] + [(0.0, j) for j in J[1:]]


def run_scaling(config: RunConfig, name: str = "scaling.csv") -> List[Path]:
    table = _scaling_table(config)
    meta = config.header(alpha=table.alpha, alpha_window="4.0,10.0")
    return [write_csv(config.out / name, {"x": table.x, "G": table.G}, meta)]


def run_portrait(config: RunConfig, name: str = "portrait.csv") -> List[Path]:
    k, tau = config.k(), config.single_tau()
    iterations = int(config["iterations"])
    if iterations < 1 or int(config["n_seeds"]) < 1:
        raise ConfigError("iterations and n_seeds must be at least 1")
    seeds = _portrait_seeds(int(config["n_seeds"]))
    pts = phase_portrait(tau * k, seeds, iterations)
    n_orbits, n_pts, _ = pts.shape
    columns = {
        "orbit": np.repeat(np.arange(n_orbits), n_pts),
        "iteration": np.tile(np.arange(n_pts), n_orbits),
        "theta": pts[:, :, 0].ravel(),
        "J": pts[:, :, 1].ravel(),
    }
    # dashed lines of a flat quasimomentum ensemble: J0 in [0, tau)
    meta = config.header(ktilde=tau * k, initial_J_range=(0.0, tau))
    return [write_csv(config.out / name, columns, meta)]


def run_scan(config: RunConfig) -> List[Path]:
    """Dispatch a generic (non-figure) run on ``config.command``."""
    cmd = config.command
    if cmd == "scan-tau":
        scan = energy_vs_tau_scan(config.ensemble(), config.k(), config.kicks(),
                                  config.tau_grid(), config.workers)
        return _write_scan(scan, config, "scan_tau", "classical")
    if cmd == "quantum-scan":
        spec = config.ensemble(config["quantum_samples"])
        scan = quantum_energy_scan(spec, config.k(), config.kicks(), config.tau_grid(),
                                   config.get("basis"), config.workers)
        return _write_scan(scan, config, "quantum_scan", "quantum")
    if cmd == "scan-kicks":
        tau, kicks = config.single_tau(), config.kicks()
        try:
            params = KickParams(config.k(), tau, max(kicks))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        energies = ensemble_energy_curve(config.ensemble(), params, config.workers)
        return [_write_kick_curve(energies, config, config.out / f"scan_kicks_tau{_tag(tau)}.csv",
                                  "classical", tau)]
    if cmd == "scaling":
        return run_scaling(config)
    if cmd == "portrait":
        return run_portrait(config)
    raise ConfigError(f"unknown command {cmd!r}")


def run_figure(fig: int, config: RunConfig) -> List[Path]:
    """Regenerate the data behind figure ``fig`` (1-4)."""
    if fig not in FIGURE_DEFAULTS:
        raise ConfigError(f"unknown figure {fig!r}; choose from 1, 2, 3, 4")
    if config.figure != fig:
        raise ConfigError(f"configuration was built for figure {config.figure}, not {fig}")
    log.info("figure %d -> %s", fig, config.out)
    if fig == 1:
        return run_scaling(config, "fig1_scaling.csv") + run_portrait(config, "fig1_portrait.csv")

    k, taus, kicks = config.k(), config.tau_grid(), config.kicks()
    if fig in (2, 3):
        table = _scaling_table(config)
        scan = energy_vs_tau_scan(config.ensemble(), k, kicks, taus, config.workers)
        e0 = float(np.mean(scan.curves[kicks[0]].energy - scan.gains[kicks[0]].energy))

        def pendulum_column(t, curve):
            x = t * np.sqrt(k * curve.axis)
            return {"pendulum_prediction": e0 + k / (2.0 * curve.axis) * table(x)}

        extra = {}
        if 5 in scan.curves:
            try:
                extra[5] = {"half_width": peak_half_width(scan.curves[5]),
                            "half_width_definition": HALF_WIDTH_DEFINITION}
            except ValueError:
                pass
        return _write_scan(scan, config, f"fig{fig}", "classical", extra, pendulum_column)

    # figure 4: quantum and classical scans plus the energy-vs-kick inset
    classical = energy_vs_tau_scan(config.ensemble(), k, kicks, taus, config.workers)
    qspec = config.ensemble(config["quantum_samples"])
    quantum = quantum_energy_scan(qspec, k, kicks, taus, config.get("basis"), config.workers)
    extra = {}
    below = taus < 1.0 / k
    for t in kicks:
        if np.any(below):
            q, c = quantum.curves[t], classical.curves[t]
            dev = curve_deviation(EnergyCurve(q.axis[below], q.energy[below], q.stderr[below]),
                                  EnergyCurve(c.axis[below], c.energy[below], c.stderr[below]))
            extra[t] = {"max_rel_deviation_tau_below_1_over_k": dev}
    paths = _write_scan(classical, config, "fig4_classical", "classical")
    paths += _write_scan(quantum, config, "fig4_quantum", "quantum", extra)
    inset_kicks = int(config.get("inset_kicks", 20))
    for tau in config.get("inset_taus", ()):
        c = ensemble_energy_curve(config.ensemble(), KickParams(k, tau, inset_kicks), config.workers)
        q = quantum_ensemble_energy(qspec, k, tau, inset_kicks, config.get("basis"), config.workers)
        paths.append(_write_kick_curve(c, config, config.out / f"fig4_inset_classical_tau{_tag(tau)}.csv",
                                       "classical", tau))
        paths.append(_write_kick_curve(q, config, config.out / f"fig4_inset_quantum_tau{_tag(tau)}.csv",
                                       "quantum", tau))
    return paths


def run_convert_period(config: RunConfig) -> float:
    T = config.get("period")
    if T is None:
        raise ConfigError("a kicking period in seconds is required")
    try:
        return convert_period(T, PhysicalConstants(config["k_l"], config["mass"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
