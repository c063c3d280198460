import numpy as np
import pytest

from aokr import (
    EnergyCurve,
    InitialEnsembleSpec,
    KickParams,
    PhysicalConstants,
    convert_period,
)
from aokr.io import read_csv, write_csv
from aokr.params import STREAM_BLOCK


def test_recoil_frequency():
    hbar = 1.054571817e-34
    oracle = hbar * (7.37e6) ** 2 / (2 * 2.2069e-25)
    assert PhysicalConstants().omega_r == pytest.approx(oracle, rel=1e-9)
    assert PhysicalConstants().omega_r == pytest.approx(1.30e4, rel=0.05)


def test_convert_period():
    assert convert_period(0.33e-6) == pytest.approx(0.034, rel=0.02)
    with pytest.raises(ValueError):
        convert_period(0.0)
    with pytest.raises(ValueError):
        PhysicalConstants(k_L=-1.0)


def test_kick_params():
    p = KickParams(2.5, 0.1, 3)
    assert p.ktilde == pytest.approx(0.25)
    for bad in [(-1, 0.1, 1), (1, 0, 1), (1, 0.1, -1), (1, 0.1, 1.5), (float("nan"), 0.1, 1)]:
        with pytest.raises(ValueError):
            KickParams(*bad)


def test_spec_validation():
    for bad in [dict(kind="flat"), dict(n_momenta=0), dict(n_angles=0), dict(sigma_p=-1),
                dict(seed=-2)]:
        with pytest.raises(ValueError):
            InitialEnsembleSpec(**bad)


def test_momentum_streams_are_index_addressed():
    spec = InitialEnsembleSpec("gaussian", n_momenta=3 * STREAM_BLOCK + 7, seed=4)
    full = spec.sample_momenta()
    lo, hi = STREAM_BLOCK - 5, 2 * STREAM_BLOCK + 9
    np.testing.assert_array_equal(spec.sample_momenta(lo, hi), full[lo:hi])
    other = InitialEnsembleSpec("gaussian", n_momenta=STREAM_BLOCK + 2, seed=4)
    np.testing.assert_array_equal(other.sample_momenta(), full[:STREAM_BLOCK + 2])
    assert not np.array_equal(InitialEnsembleSpec("gaussian", n_momenta=50, seed=5).sample_momenta(),
                              full[:50])


def test_energy_curve_invariants():
    with pytest.raises(ValueError):
        EnergyCurve([0, 0], [1, 1], [0, 0])
    with pytest.raises(ValueError):
        EnergyCurve([0, 1], [1, -1], [0, 0])
    with pytest.raises(ValueError):
        EnergyCurve([0, 1], [1], [0])


def test_csv_roundtrip(tmp_path):
    path = write_csv(tmp_path / "sub" / "a.csv",
                     {"axis": [0.1, 0.2], "energy": [1.0, 1 / 3], "stderr": [0.0, 0.5]},
                     {"k": 2.5, "kicks": [1, 2], "dist": "gaussian", "flag": True})
    meta, cols = read_csv(path)
    assert meta == {"k": "2.5", "kicks": "1,2", "dist": "gaussian", "flag": "true"}
    assert cols["energy"][1] == 1 / 3
    assert path.read_text().splitlines()[4] == "axis,energy,stderr"
