import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import jv

from aokr import (
    BasisOverflowError,
    InitialEnsembleSpec,
    KickParams,
    RotorWavefunction,
    apply_free_evolution,
    apply_kick,
    choose_basis_size,
    ensemble_energy_curve,
    init_plane_wave,
    propagate,
    quantum_energy_scan,
    quantum_ensemble_energy,
)


def random_state(seed, N=64, width=6, beta=0.3):
    rng = np.random.default_rng(seed)
    c = np.zeros(2 * N, dtype=complex)
    c[N - width:N + width] = rng.normal(size=2 * width) + 1j * rng.normal(size=2 * width)
    c /= np.linalg.norm(c)
    return RotorWavefunction(beta, c, N)


@pytest.mark.parametrize("n0, beta, energy", [(0, 0.0, 0.0), (2, 0.25, 2.53125), (-3, 0.5, 3.125)])
def test_plane_wave_energy(n0, beta, energy):
    psi = init_plane_wave(n0, beta, 64)
    assert psi.energy() == pytest.approx(energy)
    assert psi.norm() == 1.0


def test_plane_wave_out_of_basis():
    with pytest.raises(ValueError):
        init_plane_wave(64, 0.0, 64)
    with pytest.raises(ValueError):
        init_plane_wave(0, 1.0, 64)


def test_free_evolution_identities():
    psi = random_state(1)
    same = apply_free_evolution(psi, 0.0)
    np.testing.assert_allclose(same.amplitudes, psi.amplitudes)
    resonant = apply_free_evolution(RotorWavefunction(0.0, psi.amplitudes, 64), 4 * np.pi)
    np.testing.assert_allclose(resonant.amplitudes, psi.amplitudes, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 10), st.floats(0, 0.999))
def test_free_evolution_keeps_distribution(seed, tau, beta):
    psi = random_state(seed, beta=beta)
    out = apply_free_evolution(psi, tau)
    np.testing.assert_allclose(out.probabilities, psi.probabilities, atol=1e-15)
    assert out.beta == psi.beta


def test_kick_zero_is_identity():
    psi = random_state(2)
    np.testing.assert_allclose(apply_kick(psi, 0.0).amplitudes, psi.amplitudes, atol=1e-14)


def _bessel_coefficient_by_quadrature(m, k):
    # c_m = (1/2pi) int exp(-i k cos t) exp(-i m t) dt
    f = lambda t: cmath.exp(-1j * (k * math.cos(t) + m * t))
    re = quad(lambda t: f(t).real, 0, 2 * math.pi, limit=200)[0]
    im = quad(lambda t: f(t).imag, 0, 2 * math.pi, limit=200)[0]
    return complex(re, im) / (2 * math.pi)


def test_single_kick_bessel_weights():
    psi = apply_kick(init_plane_wave(0, 0.0, 64), 1.0)
    for m in range(-6, 7):
        oracle = _bessel_coefficient_by_quadrature(m, 1.0)
        assert psi.amplitudes[m + 64] == pytest.approx(oracle, abs=1e-10)
        assert psi.probabilities[m + 64] == pytest.approx(jv(m, 1.0) ** 2, abs=1e-8)


def test_kick_matches_bessel_convolution():
    # c'_n = sum_m (-i)^m J_m(k) c_{n-m}
    psi, k = random_state(3), 2.3
    m = np.arange(-40, 41)
    coeff = (-1j) ** m * jv(m, k)
    expected = np.convolve(psi.amplitudes, coeff, mode="same")
    np.testing.assert_allclose(apply_kick(psi, k).amplitudes, expected, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 8))
def test_kick_preserves_norm(seed, k):
    assert apply_kick(random_state(seed), k).norm() == pytest.approx(1.0, abs=1e-12)


def test_kick_overflow():
    with pytest.raises(BasisOverflowError):
        apply_kick(init_plane_wave(28, 0.0, 32), 3.0)


def test_norm_over_twenty_kicks():
    psi, _ = propagate(init_plane_wave(3, 0.37, 256), 4.9, 0.7, 20)
    assert abs(psi.norm() - 1) < 1e-10
    assert psi.beta == 0.37


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_resonance_bessel_sum(t):
    k = 1.0
    _, energies = propagate(init_plane_wave(0, 0.0, 64), k, 4 * np.pi, t)
    n = np.arange(-60, 61)
    oracle = 0.5 * np.sum(n ** 2 * jv(n, k * t) ** 2)
    assert oracle == pytest.approx((k * t) ** 2 / 4, abs=1e-12)
    assert energies[-1] == pytest.approx(oracle, abs=1e-9)


def test_propagate_definition_and_k0():
    psi = random_state(5)
    one, e = propagate(psi, 1.7, 0.3, 1)
    np.testing.assert_allclose(one.amplitudes, apply_kick(apply_free_evolution(psi, 0.3), 1.7).amplitudes)
    assert e.shape == (2,)
    _, e0 = propagate(psi, 0.0, 0.3, 6)
    np.testing.assert_allclose(e0, e0[0], rtol=1e-12)


@pytest.mark.parametrize("args, N", [((0, 1, 1), 64), ((24, 4.9, 20), 256), ((0, 0, 0), 32)])
def test_choose_basis_size(args, N):
    assert choose_basis_size(*args) == N


def test_choose_basis_size_keeps_boundary_empty():
    N = choose_basis_size(0, 1, 1)
    psi, _ = propagate(init_plane_wave(0, 0.0, N), 1.0, 0.5, 1)
    assert psi.boundary_occupancy() < 1e-8
    N = choose_basis_size(24, 4.9, 20)
    psi, _ = propagate(init_plane_wave(24, 0.5, N), 4.9, 1.0, 20)
    assert psi.boundary_occupancy() < 1e-8


def test_ensemble_initial_energy():
    spec = InitialEnsembleSpec("gaussian", n_momenta=4000, sigma_p=8, seed=3)
    e = quantum_ensemble_energy(spec, 4.9, 0.2, 0)
    assert abs(e.absolute.energy[0] - 32) < 4 * e.absolute.stderr[0]
    assert e.gain.energy[0] == 0


def test_ensemble_matches_single_propagation():
    spec = InitialEnsembleSpec("gaussian", n_momenta=3, sigma_p=8, seed=1)
    e = quantum_ensemble_energy(spec, 2.5, 0.3, 4, basis_half_size=128)
    energies = []
    for p in spec.sample_momenta():
        n0 = math.floor(p)
        _, en = propagate(init_plane_wave(n0, p - n0, 128), 2.5, 0.3, 4)
        energies.append(en)
    np.testing.assert_allclose(e.absolute.energy, np.mean(energies, axis=0), rtol=1e-12)


def test_scan_worker_independent():
    spec = InitialEnsembleSpec("gaussian", n_momenta=600, sigma_p=8, seed=2)
    a = quantum_energy_scan(spec, 4.9, [2], [0.1, 0.4], workers=1)
    b = quantum_energy_scan(spec, 4.9, [2], [0.1, 0.4], workers=4)
    assert a.curves[2].energy.tobytes() == b.curves[2].energy.tobytes()


@pytest.mark.parametrize("tau", [0.02, 0.05, 0.1])
def test_epsilon_classical_correspondence(tau):
    k, t = 2.5, 5
    spec = InitialEnsembleSpec("delta", n_momenta=1, n_angles=2000, p0=0.5)
    quantum = quantum_ensemble_energy(spec, k, tau, t).gain.energy[-1]
    classical = ensemble_energy_curve(spec, KickParams(k, tau, t)).gain.energy[-1]
    assert quantum == pytest.approx(classical, rel=0.05)
