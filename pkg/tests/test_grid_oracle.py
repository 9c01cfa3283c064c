import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import EnvelopeError, InvalidParameter, UndersizedGrid
from grid_oracle import (GridPropagator, evolve_grid, evolve_grid_state, from_state_vector,
                         get_propagator, l2_distance, oracle_scan, step)
from revival import peak_angle
from ring import PacketSpec, StateVector, evolve, make_gaussian_packet, position_density
from utils import circular_distance


@pytest.fixture
def packet3():
    return make_gaussian_packet(PacketSpec(3.0, phi0=0.4))


def test_initial_grid_state_matches_spectral_state(packet3):
    state = from_state_vector(packet3, 256)
    assert state.norm() == pytest.approx(1.0, abs=1e-12)
    assert l2_distance(state, packet3) < 1e-14


@pytest.mark.parametrize('stencil', ['spectral', 'central'])
def test_cayley_step_is_unitary(packet3, stencil):
    state = from_state_vector(packet3, 256)
    for _ in range(20):
        state = step(state, 1e-4, 0.2, stencil)
    assert state.norm() == pytest.approx(1.0, abs=1e-10)
    assert state.tau == pytest.approx(2e-3)


@pytest.mark.parametrize('stencil', ['spectral', 'central'])
def test_grid_flux_periodicity_with_gauge_shift(packet3, stencil):
    # e^{−iφ}ψ shifts every level down by one
    shifted = StateVector(packet3.n_min - 1, packet3.n_max - 1, packet3.amplitudes)
    plain = evolve_grid(packet3, 2e-3, 0.2, 256, 1e-4, stencil)
    gauged = evolve_grid(shifted, 2e-3, 1.2, 256, 1e-4, stencil)
    assert_allclose(gauged.values, plain.values, atol=1e-10)


def test_spectral_stencil_tracks_exact_evolution(packet3):
    state = evolve_grid_state(packet3, 2e-3, 0.2, 256, 1e-5)
    assert l2_distance(state, evolve(packet3, 2e-3, 0.2)) < 1e-6


def test_oracle_scan_rows(packet3):
    rows = oracle_scan(packet3, [2e-3, 1e-3], 0.0, 256, 1e-4)
    assert [tau for tau, _ in rows] == [1e-3, 2e-3]
    assert all(distance < 1e-3 for _, distance in rows)


def test_dtau_outside_envelope():
    with pytest.raises(EnvelopeError):
        GridPropagator(256, 2e-4, 0.0)
    with pytest.raises(EnvelopeError):
        GridPropagator(256, 0.0, 0.0)


def test_unknown_stencil():
    with pytest.raises(InvalidParameter):
        GridPropagator(256, 1e-5, 0.0, 'upwind')


def test_undersized_oracle_grid(packet10):
    with pytest.raises(UndersizedGrid):
        evolve_grid(packet10, 1e-3, 0.0, 256, 1e-4)


def test_propagators_are_cached():
    assert get_propagator(128, 1e-4, 0.1) is get_propagator(128, 1e-4, 0.1)


def test_empty_scan(packet3):
    with pytest.raises(InvalidParameter):
        oracle_scan(packet3, [], 0.0, 256, 1e-4)


@pytest.mark.slow
def test_oracle_matches_spectral_evolution_and_converges(packet5):
    [(_, full)] = oracle_scan(packet5, [0.01], 0.2, 2048, 1e-5)
    [(_, half)] = oracle_scan(packet5, [0.01], 0.2, 2048, 5e-6)
    assert full < 1e-5
    assert 3.0 <= full / half <= 5.0


def test_basis_states_on_the_grid():
    grid = from_state_vector(StateVector.basis(0), 64)
    assert_allclose(grid.values, np.full(64, 1 / np.sqrt(2 * np.pi)), atol=1e-14)
    grid = from_state_vector(StateVector.basis(1), 64)
    phi = 2 * np.pi * np.arange(64) / 64
    assert_allclose(grid.values, np.exp(1j * phi) / np.sqrt(2 * np.pi), atol=1e-14)


def test_grid_density_matches_spectral_density(packet3):
    grid = from_state_vector(packet3, 256)
    assert_allclose(grid.density().values, position_density(packet3, 256).values, atol=1e-10)


def test_zero_mode_is_stationary():
    state = from_state_vector(StateVector.basis(0), 64)
    for _ in range(1000):
        state = step(state, 1e-4, 0.0)
    assert_allclose(state.values, np.full(64, 1 / np.sqrt(2 * np.pi)), atol=1e-10)


def test_eigenstate_phase():
    state = evolve_grid_state(StateVector.basis(3), 1e-2, 0.0, 64, 1e-5)
    phi = 2 * np.pi * np.arange(64) / 64
    expected = np.exp(-2j * np.pi * 9 * 1e-2) * np.exp(3j * phi) / np.sqrt(2 * np.pi)
    assert_allclose(state.values, expected, atol=1e-6)


@pytest.mark.slow
def test_half_period_moves_packet_to_the_opposite_side(packet3):
    density = evolve_grid(packet3, 0.5, 0.0, 256, 1e-4)
    assert circular_distance(peak_angle(density), 0.4 + np.pi) < 2 * np.pi / 256
