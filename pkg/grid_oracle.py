"""
Real-space check of the spectral engine.

Integrates i ∂Ψ/∂τ = 2π(−i∂_φ + α)²Ψ on a periodic grid of M points with
the Cayley (implicit midpoint) propagator

    (1 + i dτ H/2) Ψ' = (1 − i dτ H/2) Ψ,

which is unitary for Hermitian H. Two stencils build H:

  central   covariant second difference with link phases e^{±iαh},
            solved exactly with a sparse LU factor;
  spectral  (−i∂_φ + α) applied through the FFT, solved with GMRES
            preconditioned by the central-stencil factor.

Never used by the estimator.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import fft, sparse
from scipy.sparse.linalg import LinearOperator, gmres, splu

from errors import EnvelopeError, InvalidParameter, SolverError
from ring import AngularDensity, evolve, wavefunction
from utils import TWO_PI

MAX_DTAU = 1e-4
SOLVER_RTOL = 1e-12
RESIDUAL_TOLERANCE = 1e-9
GMRES_RESTART = 40
GMRES_MAXITER = 20
STENCILS = ("spectral", "central")


@dataclass(frozen=True)
class GridState:
    grid_size: int
    values: np.ndarray = field(repr=False)
    tau: float = 0.0

    def norm(self):
        return math.sqrt(TWO_PI / self.grid_size * float(np.sum(np.abs(self.values) ** 2)))

    def density(self):
        return AngularDensity(self.grid_size, np.abs(self.values) ** 2)


def from_state_vector(state, grid_size):
    """Synthesize Ψ(φ_k) from the level amplitudes"""
    return GridState(grid_size, wavefunction(state, grid_size), 0.0)


def _central_hamiltonian(grid_size, alpha):
    h = TWO_PI / grid_size
    c = TWO_PI / h ** 2
    up = -c * np.exp(1j * alpha * h)
    down = -c * np.exp(-1j * alpha * h)
    ones = np.ones(grid_size - 1)
    return sparse.diags(
        [np.full(grid_size, 2.0 * c), up * ones, down * ones, [down], [up]],
        [0, 1, -1, grid_size - 1, -(grid_size - 1)],
        shape=(grid_size, grid_size),
        format="csc",
        dtype=complex,
    )


class GridPropagator:
    """One Cayley step of fixed size for a given grid, flux and stencil"""

    def __init__(self, grid_size, dtau, alpha, stencil="spectral"):
        if stencil not in STENCILS:
            raise InvalidParameter(f"unknown stencil {stencil!r}; expected one of {STENCILS}")
        if not 0 < dtau <= MAX_DTAU:
            raise EnvelopeError(f"dtau {dtau} is outside (0, {MAX_DTAU}]")
        self.grid_size = grid_size
        self.dtau = dtau
        self.alpha = alpha
        self.stencil = stencil

        self._central = _central_hamiltonian(grid_size, alpha)
        identity = sparse.identity(grid_size, dtype=complex, format="csc")
        self._lu = splu((identity + 0.5j * dtau * self._central).tocsc())
        if stencil == "spectral":
            wavenumbers = fft.fftfreq(grid_size, d=1.0 / grid_size)
            self._energies = TWO_PI * (wavenumbers + alpha) ** 2
            shape = (grid_size, grid_size)
            self._lhs = LinearOperator(shape, matvec=self._apply_lhs, dtype=complex)
            self._preconditioner = LinearOperator(shape, matvec=self._lu.solve, dtype=complex)

    def hamiltonian(self, values):
        if self.stencil == "central":
            return self._central @ values
        return fft.ifft(self._energies * fft.fft(values))

    def _apply_lhs(self, values):
        return values + 0.5j * self.dtau * self.hamiltonian(values)

    def step(self, values):
        rhs = values - 0.5j * self.dtau * self.hamiltonian(values)
        if self.stencil == "central":
            result = self._lu.solve(rhs)
        else:
            result, info = gmres(self._lhs, rhs, x0=values, rtol=SOLVER_RTOL, atol=0.0,
                                 restart=GMRES_RESTART, maxiter=GMRES_MAXITER,
                                 M=self._preconditioner)
            if info != 0:
                raise SolverError("gmres did not converge", self._residual(result, rhs))
        residual = self._residual(result, rhs)
        if residual > RESIDUAL_TOLERANCE:
            raise SolverError("cayley solve is inaccurate", residual)
        return result

    def _residual(self, result, rhs):
        return float(np.linalg.norm(self._apply_lhs(result) - rhs) / np.linalg.norm(rhs))


@lru_cache(maxsize=8)
def get_propagator(grid_size, dtau, alpha, stencil="spectral"):
    return GridPropagator(grid_size, dtau, alpha, stencil)


def step(state, dtau, alpha, stencil="spectral"):
    """Advance a grid state by one Cayley step"""
    propagator = get_propagator(state.grid_size, dtau, alpha, stencil)
    return GridState(state.grid_size, propagator.step(state.values), state.tau + dtau)


def _advance(state, tau, alpha, dtau, stencil):
    """Advance to time tau in equal steps no longer than dtau"""
    span = tau - state.tau
    if span < 0:
        raise InvalidParameter(f"cannot evolve backwards from {state.tau} to {tau}")
    if span == 0:
        return state
    steps = max(1, math.ceil(span / dtau - 1e-9))
    size = span / steps
    propagator = get_propagator(state.grid_size, size, alpha, stencil)
    values = state.values
    for i in range(steps):
        values = propagator.step(values)
        if (i + 1) % 10000 == 0:
            logging.debug("grid step %d/%d", i + 1, steps)
    return GridState(state.grid_size, values, tau)


def evolve_grid_state(state0, tau, alpha, grid_size, dtau, stencil="spectral"):
    return _advance(from_state_vector(state0, grid_size), tau, alpha, dtau, stencil)


def evolve_grid(state0, tau, alpha, grid_size, dtau, stencil="spectral"):
    """Density after time tau on the grid"""
    return evolve_grid_state(state0, tau, alpha, grid_size, dtau, stencil).density()


def l2_distance(grid_state, reference):
    """L2 distance on the circle between a grid state and a spectral state"""
    target = wavefunction(reference, grid_state.grid_size)
    diff = grid_state.values - target
    return math.sqrt(TWO_PI / grid_state.grid_size * float(np.sum(np.abs(diff) ** 2)))


def oracle_scan(state0, tau_grid, alpha, grid_size, dtau, stencil="spectral"):
    """Rows of (tau, L2 distance to the spectral evolution)"""
    taus = sorted(float(t) for t in tau_grid)
    if not taus:
        raise InvalidParameter("tau grid is empty")
    state = from_state_vector(state0, grid_size)
    rows = []
    for tau in taus:
        state = _advance(state, tau, alpha, dtau, stencil)
        distance = l2_distance(state, evolve(state0, tau, alpha))
        logging.info("oracle tau=%g L2=%.3e", tau, distance)
        rows.append((tau, distance))
    return rows
