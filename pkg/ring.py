"""
Spectral representation of a charged particle on a flux-threaded ring.

All dynamics are dimensionless: time is τ = t/T with T = 4πmR²/ħ the
revival time, and flux is α = Φ/(h/e). Level n evolves with the phase
e^{−2πi(n+α)²τ}. SI units enter only through revival_time and the
flux conversions.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants, fft

from errors import InvalidParameter, UndersizedGrid
from utils import TWO_PI

DEFAULT_GRID_SIZE = 1024
# Gaussian tail beyond 6Δn is below e^{-36}
CUTOFF_WIDTHS = 6
MIN_CUTOFF = 8
# grid points per retained level
NYQUIST_MARGIN = 4
NORM_TOLERANCE = 1e-12

FLUX_QUANTUM_FULL = constants.h / constants.e


@dataclass(frozen=True)
class StateVector:
    """Amplitudes a_n on angular-momentum levels n_min..n_max"""
    n_min: int
    n_max: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.ndim != 1 or amplitudes.size != self.n_max - self.n_min + 1:
            raise InvalidParameter(
                f"{amplitudes.size} amplitudes do not fit levels [{self.n_min}, {self.n_max}]")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_amplitudes(cls, n_min, amplitudes):
        """Build a normalized state from unnormalized amplitudes starting at n_min"""
        amplitudes = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amplitudes)
        if norm == 0.0:
            raise InvalidParameter("state has zero norm")
        return cls(int(n_min), int(n_min) + amplitudes.size - 1, amplitudes / norm)

    @classmethod
    def basis(cls, n):
        return cls(int(n), int(n), np.array([1.0 + 0.0j]))

    @classmethod
    def superposition(cls, coefficients):
        """Normalized superposition from a mapping {n: amplitude}"""
        if not coefficients:
            raise InvalidParameter("empty superposition")
        n_min, n_max = min(coefficients), max(coefficients)
        amplitudes = np.zeros(n_max - n_min + 1, dtype=complex)
        for n, amplitude in coefficients.items():
            amplitudes[n - n_min] = amplitude
        return cls.from_amplitudes(n_min, amplitudes)

    @property
    def levels(self):
        return np.arange(self.n_min, self.n_max + 1)

    @property
    def size(self):
        return self.amplitudes.size

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def with_amplitudes(self, amplitudes):
        return StateVector(self.n_min, self.n_max, amplitudes)

    def padded(self, n_min, n_max):
        """Same state on the wider level range [n_min, n_max]"""
        if n_min > self.n_min or n_max < self.n_max:
            raise InvalidParameter("padding range must contain the state's levels")
        amplitudes = np.zeros(n_max - n_min + 1, dtype=complex)
        start = self.n_min - n_min
        amplitudes[start:start + self.size] = self.amplitudes
        return StateVector(n_min, n_max, amplitudes)


@dataclass(frozen=True)
class RingConfig:
    """Physical ring: mass (kg), radius (m), unreduced flux α = Φ/(h/e)"""
    mass: float
    radius: float
    alpha: float = 0.0
    rel_enabled: bool = False

    def __post_init__(self):
        if not self.mass > 0:
            raise InvalidParameter(f"mass must be positive, got {self.mass}")
        if not self.radius > 0:
            raise InvalidParameter(f"radius must be positive, got {self.radius}")

    @classmethod
    def from_flux(cls, mass, radius, flux, rel_enabled=False):
        return cls(mass, radius, flux_to_alpha(flux), rel_enabled)

    @property
    def revival_time(self):
        return revival_time(self.mass, self.radius)

    @property
    def rho(self):
        """Radius in reduced Compton wavelengths"""
        return self.radius * self.mass * constants.c / constants.hbar

    @property
    def flux(self):
        return alpha_to_flux(self.alpha)


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian truncation: width Δn, mean level n0, center angle phi0, cutoff N"""
    delta_n: float
    n0: int = 0
    phi0: float = 0.0
    cutoff: int = None

    def __post_init__(self):
        if not self.delta_n > 0:
            raise InvalidParameter(f"delta_n must be positive, got {self.delta_n}")
        minimum = math.ceil(CUTOFF_WIDTHS * self.delta_n)
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", max(minimum, MIN_CUTOFF))
        elif self.cutoff < minimum:
            raise InvalidParameter(
                f"cutoff {self.cutoff} is below ceil({CUTOFF_WIDTHS}·delta_n) = {minimum}")
        object.__setattr__(self, "n0", int(self.n0))
        object.__setattr__(self, "cutoff", int(self.cutoff))


@dataclass(frozen=True)
class AngularDensity:
    """|Ψ(φ)|² sampled at φ_k = 2πk/M"""
    grid_size: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid_size,):
            raise InvalidParameter(f"density needs {self.grid_size} values, got {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def angles(self):
        return grid_angles(self.grid_size)

    @property
    def spacing(self):
        return TWO_PI / self.grid_size

    def total(self):
        return float(self.spacing * self.values.sum())


def grid_angles(grid_size):
    return TWO_PI * np.arange(grid_size) / grid_size


def required_grid_size(state):
    return NYQUIST_MARGIN * state.size


def make_gaussian_packet(spec):
    """a_n ∝ e^{−(n−n0)²/Δn²} e^{−inφ0} for n in n0 ± N"""
    levels = np.arange(spec.n0 - spec.cutoff, spec.n0 + spec.cutoff + 1)
    envelope = np.exp(-((levels - spec.n0) / spec.delta_n) ** 2)
    amplitudes = envelope * np.exp(-1j * levels * spec.phi0)
    logging.debug("packet delta_n=%s n0=%s phi0=%s over %d levels",
                  spec.delta_n, spec.n0, spec.phi0, levels.size)
    return StateVector.from_amplitudes(levels[0], amplitudes)


def phase_factors(levels, tau, alpha):
    return np.exp(-2j * np.pi * (levels + alpha) ** 2 * tau)


def evolve(state, tau, alpha):
    """Exact evolution by dimensionless time tau under flux alpha"""
    return state.with_amplitudes(state.amplitudes * phase_factors(state.levels, tau, alpha))


def rotate(state, angle):
    """Rotate the state by angle: the density moves to φ + angle"""
    return state.with_amplitudes(state.amplitudes * np.exp(-1j * state.levels * angle))


def wavefunction(state, grid_size):
    """Ψ(φ_k) = (1/√2π) Σ_n a_n e^{inφ_k}"""
    required = required_grid_size(state)
    if grid_size < required:
        raise UndersizedGrid(grid_size, required)
    coefficients = np.zeros(grid_size, dtype=complex)
    # distinct residues because size <= grid_size
    coefficients[np.mod(state.levels, grid_size)] = state.amplitudes
    return fft.ifft(coefficients) * grid_size / math.sqrt(TWO_PI)


def position_density(state, grid_size=DEFAULT_GRID_SIZE):
    values = np.abs(wavefunction(state, grid_size)) ** 2
    return AngularDensity(grid_size, values)


def fidelity(a, b):
    """|⟨a|b⟩|², padding the level ranges when they differ"""
    if (a.n_min, a.n_max) != (b.n_min, b.n_max):
        n_min, n_max = min(a.n_min, b.n_min), max(a.n_max, b.n_max)
        a, b = a.padded(n_min, n_max), b.padded(n_min, n_max)
    overlap = np.vdot(a.amplitudes, b.amplitudes)
    return float(min(1.0, abs(overlap) ** 2))


def revival_time(mass, radius):
    """T = 4πmR²/ħ in seconds"""
    return 4.0 * np.pi * mass * radius ** 2 / constants.hbar


def flux_to_alpha(flux):
    """Flux in webers to α = Φ/(h/e); Φ0 = h/2e corresponds to α = 1/2"""
    return flux / FLUX_QUANTUM_FULL


def alpha_to_flux(alpha):
    return alpha * FLUX_QUANTUM_FULL


def packet_width(delta_n):
    """Angular standard deviation of a Gaussian-truncated packet's density"""
    return 1.0 / delta_n


def lap_count(n0, alpha, tau):
    """Mean laps travelled by a packet centred on level n0"""
    return 2.0 * (n0 + alpha) * tau

