"""
First-order relativistic correction δE_n = (ħn)⁴/(8c²m³R⁴).

Over one revival period it adds the phase δφ_n = πn⁴/(2ρ²), with
ρ = R/(ħ/mc) the radius in reduced Compton wavelengths.
"""
from dataclasses import dataclass

import numpy as np
from scipy import constants

from errors import InvalidParameter

# R must exceed RADIUS_MARGIN × min_radius to count as R ≫ min_radius
RADIUS_MARGIN = 10.0


@dataclass(frozen=True)
class RelScale:
    rho: float

    def __post_init__(self):
        if not self.rho > 0:
            raise InvalidParameter(f"rho must be positive, got {self.rho}")

    @classmethod
    def from_radius(cls, radius, mass):
        return cls(radius / reduced_compton_wavelength(mass))


def reduced_compton_wavelength(mass):
    return constants.hbar / (mass * constants.c)


def rel_phase_shift(n, rho):
    """Extra phase of level n after one revival period"""
    if not rho > 0:
        raise InvalidParameter(f"rho must be positive, got {rho}")
    return np.pi * np.asarray(n, dtype=float) ** 4 / (2.0 * rho ** 2)


def rel_energy_shift(n, mass, radius):
    """δE_n in joules"""
    return (constants.hbar * np.asarray(n, dtype=float)) ** 4 / (
        8.0 * constants.c ** 2 * mass ** 3 * radius ** 4)


def max_phase_shift(delta_n, rho):
    """Largest δφ_n over |n| ≤ Δn"""
    return float(rel_phase_shift(np.floor(delta_n), rho))


def min_radius(delta_n, mass):
    """(πħ/mc)·sqrt(Δn⁵/2): radius at which δφ_Δn reaches the packet resolution"""
    if not delta_n > 0:
        raise InvalidParameter(f"delta_n must be positive, got {delta_n}")
    return np.pi * reduced_compton_wavelength(mass) * np.sqrt(delta_n ** 5 / 2.0)


def radius_satisfies_bound(radius, delta_n, mass):
    return radius >= RADIUS_MARGIN * min_radius(delta_n, mass)


def evolve_corrected(state, tau, alpha, rho):
    """Evolution with the n⁴ correction added to the flux-coupled phase"""
    levels = state.levels
    phase = 2.0 * np.pi * (levels + alpha) ** 2 + rel_phase_shift(levels, rho)
    return state.with_amplitudes(state.amplitudes * np.exp(-1j * phase * tau))
