"""
Single-shot flux estimation.

At τ = 1 the packet sits at φ0 + 4πα, so one position sample φ gives
α ≡ (φ − φ0)/(4π) modulo 1/2, i.e. the flux modulo Φ0 = h/2e.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy import constants

from errors import InvalidParameter
from relativistic import evolve_corrected
from ring import DEFAULT_GRID_SIZE, evolve, make_gaussian_packet, position_density
from utils import (TWO_PI, circular_distance, circular_mean, signed_circular_difference,
                   wrap_angle, wrap_period)

# α is observable modulo 1/2 (flux modulo h/2e)
FLUX_PERIOD = 0.5
MIN_TRIALS = 100


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    sampled_angle: float
    alpha_true_mod: float
    alpha_est: float
    circular_error: float

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ErrorReport:
    delta_n: float
    trials: int
    rms_relative_error: float
    mean_bias: float
    alpha_true_mod: float
    base_seed: int

    def as_dict(self):
        return asdict(self)


def trial_seed(base_seed, index):
    """Seed of trial `index`, derived from (base_seed, index) only"""
    state = np.random.SeedSequence([int(base_seed), int(index)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def _cdf(density):
    cdf = np.cumsum(density.values)
    return cdf / cdf[-1]


def _draw(density, cdf, rng, size=None):
    # bin k covers φ_k ± h/2
    u = rng.random(size)
    k = np.minimum(np.searchsorted(cdf, u, side="right"), density.grid_size - 1)
    jitter = rng.random(size)
    return wrap_angle((k + jitter - 0.5) * density.spacing)


def sample_position(density, seed):
    """One simulated position measurement, by inverse CDF with intra-bin jitter"""
    rng = np.random.default_rng(seed)
    return _draw(density, _cdf(density), rng)


def sample_positions(density, seed, shots):
    rng = np.random.default_rng(seed)
    return _draw(density, _cdf(density), rng, size=shots)


def estimate_flux(sampled_angle, phi0):
    """α modulo 1/2 from one position sample, in [0, 1/2)"""
    return wrap_angle(sampled_angle - phi0) / (2.0 * TWO_PI)


def estimate_flux_multi(angles, phi0):
    """α modulo 1/2 from the circular mean of several samples"""
    return estimate_flux(circular_mean(angles), phi0)


def revival_density(spec, alpha, grid_size=DEFAULT_GRID_SIZE, rho=None):
    """Density of the packet at τ = 1"""
    packet = make_gaussian_packet(spec)
    # exact at τ = 1: α and α + 1/2 differ only by a global phase
    alpha_mod = wrap_period(alpha, FLUX_PERIOD)
    if rho is None:
        state = evolve(packet, 1.0, alpha_mod)
    else:
        state = evolve_corrected(packet, 1.0, alpha_mod, rho)
    return position_density(state, grid_size)


def _record(density, spec, alpha, seed, shots):
    alpha_true_mod = wrap_period(alpha, FLUX_PERIOD)
    if shots == 1:
        angle = sample_position(density, seed)
        alpha_est = estimate_flux(angle, spec.phi0)
    else:
        angles = sample_positions(density, seed, shots)
        angle = circular_mean(angles)
        alpha_est = estimate_flux_multi(angles, spec.phi0)
    return TrialRecord(
        seed=int(seed),
        sampled_angle=float(angle),
        alpha_true_mod=alpha_true_mod,
        alpha_est=alpha_est,
        circular_error=circular_distance(alpha_est, alpha_true_mod, FLUX_PERIOD),
    )


def run_trial(spec, alpha, seed, grid_size=DEFAULT_GRID_SIZE, shots=1, rho=None):
    """Prepare, evolve to τ = 1, measure once and estimate α mod 1/2"""
    if shots < 1:
        raise InvalidParameter(f"shots must be at least 1, got {shots}")
    density = revival_density(spec, alpha, grid_size, rho)
    return _record(density, spec, alpha, seed, shots)


def run_trials(spec, alpha, trials, base_seed, grid_size=DEFAULT_GRID_SIZE,
               workers=1, shots=1, rho=None):
    """Independent trials in index order; identical for any number of workers"""
    if shots < 1:
        raise InvalidParameter(f"shots must be at least 1, got {shots}")
    density = revival_density(spec, alpha, grid_size, rho)

    def trial(index):
        return _record(density, spec, alpha, trial_seed(base_seed, index), shots)

    logging.info("running %d trials (delta_n=%s, alpha=%s, workers=%d)",
                 trials, spec.delta_n, alpha, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(trial, range(trials)))
    return [trial(index) for index in range(trials)]


def summarize(records, delta_n, alpha, base_seed):
    errors = np.array([r.circular_error for r in records])
    biases = signed_circular_difference(
        np.array([r.alpha_est for r in records]),
        np.array([r.alpha_true_mod for r in records]),
        FLUX_PERIOD,
    )
    return ErrorReport(
        delta_n=float(delta_n),
        trials=len(records),
        rms_relative_error=float(np.sqrt(np.mean(errors ** 2)) / FLUX_PERIOD),
        mean_bias=float(np.mean(biases)),
        alpha_true_mod=wrap_period(alpha, FLUX_PERIOD),
        base_seed=int(base_seed),
    )


def monte_carlo_trials(spec, alpha, trials, base_seed, grid_size=DEFAULT_GRID_SIZE,
                       workers=1, shots=1, rho=None):
    """ErrorReport together with the per-trial records it summarizes"""
    if trials < MIN_TRIALS:
        raise InvalidParameter(f"monte carlo needs at least {MIN_TRIALS} trials, got {trials}")
    records = run_trials(spec, alpha, trials, base_seed, grid_size, workers, shots, rho)
    report = summarize(records, spec.delta_n, alpha, base_seed)
    logging.info("rms relative error %.5f over %d trials", report.rms_relative_error, trials)
    return report, records


def monte_carlo(spec, alpha, trials, base_seed, grid_size=DEFAULT_GRID_SIZE,
                workers=1, shots=1, rho=None):
    """RMS single-shot error relative to Φ0 and mean circular bias over many trials"""
    report, _ = monte_carlo_trials(spec, alpha, trials, base_seed, grid_size, workers, shots, rho)
    return report


def grating_angles(flux_ratio):
    """Angles of the two lines behind a grating with slit spacing d = λ"""
    r = wrap_period(flux_ratio, 1.0)
    return float(np.arcsin(r)), float(np.arcsin(r - 1.0))


def angular_resolution(delta_n):
    """Position error estimate 1/(πΔn) quoted for the revival scheme"""
    return 1.0 / (np.pi * delta_n)


def relative_flux_error(delta_n):
    """Flux error relative to Φ0 implied by angular_resolution"""
    return angular_resolution(delta_n) / TWO_PI


def flux_resolution(delta_n):
    """Flux error ħΔφ/(2e) in webers"""
    return constants.hbar * angular_resolution(delta_n) / (2.0 * constants.e)


def required_delta_n(relative_error):
    """Smallest Δn whose estimated relative flux error is below relative_error"""
    if not relative_error > 0:
        raise InvalidParameter("relative error must be positive")
    return 1.0 / (2.0 * np.pi ** 2 * relative_error)
