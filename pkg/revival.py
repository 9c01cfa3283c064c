import logging
from dataclasses import dataclass, field

import numpy as np

from errors import InvalidParameter, MultiModal, OverlapError, UniformDensity
from ring import DEFAULT_GRID_SIZE, evolve, fidelity, position_density
from utils import TWO_PI, circular_distance, wrap_angle

MAX_FRACTION = 12
# primary and secondary lobe arcs for the multimodality check
LOBE_HALF_WIDTH = np.pi / 8
SECONDARY_MIN_OFFSET = np.pi / 4


@dataclass(frozen=True)
class Thresholds:
    """Detection constants; the ANALYSIS config section overrides them"""
    resultant_min: float = 0.05
    variance_max: float = 0.9
    secondary_max: float = 0.25
    lobe_weight_min: float = 1e-3


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class LobeSet:
    centers: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    k: int

    def __len__(self):
        return len(self.centers)


def autocorrelation_scan(psi0, alpha, tau_grid):
    """Return probability |⟨ψ0|ψ(τ)⟩|² at each τ; rows are (tau, fidelity)"""
    taus = np.asarray(tau_grid, dtype=float)
    if taus.size == 0:
        raise InvalidParameter("tau grid is empty")
    if np.any(np.diff(taus) < 0):
        raise InvalidParameter("tau grid must be sorted")
    rows = np.empty((taus.size, 2))
    for i, tau in enumerate(taus):
        rows[i] = tau, fidelity(evolve(psi0, tau, alpha), psi0)
    return rows


def circular_moments(density):
    """Mean direction and resultant length of a density on the circle"""
    weights = density.values * density.spacing
    angles = density.angles
    c = np.sum(weights * np.cos(angles))
    s = np.sum(weights * np.sin(angles))
    return wrap_angle(np.arctan2(s, c)), float(np.hypot(c, s))


def circular_width(density):
    """Circular standard deviation sqrt(−2 ln R); infinite for a uniform density"""
    _, resultant = circular_moments(density)
    if resultant <= 0.0:
        return np.inf
    return float(np.sqrt(-2.0 * np.log(min(resultant, 1.0))))


def _arc_masses(density, half_width):
    """Probability inside the arc of given half-width centred on each grid point"""
    half_bins = max(1, int(round(half_width / density.spacing)))
    weights = density.values * density.spacing
    padded = np.concatenate([weights[-half_bins:], weights, weights[:half_bins]])
    cumulative = np.concatenate([[0.0], np.cumsum(padded)])
    window = 2 * half_bins + 1
    return cumulative[window:] - cumulative[:-window]


def _parabolic_peak(density):
    """Argmax refined by a parabola through the three neighbouring bins"""
    values = density.values
    k = int(np.argmax(values))
    left, centre, right = values[k - 1], values[k], values[(k + 1) % values.size]
    denominator = left - 2.0 * centre + right
    offset = 0.0 if denominator == 0.0 else 0.5 * (left - right) / denominator
    return wrap_angle((k + offset) * density.spacing)


def peak_angle(density, thresholds=DEFAULT_THRESHOLDS):
    """Direction of the single dominant lobe of a density, in [0, 2π)"""
    _, resultant = circular_moments(density)
    if resultant < thresholds.resultant_min:
        raise UniformDensity(f"resultant length {resultant:.3g} shows no localized peak")
    if 1.0 - resultant >= thresholds.variance_max:
        logging.warning("circular variance %.3f is above %.2f; peak angle is unreliable",
                        1.0 - resultant, thresholds.variance_max)

    peak = _parabolic_peak(density)
    angles = density.angles
    arcs = _arc_masses(density, LOBE_HALF_WIDTH)
    nearest = int(np.rint(peak / density.spacing)) % density.grid_size
    primary = arcs[nearest]
    away = circular_distance(angles, peak) >= SECONDARY_MIN_OFFSET
    secondary = float(arcs[away].max()) if np.any(away) else 0.0
    if secondary > thresholds.secondary_max * primary:
        raise MultiModal(
            f"secondary lobe holds {secondary / primary:.1%} of the primary lobe's mass")

    # circular mean of the half circle around the parabolic peak
    local = circular_distance(angles, peak) < np.pi / 2
    weights = density.values[local]
    c = np.sum(weights * np.cos(angles[local]))
    s = np.sum(weights * np.sin(angles[local]))
    return wrap_angle(np.arctan2(s, c))


def revival_weights(k):
    """Character-sum oracle: weight |c_j|² of the copy rotated by 2πj/k at τ = 1/k"""
    r = np.arange(k)
    j = r[:, None]
    coefficients = np.exp(-2j * np.pi * r ** 2 / k)[None, :] * np.exp(2j * np.pi * j * r / k)
    c = coefficients.sum(axis=1) / k
    return np.abs(c) ** 2


def fractional_lobes(psi0, k, grid_size=DEFAULT_GRID_SIZE, thresholds=DEFAULT_THRESHOLDS):
    """Lobes of ψ0 evolved to τ = 1/k without flux"""
    if not 2 <= k <= MAX_FRACTION:
        raise InvalidParameter(f"k must lie in [2, {MAX_FRACTION}], got {k}")

    initial = position_density(psi0, grid_size)
    center, _ = circular_moments(initial)
    width = circular_width(initial)
    spacing = TWO_PI / k
    if width >= spacing / 2:
        raise OverlapError(
            f"packet width {width:.3g} rad overlaps lobes spaced {spacing:.3g} rad apart")

    density = position_density(evolve(psi0, 1.0 / k, 0.0), grid_size)
    # each grid point belongs to the nearest lattice site center + 2πj/k
    offsets = wrap_angle(density.angles - center)
    owner = np.rint(offsets / spacing).astype(int) % k
    arc_weights = np.bincount(owner, weights=density.values * density.spacing, minlength=k)

    keep = arc_weights >= thresholds.lobe_weight_min
    centers = wrap_angle(center + spacing * np.arange(k))[keep]
    logging.debug("tau=1/%d: %d of %d lobes kept", k, int(keep.sum()), k)
    return LobeSet(centers=centers, weights=arc_weights[keep], k=k)
