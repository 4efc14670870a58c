"""Classical field energies of phased wave sets and source arrays.

Two independent routes to the same physics live here. The closed form
(`classical_energy`) evaluates the interference Hamiltonian analytically:
for N phase-shifted copies of one mode the total energy is E1*|S|^2 with
S the coherent phase sum, so it ranges from 0 (destructive) to N^2*E1
(constructive). The brute-force route (`field_energy_grid`) integrates
the energy density (E^2 + H^2)/8pi on a grid, with E = -(1/c) dA/dt and
H = curl A evaluated pointwise; over a box commensurate with the
wavelength the two agree to quadrature accuracy.

Far-field power of point-source arrays is integrated over a detector
surface: the default geometry is the forward hemisphere (array along x in
the z=0 plane, cap around +z, theta measured from +z), with a 1-D arc in
the x-z plane as the fast mode for sweeps over linear arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .core import (
    TWO_PI,
    BoxVolume,
    FarFieldViolationError,
    PhasedWaveSet,
    SingularityError,
    SourceArray,
    WaveMode,
    _readonly,
    phase_sum,
)

# sources closer than this fraction of a wavelength are treated as singular
EXCLUSION_FRACTION = 0.1

# far-field validity: detector radius must exceed this multiple of both the
# wavelength and the array extent
FAR_FIELD_FACTOR = 100.0

_COMMENSURATE_TOL = 1e-9


@dataclass(frozen=True)
class DetectorGrid:
    """Quadrature surface for far-field power.

    geometry "hemisphere": product (theta, phi) grid over the forward cap,
    solid-angle weighted, ``samples`` points per angular axis.
    geometry "arc": ``samples`` points on a circle arc in the x-z plane,
    line-measure weighted (a fast 1-D proxy whose absolute scale only
    matters through enhancement ratios).

    ``angular_extent`` is the polar range (hemisphere, default pi/2) or the
    full arc opening (arc, default pi).
    """

    radius: float
    geometry: str = "hemisphere"
    samples: int = 256
    angular_extent: float | None = None

    def __post_init__(self):
        if self.geometry not in ("hemisphere", "arc"):
            raise ValueError(f"geometry must be 'hemisphere' or 'arc', got {self.geometry!r}")
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")
        if self.samples < 64:
            raise ValueError("need at least 64 samples per angular axis")
        extent = self.angular_extent
        if extent is None:
            extent = math.pi / 2 if self.geometry == "hemisphere" else math.pi
            object.__setattr__(self, "angular_extent", extent)
        if not 0.0 < extent <= math.pi:
            raise ValueError("angular_extent must lie in (0, pi]")


@dataclass(frozen=True)
class SpectrumCurve:
    """A swept quantity with raw power and normalized enhancement per point."""

    parameter: np.ndarray
    power: np.ndarray
    enhancement: np.ndarray
    metadata: dict

    def __post_init__(self):
        par = np.asarray(self.parameter, dtype=float)
        pw = np.asarray(self.power, dtype=float)
        enh = np.asarray(self.enhancement, dtype=float)
        if not (par.shape == pw.shape == enh.shape) or par.ndim != 1:
            raise ValueError("parameter, power, enhancement must be equal-length 1-D arrays")
        if par.size >= 2 and not np.all(np.diff(par) > 0.0):
            raise ValueError("parameter values must be strictly increasing")
        object.__setattr__(self, "parameter", _readonly(par))
        object.__setattr__(self, "power", _readonly(pw))
        object.__setattr__(self, "enhancement", _readonly(enh))
        object.__setattr__(self, "metadata", dict(self.metadata))

    def __len__(self) -> int:
        return int(self.parameter.size)


class GridEnergy(NamedTuple):
    """Result of the grid integration; ``commensurate`` is False when the
    box does not contain whole wavelengths along the propagation axis, in
    which case the value depends on box placement."""

    energy: float
    commensurate: bool


def single_wave_energy(mode: WaveMode, volume: BoxVolume | None = None) -> float:
    """Energy E1 of one wave of this mode in the given volume (default 1).

    E1 = V * omega^2 * |a|^2 / (2 pi c^2); it is the unit in which array
    energies are reported as enhancements.
    """
    vol = volume.volume if volume is not None else 1.0
    c = mode.light_speed
    return vol * mode.omega ** 2 * abs(mode.amplitude) ** 2 / (TWO_PI * c ** 2)


def canonical_coordinates(
    mode: WaveMode, phase: float, position, volume: BoxVolume | None = None
) -> tuple[float, float]:
    """Canonical pair (Q, P) of one phased wave at a point.

    Q = sqrt(V/4 pi c^2) (a e^{i(k.r+phi)} + c.c.) and
    P = -i omega sqrt(V/4 pi c^2) (a e^{i(k.r+phi)} - c.c.); both are real,
    and (P^2 + omega^2 Q^2)/2 reproduces E1 independent of position.
    """
    pos = np.asarray(position, dtype=float)
    vol = volume.volume if volume is not None else 1.0
    prefactor = math.sqrt(vol / (4.0 * math.pi * mode.light_speed ** 2))
    rotated = mode.amplitude * np.exp(1j * (float(np.dot(mode.wavevector, pos)) + phase))
    q = 2.0 * prefactor * rotated.real
    p = 2.0 * mode.omega * prefactor * rotated.imag
    return q, p


def classical_energy(waves: PhasedWaveSet, volume: BoxVolume | None = None):
    """Closed-form interference energy of N phased copies of one mode.

    Returns an EnergyReport with diagonal = N*E1, cross = E1*(|S|^2 - N),
    total = E1*|S|^2 where S is the coherent phase sum. Uniform phases give
    the N^2 maximum; opposite phases cancel exactly.
    """
    from .core import EnergyReport

    unit = single_wave_energy(waves.mode, volume)
    n = waves.n_waves
    _, magnitude_sq = phase_sum(waves.phases)
    diagonal = n * unit
    cross = unit * (magnitude_sq - n)
    return EnergyReport.from_parts(diagonal, cross)


def commensurate_box(mode: WaveMode, lengths, center=(0.0, 0.0, 0.0)) -> BoxVolume:
    """Round the box edge along an axis-aligned wavevector to whole
    wavelengths (at least one), so grid energies are placement-independent.
    """
    k = mode.wavevector
    axis = int(np.argmax(np.abs(k)))
    off_axis = np.delete(np.abs(k), axis)
    if np.any(off_axis > 1e-9 * abs(k[axis])):
        raise ValueError("commensurate_box requires an axis-aligned wavevector")
    adjusted = np.array(lengths, dtype=float)
    wavelength = mode.wavelength
    periods = max(1, round(adjusted[axis] / wavelength))
    adjusted[axis] = periods * wavelength
    return BoxVolume(adjusted, np.asarray(center, dtype=float))


def field_energy_grid(
    waves: PhasedWaveSet, volume: BoxVolume, resolution=64
) -> GridEnergy:
    """Midpoint-rule integral of the instantaneous energy density.

    The fields of each wave are evaluated analytically at every cell
    center (snapshot at t = 0; for a commensurate box the integral is
    time-independent) and the density (E^2 + H^2)/8pi is summed. This is
    the brute-force twin of `classical_energy`.
    """
    res = np.broadcast_to(np.asarray(resolution, dtype=int), (3,)).copy()
    if np.any(res < 8):
        raise ValueError("resolution must be at least 8 per axis")

    mode = waves.mode
    k = mode.wavevector
    lengths = volume.lengths
    # the e^{2ik.r} part of the density integrates to prod_i sinc(k_i L_i);
    # only (near-)zero values make the box placement-independent
    residual = np.prod(_sinc(k * lengths))
    commensurate = bool(abs(residual) < _COMMENSURATE_TOL)

    axes = [
        volume.center[i] - lengths[i] / 2.0 + (np.arange(res[i]) + 0.5) * (lengths[i] / res[i])
        for i in range(3)
    ]
    travel = (
        k[0] * axes[0][:, None, None]
        + k[1] * axes[1][None, :, None]
        + k[2] * axes[2][None, None, :]
    )

    c = mode.light_speed
    efield = np.zeros(travel.shape, dtype=complex)
    hfield = np.zeros(travel.shape, dtype=complex)
    for phi in waves.phases:
        analytic = mode.amplitude * np.exp(1j * (travel + phi))
        efield += (1j * mode.omega / c) * analytic
        hfield += 1j * analytic
    # E along the polarization; H along k x pol with |k x pol| = |k|
    e_sq = (2.0 * efield.real) ** 2
    h_sq = mode.wavenumber ** 2 * (2.0 * hfield.real) ** 2

    cell = volume.volume / float(np.prod(res))
    energy = float(((e_sq + h_sq) / (8.0 * math.pi)).sum() * cell)
    return GridEnergy(energy, commensurate)


def _sinc(x):
    # sin(x)/x with sinc(0) = 1 (numpy's np.sinc is the normalized variant)
    return np.sinc(np.asarray(x) / np.pi)


def spherical_field_amplitude(source, phase: float, observation, wavenumber: float) -> complex:
    """Outgoing spherical-wave amplitude e^{i(k r + phi)} / r.

    Raises SingularityError when the observation point is closer to the
    source than one tenth of a wavelength.
    """
    if wavenumber <= 0.0:
        raise ValueError("wavenumber must be positive")
    src = np.asarray(source, dtype=float)
    obs = np.asarray(observation, dtype=float)
    distance = float(np.linalg.norm(obs - src))
    exclusion = EXCLUSION_FRACTION * (TWO_PI / wavenumber)
    if distance < exclusion:
        raise SingularityError(
            f"observation at distance {distance} is inside the exclusion radius {exclusion}"
        )
    return complex(np.exp(1j * (wavenumber * distance + phase)) / distance)


def _detector_quadrature(detector: DetectorGrid) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint sample points (S, 3) and integration weights (S,)."""
    n = detector.samples
    radius = detector.radius
    if detector.geometry == "arc":
        step = detector.angular_extent / n
        theta = -detector.angular_extent / 2.0 + (np.arange(n) + 0.5) * step
        directions = np.stack(
            [np.sin(theta), np.zeros_like(theta), np.cos(theta)], axis=1
        )
        weights = np.full(n, radius * step)
        return radius * directions, weights
    theta_step = detector.angular_extent / n
    phi_step = TWO_PI / n
    theta = (np.arange(n) + 0.5) * theta_step
    phi = (np.arange(n) + 0.5) * phi_step
    theta_grid, phi_grid = np.meshgrid(theta, phi, indexing="ij")
    sin_t = np.sin(theta_grid)
    directions = np.stack(
        [sin_t * np.cos(phi_grid), sin_t * np.sin(phi_grid), np.cos(theta_grid)],
        axis=-1,
    ).reshape(-1, 3)
    weights = (radius ** 2 * sin_t * theta_step * phi_step).reshape(-1)
    return radius * directions, weights


def _raw_power(
    points: np.ndarray,
    weights: np.ndarray,
    positions: np.ndarray,
    phases: np.ndarray,
    wavenumber: float,
) -> float:
    separation = points[:, None, :] - positions[None, :, :]
    distances = np.sqrt((separation ** 2).sum(axis=2))
    field = (np.exp(1j * (wavenumber * distances + phases[None, :])) / distances).sum(axis=1)
    intensity = field.real ** 2 + field.imag ** 2
    return float((intensity * weights).sum())


def farfield_power(array: SourceArray, detector: DetectorGrid) -> tuple[float, float]:
    """Detected power of the array and its enhancement over N single sources.

    Each source radiates e^{i(k r + phi_n)} / r; the coherent intensity is
    integrated over the detector. Enhancement divides by N times the power
    of one origin-centered source on the same detector, so a single source
    scores exactly 1 and a subwavelength uniform-phase array approaches N.

    Raises FarFieldViolationError unless the detector radius is at least
    100x both the wavelength and the array extent.
    """
    threshold = FAR_FIELD_FACTOR * max(array.wavelength, array.extent)
    if detector.radius < threshold:
        raise FarFieldViolationError(
            f"detector radius {detector.radius} below far-field threshold {threshold}"
        )
    points, weights = _detector_quadrature(detector)
    k = array.wavenumber
    power = _raw_power(points, weights, array.positions, array.phases, k)
    single = _raw_power(points, weights, np.zeros((1, 3)), np.zeros(1), k)
    return power, power / (array.n_sources * single)


def transmission_spectrum(
    array: SourceArray, wavelength_range: tuple[float, float], steps: int, detector: DetectorGrid
) -> SpectrumCurve:
    """Far-field power and enhancement as the emission wavelength sweeps.

    Geometry (positions, phases, detector) is held fixed; only the
    wavelength changes. Resonance-like maxima appear when the spacing
    exceeds the wavelength and grating lobes sweep across the detector.
    """
    lo, hi = float(wavelength_range[0]), float(wavelength_range[1])
    if not 0.0 < lo < hi:
        raise ValueError("wavelength range must satisfy 0 < lo < hi")
    if steps < 2:
        raise ValueError("need at least 2 steps")
    values = np.linspace(lo, hi, steps)
    powers = np.empty(steps)
    enhancements = np.empty(steps)
    for i, wavelength in enumerate(values):
        swept = replace(array, wavelength=float(wavelength))
        powers[i], enhancements[i] = farfield_power(swept, detector)
    meta = {
        "kind": "transmission_spectrum",
        "n_sources": array.n_sources,
        "spacing": array.spacing if array.spacing is not None else "",
        "wavelength_min": lo,
        "wavelength_max": hi,
        "steps": steps,
        "detector_geometry": detector.geometry,
        "detector_radius": detector.radius,
        "detector_samples": detector.samples,
    }
    return SpectrumCurve(values, powers, enhancements, meta)
