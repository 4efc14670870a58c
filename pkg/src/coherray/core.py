"""Shared value types and the phase-sum kernel.

Everything in this module is an immutable value object; instances can be
shared freely across threads or worker processes. Natural units are used
throughout (c = 1 by default, and hbar = 1 in the quantum modules); the
CLI offers an output-only energy scale for converting to physical units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

_VEC_TOL = 1e-9


class SingularityError(ValueError):
    """An observation point fell inside a source's exclusion radius."""


class FarFieldViolationError(ValueError):
    """A detector is too close to the array for far-field formulas to hold."""


class ConfigError(Exception):
    """A sweep or CLI configuration is incomplete or inconsistent."""


def _vec3(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    arr.flags.writeable = False
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


def reduce_phase(phi: float) -> float:
    """Map a phase to [0, 2*pi)."""
    return float(phi) % TWO_PI


@dataclass(frozen=True)
class WaveMode:
    """A single plane or spherical wave mode.

    Parameters
    ----------
    wavevector : array_like, shape (3,)
        Propagation vector k.
    omega : float
        Angular frequency; must equal ``light_speed * |k|``.
    amplitude : complex
        Complex amplitude of the analytic-signal part of the vector
        potential.
    polarization : array_like, shape (3,)
        Real unit vector orthogonal to ``wavevector``.
    kind : {"plane", "spherical"}
        Spatial profile of the wave.
    light_speed : float
        Wave speed c; defaults to 1 (natural units).
    """

    wavevector: np.ndarray
    omega: float
    amplitude: complex
    polarization: np.ndarray
    kind: str = "plane"
    light_speed: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "wavevector", _vec3(self.wavevector, "wavevector"))
        object.__setattr__(self, "polarization", _vec3(self.polarization, "polarization"))
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        if self.kind not in ("plane", "spherical"):
            raise ValueError(f"kind must be 'plane' or 'spherical', got {self.kind!r}")
        if self.light_speed <= 0.0:
            raise ValueError("light_speed must be positive")
        if not self.omega > 0.0:
            raise ValueError("omega must be positive")
        k_norm = float(np.linalg.norm(self.wavevector))
        if k_norm <= 0.0:
            raise ValueError("wavevector must be nonzero")
        if abs(self.omega - self.light_speed * k_norm) > _VEC_TOL * self.omega:
            raise ValueError(
                f"omega={self.omega} inconsistent with light_speed*|k|={self.light_speed * k_norm}"
            )
        if abs(float(np.dot(self.polarization, self.wavevector))) > _VEC_TOL * k_norm:
            raise ValueError("polarization must be orthogonal to wavevector")
        if abs(float(np.linalg.norm(self.polarization)) - 1.0) > _VEC_TOL:
            raise ValueError("polarization must be a unit vector")

    @classmethod
    def plane(cls, wavevector, amplitude=1.0, polarization=None, light_speed=1.0) -> "WaveMode":
        """Build a plane mode, deriving omega and (optionally) a polarization."""
        k = _vec3(wavevector, "wavevector")
        if polarization is None:
            polarization = _default_polarization(k)
        omega = light_speed * float(np.linalg.norm(k))
        return cls(k, omega, amplitude, polarization, "plane", light_speed)

    @property
    def wavenumber(self) -> float:
        return float(np.linalg.norm(self.wavevector))

    @property
    def wavelength(self) -> float:
        return TWO_PI / self.wavenumber


def _default_polarization(k: np.ndarray) -> np.ndarray:
    k_hat = k / np.linalg.norm(k)
    trial = np.array([0.0, 1.0, 0.0])
    if abs(float(np.dot(k_hat, trial))) > 0.9:
        trial = np.array([0.0, 0.0, 1.0])
    pol = trial - float(np.dot(trial, k_hat)) * k_hat
    return pol / np.linalg.norm(pol)


@dataclass(frozen=True)
class PhasedWaveSet:
    """N copies of one mode, distinguished only by their phase offsets.

    Phases are reduced mod 2*pi at construction and stored as a tuple.
    """

    mode: WaveMode
    phases: tuple = ()

    def __post_init__(self):
        if len(self.phases) < 1:
            raise ValueError("a wave set needs at least one phase")
        object.__setattr__(self, "phases", tuple(reduce_phase(p) for p in self.phases))

    @property
    def n_waves(self) -> int:
        return len(self.phases)


@dataclass(frozen=True)
class SourceArray:
    """Point sources at fixed positions with per-source emission phases.

    ``spacing`` is the uniform gap for linear arrays (None for free-form
    layouts). ``wavelength`` is the shared emission wavelength.
    """

    positions: np.ndarray
    phases: np.ndarray
    wavelength: float
    spacing: float | None = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError(f"positions must have shape (N, 3), got {pos.shape}")
        if pos.shape[0] < 1:
            raise ValueError("need at least one source")
        ph = np.asarray(self.phases, dtype=float)
        if ph.shape != (pos.shape[0],):
            raise ValueError("phases must match the number of sources")
        if self.wavelength <= 0.0:
            raise ValueError("wavelength must be positive")
        if self.spacing is not None and self.spacing <= 0.0:
            raise ValueError("spacing must be positive")
        if pos.shape[0] > 1:
            diff = pos[:, None, :] - pos[None, :, :]
            dist = np.sqrt((diff ** 2).sum(axis=2))
            off_diag = dist[~np.eye(pos.shape[0], dtype=bool)]
            if off_diag.min() <= 0.0:
                raise ValueError("source positions must be distinct")
        object.__setattr__(self, "positions", _readonly(pos))
        object.__setattr__(self, "phases", _readonly(ph % TWO_PI))

    @property
    def n_sources(self) -> int:
        return int(self.positions.shape[0])

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def extent(self) -> float:
        """Largest pairwise source distance (0 for a single source)."""
        if self.n_sources == 1:
            return 0.0
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return float(np.sqrt((diff ** 2).sum(axis=2)).max())


@dataclass(frozen=True)
class BoxVolume:
    """Axis-aligned rectangular integration volume."""

    lengths: np.ndarray
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        lengths = _vec3(self.lengths, "lengths")
        if np.any(lengths <= 0.0):
            raise ValueError("box lengths must be positive")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "center", _vec3(self.center, "center"))

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))


@dataclass(frozen=True)
class EnergyReport:
    """Energy split into self terms, interference terms, and their sum.

    ``enhancement`` is the ratio of the total to the uncorrelated energy
    (N times the single-wave unit, which equals ``diagonal``); it lies in
    [0, N] for N equal-amplitude waves.
    """

    diagonal: float
    cross: float
    total: float
    enhancement: float

    @classmethod
    def from_parts(cls, diagonal: float, cross: float) -> "EnergyReport":
        if diagonal <= 0.0:
            raise ValueError("diagonal energy must be positive")
        total = diagonal + cross
        # rounding may leave a tiny negative; anything worse is a real bug
        if total < -1e-9 * diagonal:
            raise ValueError(f"total energy {total} is negative beyond tolerance")
        return cls(diagonal, cross, total, total / diagonal)


def phase_sum(phases) -> tuple[complex, float]:
    """Coherent sum S = sum_n exp(i*phi_n) and its squared magnitude.

    |S|^2 is the interference enhancement kernel: it equals
    N + 2*sum_{n<m} cos(phi_n - phi_m) and ranges over [0, N^2].

    Returns
    -------
    (S, magnitude_sq) : tuple[complex, float]
    """
    arr = np.asarray(list(phases), dtype=float)
    if arr.size == 0:
        raise ValueError("phase list must not be empty")
    total = complex(np.exp(1j * arr).sum())
    return total, total.real ** 2 + total.imag ** 2


def make_linear_array(
    n_sources: int,
    spacing: float,
    wavelength: float,
    phase_profile=0.0,
) -> SourceArray:
    """Equally spaced sources on the x axis, centered on the origin.

    ``phase_profile`` is either a constant applied to every source or a
    sequence of per-source phases. A single source sits exactly at the
    origin regardless of spacing.
    """
    if n_sources < 1:
        raise ValueError("n_sources must be at least 1")
    if spacing <= 0.0:
        raise ValueError("spacing must be positive")
    if wavelength <= 0.0:
        raise ValueError("wavelength must be positive")
    offsets = (np.arange(n_sources) - (n_sources - 1) / 2.0) * spacing
    positions = np.zeros((n_sources, 3))
    positions[:, 0] = offsets
    if np.isscalar(phase_profile):
        phases = np.full(n_sources, float(phase_profile))
    else:
        phases = np.asarray(list(phase_profile), dtype=float)
        if phases.shape != (n_sources,):
            raise ValueError(
                f"phase_profile has {phases.size} entries for {n_sources} sources"
            )
    return SourceArray(positions, phases, wavelength, spacing)
