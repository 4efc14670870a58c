"""coherray: energy of N phase-coherent waves, classical and quantized.

The package computes the collective field energy of phase-locked wave
ensembles four independent ways (closed form, grid integration,
far-field quadrature, operator expectation) and cross-checks them, plus
the mode-overlap machinery that governs how distinct modes exchange
energy. Natural units c = hbar = 1 throughout; every headline result is
a dimensionless enhancement over the uncorrelated ensemble.
"""

from .core import (
    BoxVolume,
    ConfigError,
    EnergyReport,
    FarFieldViolationError,
    PhasedWaveSet,
    SingularityError,
    SourceArray,
    WaveMode,
    make_linear_array,
    phase_sum,
    reduce_phase,
)
from .classical import (
    DetectorGrid,
    SpectrumCurve,
    canonical_coordinates,
    classical_energy,
    commensurate_box,
    farfield_power,
    field_energy_grid,
    single_wave_energy,
    transmission_spectrum,
)
from .quantum import (
    CommutatorConvention,
    FockSpace,
    QuantumState,
    biphoton_energy,
    build_operators,
    classical_limit_check,
    enhancement_factor,
    expectation_energy,
    single_mode_hamiltonian,
)
from .multimode import (
    ModePair,
    WavepacketSpectrum,
    box_overlap,
    classify_overlap,
    multimode_energy,
    overlap_integral,
    overlap_integral_quadrature,
    overlap_nonzero_condition,
    two_mode_hamiltonian,
    wavepacket_energy,
)
from .experiments import (
    ScalingFit,
    SweepSpec,
    XorShift64Star,
    dicke_scaling_check,
    find_resonances,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BoxVolume",
    "CommutatorConvention",
    "ConfigError",
    "DetectorGrid",
    "EnergyReport",
    "FarFieldViolationError",
    "FockSpace",
    "ModePair",
    "PhasedWaveSet",
    "QuantumState",
    "ScalingFit",
    "SingularityError",
    "SourceArray",
    "SpectrumCurve",
    "SweepSpec",
    "WaveMode",
    "WavepacketSpectrum",
    "XorShift64Star",
    "biphoton_energy",
    "box_overlap",
    "build_operators",
    "canonical_coordinates",
    "classical_energy",
    "classical_limit_check",
    "classify_overlap",
    "commensurate_box",
    "dicke_scaling_check",
    "enhancement_factor",
    "expectation_energy",
    "farfield_power",
    "field_energy_grid",
    "find_resonances",
    "make_linear_array",
    "multimode_energy",
    "overlap_integral",
    "overlap_integral_quadrature",
    "overlap_nonzero_condition",
    "phase_sum",
    "reduce_phase",
    "run_sweep",
    "single_mode_hamiltonian",
    "single_wave_energy",
    "transmission_spectrum",
    "two_mode_hamiltonian",
    "wavepacket_energy",
]
