"""Quantized description of N phase-coherent waves in a truncated number basis.

The N waves share one field mode; their interference enters the
Hamiltonian through cross terms carrying e^{i(phi_n - phi_m)} factors. On
number states the full operator collapses to hbar*omega*|S|^2*(n + 1/2),
so the quantum enhancement reproduces the classical |S|^2/N ratio exactly
for every occupation, and opposite phases annihilate the energy operator
including its vacuum part.

Normal ordering of the cross terms admits two bookkeeping conventions:
the canonical one keeps the (N_hat + 1) form, while the "phased" one
folds the phase factor into the commutator so each cross term's vacuum
piece becomes the real value +-hbar*omega/2. The two Hamiltonians differ
by a multiple of the identity only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import phase_sum

# coherent states are rejected when the truncated tail carries more weight
COHERENT_TAIL_LIMIT = 1e-8

# operator matrices larger than this are refused outright
MAX_DIMENSION = 1_000_000

_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class FockSpace:
    """Truncated number-state space: levels 0..n_max per mode."""

    n_max: int = 32
    mode_count: int = 1

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if self.mode_count < 1:
            raise ValueError("mode_count must be at least 1")

    @property
    def levels(self) -> int:
        return self.n_max + 1

    @property
    def dimension(self) -> int:
        return self.levels ** self.mode_count

    def basis_index(self, occupations) -> int:
        """Row index of a product number state; mode 0 varies slowest."""
        occ = tuple(int(n) for n in occupations)
        if len(occ) != self.mode_count:
            raise ValueError(f"expected {self.mode_count} occupations, got {len(occ)}")
        index = 0
        for n in occ:
            if not 0 <= n <= self.n_max:
                raise ValueError(f"occupation {n} outside 0..{self.n_max}")
            index = index * self.levels + n
        return index


@dataclass(frozen=True)
class ModeOperators:
    """Ladder and number matrices for one mode, embedded in the full space."""

    create: np.ndarray
    destroy: np.ndarray
    number: np.ndarray


@dataclass(frozen=True)
class CommutatorConvention:
    """Normal-ordering bookkeeping for the interference cross terms.

    kind "canonical": a a^dag -> N_hat + 1, leaving the cross term's
    vacuum piece with its phase factor. kind "phased": the commutator
    absorbs the phase factor, making each cross vacuum piece the real
    constant sign * hbar*omega/2.
    """

    kind: str = "canonical"
    sign: int = 1

    def __post_init__(self):
        if self.kind not in ("canonical", "phased"):
            raise ValueError(f"kind must be 'canonical' or 'phased', got {self.kind!r}")
        if self.sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def canonical(cls) -> "CommutatorConvention":
        return cls("canonical", 1)

    @classmethod
    def phased(cls, sign: int = 1) -> "CommutatorConvention":
        return cls("phased", sign)


@dataclass(frozen=True)
class QuantumState:
    """Normalized state vector over a FockSpace.

    ``tail_mass`` records the probability lost to truncation before
    renormalization (nonzero only for coherent constructions).
    """

    space: FockSpace
    vector: np.ndarray
    tail_mass: float = 0.0
    label: str = "custom"

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=complex)
        if vec.shape != (self.space.dimension,):
            raise ValueError(
                f"vector shape {vec.shape} does not match space dimension {self.space.dimension}"
            )
        norm = float(np.linalg.norm(vec))
        if not math.isclose(norm, 1.0, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError(f"state vector must be normalized, |v| = {norm}")
        vec = vec.copy()
        vec.flags.writeable = False
        object.__setattr__(self, "vector", vec)

    @classmethod
    def fock(cls, space: FockSpace, occupations) -> "QuantumState":
        """Product number state |n_0, n_1, ...>."""
        if np.isscalar(occupations):
            occupations = (occupations,)
        vec = np.zeros(space.dimension, dtype=complex)
        vec[space.basis_index(occupations)] = 1.0
        return cls(space, vec, 0.0, "fock")

    @classmethod
    def coherent(cls, space: FockSpace, alphas) -> "QuantumState":
        """Truncated product coherent state, renormalized.

        Rejects amplitudes whose Poisson tail above n_max carries more
        than COHERENT_TAIL_LIMIT of the probability.
        """
        if np.isscalar(alphas):
            alphas = (alphas,)
        alphas = tuple(complex(a) for a in alphas)
        if len(alphas) != space.mode_count:
            raise ValueError(f"expected {space.mode_count} amplitudes, got {len(alphas)}")
        vec = np.ones(1, dtype=complex)
        tail = 0.0
        for alpha in alphas:
            single = _coherent_column(alpha, space.n_max)
            kept = float((np.abs(single) ** 2).sum())
            tail = 1.0 - (1.0 - tail) * kept
            vec = np.kron(vec, single)
        if tail > COHERENT_TAIL_LIMIT:
            raise ValueError(
                f"truncation tail mass {tail:.3e} exceeds {COHERENT_TAIL_LIMIT:.0e};"
                " raise n_max or shrink |alpha|"
            )
        vec = vec / np.linalg.norm(vec)
        return cls(space, vec, tail, "coherent")

    @classmethod
    def superposition(cls, space: FockSpace, terms) -> "QuantumState":
        """Normalized sum of product number states.

        ``terms`` is an iterable of (coefficient, occupations) pairs.
        """
        vec = np.zeros(space.dimension, dtype=complex)
        count = 0
        for coefficient, occupations in terms:
            if np.isscalar(occupations):
                occupations = (occupations,)
            vec[space.basis_index(occupations)] += complex(coefficient)
            count += 1
        if count == 0:
            raise ValueError("superposition needs at least one term")
        norm = float(np.linalg.norm(vec))
        if norm <= 0.0:
            raise ValueError("superposition terms cancel to the zero vector")
        return cls(space, vec / norm, 0.0, "superposition")


def _coherent_column(alpha: complex, n_max: int) -> np.ndarray:
    if alpha == 0:
        column = np.zeros(n_max + 1, dtype=complex)
        column[0] = 1.0
        return column
    ns = np.arange(n_max + 1)
    # log-domain Poisson weights keep large n_max overflow-free
    log_fact = np.cumsum(np.log(np.maximum(ns, 1)))
    magnitude = np.exp(ns * math.log(abs(alpha)) - 0.5 * log_fact - abs(alpha) ** 2 / 2.0)
    return magnitude * np.exp(1j * ns * np.angle(alpha))


def build_operators(space: FockSpace, mode_index: int = 0) -> ModeOperators:
    """Ladder matrices for one mode, kron-embedded into the product space.

    The single-mode annihilator has sqrt(1..n_max) on the superdiagonal, so
    [a, a^dag] equals the identity on levels below n_max (truncation flips
    the last diagonal entry to -n_max).
    """
    if not 0 <= mode_index < space.mode_count:
        raise ValueError(f"mode_index {mode_index} outside 0..{space.mode_count - 1}")
    if space.dimension > MAX_DIMENSION:
        raise ValueError(
            f"space dimension {space.dimension} exceeds the {MAX_DIMENSION} limit"
        )
    destroy_single = np.diag(np.sqrt(np.arange(1, space.levels, dtype=float)), 1)
    eye = np.eye(space.levels)
    destroy = np.ones((1, 1))
    for position in range(space.mode_count):
        destroy = np.kron(destroy, destroy_single if position == mode_index else eye)
    create = destroy.T.copy()
    return ModeOperators(create=create, destroy=destroy, number=create @ destroy)


def single_mode_hamiltonian(
    phases,
    omega: float,
    space: FockSpace,
    convention: CommutatorConvention | None = None,
    include_cross: bool = True,
    hbar: float = 1.0,
) -> np.ndarray:
    """Energy operator of N phase-shifted waves sharing one mode.

    The self part contributes N * hbar*omega*(N_hat + 1/2); each unordered
    wave pair (n, m) adds the Hermitian cross block

        canonical: hbar*omega * (2 N_hat + 1) * cos(phi_n - phi_m)
        phased:    hbar*omega * (2 N_hat * cos(phi_n - phi_m) + sign)

    With ``include_cross`` False only the self part is returned (the
    uncorrelated-wave reference). The result is exactly Hermitian.
    """
    if space.mode_count != 1:
        raise ValueError("single_mode_hamiltonian needs a one-mode space")
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    phases = np.asarray(list(phases), dtype=float)
    if phases.size == 0:
        raise ValueError("phase list must not be empty")
    if convention is None:
        convention = CommutatorConvention.canonical()

    n_waves = phases.size
    number = np.diag(np.arange(space.levels, dtype=float))
    eye = np.eye(space.levels)

    hamiltonian = n_waves * hbar * omega * (number + eye / 2.0)
    if include_cross:
        for i in range(n_waves):
            for j in range(i + 1, n_waves):
                cos_delta = math.cos(phases[i] - phases[j])
                if convention.kind == "canonical":
                    hamiltonian = hamiltonian + hbar * omega * cos_delta * (2.0 * number + eye)
                else:
                    hamiltonian = hamiltonian + hbar * omega * (
                        2.0 * cos_delta * number + convention.sign * eye
                    )
    return hamiltonian.astype(complex)


def expectation_energy(state: QuantumState, hamiltonian: np.ndarray) -> float:
    """Real part of <psi|H|psi>, asserting the imaginary residue is noise."""
    matrix = np.asarray(hamiltonian)
    if matrix.shape != (state.vector.size, state.vector.size):
        raise ValueError(
            f"operator shape {matrix.shape} does not match state dimension {state.vector.size}"
        )
    value = complex(np.vdot(state.vector, matrix @ state.vector))
    scale = float(np.linalg.norm(matrix))
    if abs(value.imag) > _RESIDUE_TOL * max(scale, 1e-300):
        raise ValueError(
            f"imaginary expectation residue {value.imag} exceeds {_RESIDUE_TOL} * |H|"
        )
    return value.real


def enhancement_factor(phases) -> float:
    """|S|^2 / N: the energy ratio relative to N uncorrelated waves."""
    phases = list(phases)
    _, magnitude_sq = phase_sum(phases)
    return magnitude_sq / len(phases)


def classical_limit_check(
    occupation: int,
    phases,
    omega: float = 1.0,
    hbar: float = 1.0,
) -> float:
    """Relative gap between quantum and classical enhancement ratios.

    The quantum ratio <H> / (N hbar omega (n + 1/2)) equals |S|^2/N for
    every occupation, so the return value is rounding noise (and defined
    as ~0 when both ratios vanish under destructive phases).
    """
    if occupation < 0:
        raise ValueError("occupation must be nonnegative")
    phases = list(phases)
    space = FockSpace(n_max=max(occupation + 1, 2))
    hamiltonian = single_mode_hamiltonian(phases, omega, space, hbar=hbar)
    state = QuantumState.fock(space, occupation)
    quantum_ratio = expectation_energy(state, hamiltonian) / (
        len(phases) * hbar * omega * (occupation + 0.5)
    )
    classical_ratio = enhancement_factor(phases)
    if classical_ratio < 1e-14:
        return abs(quantum_ratio - classical_ratio)
    return abs(quantum_ratio - classical_ratio) / classical_ratio


def biphoton_energy(delta_phi: float, overlap: complex, omega: float, hbar: float = 1.0) -> float:
    """Photon energy of a phase-correlated photon pair from two sources.

    energy = 2 hbar omega (1 + Re(I e^{i delta_phi})) with I the mode
    overlap: 4 hbar omega at full overlap in phase, 0 at full overlap in
    antiphase, and 2 hbar omega (two independent photons) at I = 0. The
    vacuum contribution is excluded; it is half the returned value.
    """
    overlap = complex(overlap)
    if abs(overlap) > 1.0 + 1e-12:
        raise ValueError(f"overlap magnitude {abs(overlap)} exceeds 1")
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    return 2.0 * hbar * omega * (1.0 + (overlap * np.exp(1j * delta_phi)).real)
