import math

import numpy as np
import pytest

from coherray import (
    CommutatorConvention,
    FockSpace,
    QuantumState,
    biphoton_energy,
    build_operators,
    classical_limit_check,
    enhancement_factor,
    expectation_energy,
    phase_sum,
    single_mode_hamiltonian,
)
from coherray.experiments import XorShift64Star

TWO_PI = 2.0 * math.pi


class TestFockSpace:
    def test_dimensions(self):
        space = FockSpace(n_max=5, mode_count=2)
        assert space.levels == 6
        assert space.dimension == 36

    def test_basis_index_mode_zero_slowest(self):
        space = FockSpace(n_max=2, mode_count=2)
        assert space.basis_index((0, 0)) == 0
        assert space.basis_index((0, 1)) == 1
        assert space.basis_index((1, 0)) == 3
        assert space.basis_index((2, 2)) == 8

    def test_occupation_bounds(self):
        space = FockSpace(n_max=2)
        with pytest.raises(ValueError):
            space.basis_index((3,))
        with pytest.raises(ValueError):
            space.basis_index((0, 0))


class TestLadderOperators:
    def test_destroy_action(self):
        ops = build_operators(FockSpace(n_max=6))
        for n in range(1, 7):
            vec = np.zeros(7)
            vec[n] = 1.0
            lowered = ops.destroy @ vec
            assert abs(lowered[n - 1] - math.sqrt(n)) < 1e-12

    def test_commutator_below_truncation_edge(self):
        # [a, a^dag] = 1 holds exactly on every level except the last
        space = FockSpace(n_max=10)
        ops = build_operators(space)
        comm = ops.destroy @ ops.create - ops.create @ ops.destroy
        assert np.allclose(np.diag(comm)[:-1], 1.0, atol=1e-12)
        assert abs(comm[-1, -1] - (-space.n_max)) < 1e-12  # truncation artifact

    def test_number_operator(self):
        ops = build_operators(FockSpace(n_max=4))
        assert np.allclose(ops.number, np.diag(np.arange(5.0)), atol=1e-12)

    def test_two_mode_operators_commute(self):
        space = FockSpace(n_max=3, mode_count=2)
        ops0 = build_operators(space, 0)
        ops1 = build_operators(space, 1)
        assert np.allclose(ops0.destroy @ ops1.create, ops1.create @ ops0.destroy, atol=1e-12)

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            build_operators(FockSpace(n_max=1100, mode_count=2))


class TestQuantumState:
    def test_fock_is_basis_vector(self):
        space = FockSpace(n_max=4)
        state = QuantumState.fock(space, 2)
        assert abs(state.vector[2] - 1.0) < 1e-15
        assert abs(np.linalg.norm(state.vector) - 1.0) < 1e-12

    def test_coherent_mean_occupation(self):
        space = FockSpace(n_max=40)
        alpha = 1.2 - 0.5j
        state = QuantumState.coherent(space, (alpha,))
        ops = build_operators(space)
        mean_n = expectation_energy(state, ops.number.astype(complex))
        assert abs(mean_n - abs(alpha) ** 2) < 1e-8
        assert state.tail_mass < 1e-8

    def test_coherent_rejects_heavy_truncation_tail(self):
        with pytest.raises(ValueError):
            QuantumState.coherent(FockSpace(n_max=4), (3.0,))

    def test_superposition(self):
        space = FockSpace(n_max=3)
        state = QuantumState.superposition(space, [(1.0, 0), (1.0, 2)])
        assert abs(abs(state.vector[0]) ** 2 - 0.5) < 1e-12
        assert abs(abs(state.vector[2]) ** 2 - 0.5) < 1e-12

    def test_unnormalized_vector_rejected(self):
        space = FockSpace(n_max=2)
        with pytest.raises(ValueError):
            QuantumState(space, np.array([1.0, 1.0, 0.0], dtype=complex))


def test_hamiltonian_expectation_matches_phase_sum_oracle():
    """<n|H|n> must equal hbar w |S|^2 (n + 1/2) for any phases.

    The matrix route builds the operator pair by pair; the oracle comes
    straight from the closed-form coherent sum.
    """
    rng = XorShift64Star(2024)
    for _ in range(40):
        n_waves = 1 + rng.next_uint64() % 6
        occupation = int(rng.next_uint64() % 16)
        phases = rng.phases(int(n_waves))
        space = FockSpace(n_max=max(occupation + 1, 2))
        operator = single_mode_hamiltonian(phases, 1.0, space)
        state = QuantumState.fock(space, occupation)
        energy = expectation_energy(state, operator)
        _, mag_sq = phase_sum(phases)
        expected = mag_sq * (occupation + 0.5)
        assert abs(energy - expected) <= 1e-10 * max(1.0, abs(expected))


def test_hamiltonian_is_hermitian():
    rng = XorShift64Star(8)
    phases = rng.phases(4)
    for convention in (CommutatorConvention.canonical(), CommutatorConvention.phased(1)):
        operator = single_mode_hamiltonian(phases, 1.3, FockSpace(n_max=6), convention)
        assert np.allclose(operator, operator.conj().T, atol=1e-12)


def test_self_part_is_uncorrelated_reference():
    space = FockSpace(n_max=5)
    operator = single_mode_hamiltonian([0.1, 0.9, 2.2], 2.0, space, include_cross=False)
    state = QuantumState.fock(space, 3)
    assert abs(expectation_energy(state, operator) - 3 * 2.0 * 3.5) < 1e-12


def test_antiphase_pair_has_zero_energy():
    space = FockSpace(n_max=8)
    operator = single_mode_hamiltonian([0.0, math.pi], 1.0, space)
    for occupation in (0, 3, 8):
        state = QuantumState.fock(space, occupation)
        assert abs(expectation_energy(state, operator)) <= 1e-12


def test_convention_difference_is_identity_multiple():
    rng = XorShift64Star(11)
    phases = rng.phases(4)
    space = FockSpace(n_max=12)
    canonical = single_mode_hamiltonian(phases, 1.0, space, CommutatorConvention.canonical())
    for sign in (1, -1):
        phased = single_mode_hamiltonian(phases, 1.0, space, CommutatorConvention.phased(sign))
        difference = canonical - phased
        residue = difference - difference[0, 0] * np.eye(space.levels)
        assert np.abs(residue).max() <= 1e-12 * max(1.0, abs(difference[0, 0]))


def test_uniform_phases_maximize_expectation():
    # argmax invariance: no random phase set beats the uniform one
    space = FockSpace(n_max=4)
    state = QuantumState.fock(space, 2)
    n_waves = 3
    uniform = expectation_energy(
        state, single_mode_hamiltonian([0.0] * n_waves, 1.0, space)
    )
    rng = XorShift64Star(55)
    for _ in range(100):
        phases = rng.phases(n_waves)
        energy = expectation_energy(state, single_mode_hamiltonian(phases, 1.0, space))
        assert energy <= uniform + 1e-10


def test_expectation_rejects_shape_mismatch():
    space = FockSpace(n_max=3)
    state = QuantumState.fock(space, 0)
    with pytest.raises(ValueError):
        expectation_energy(state, np.eye(7))


def test_enhancement_factor():
    assert abs(enhancement_factor([0.3] * 5) - 5.0) < 1e-12
    assert enhancement_factor([0.0, math.pi]) < 1e-30


def test_classical_limit_holds_for_any_occupation():
    rng = XorShift64Star(99)
    for occupation in (0, 1, 7, 20):
        phases = rng.phases(3)
        assert classical_limit_check(occupation, phases) < 1e-10
    # destructive configuration compares near-zero against zero
    assert classical_limit_check(2, [0.0, math.pi]) < 1e-10


class TestBiphoton:
    def test_range_and_extremes(self):
        for overlap in (0.0, 0.5, 1.0):
            for delta in np.linspace(0.0, TWO_PI, 33):
                value = biphoton_energy(float(delta), overlap, 1.0)
                assert -1e-12 <= value <= 4.0 + 1e-12
        assert abs(biphoton_energy(0.0, 1.0, 1.0) - 4.0) <= 1e-12
        assert abs(biphoton_energy(math.pi, 1.0, 1.0)) <= 1e-12
        assert abs(biphoton_energy(1.234, 0.0, 1.0) - 2.0) <= 1e-12

    def test_complex_overlap_uses_real_part_of_rotated_product(self):
        overlap = 0.5j
        value = biphoton_energy(math.pi / 2, overlap, 1.0)
        # I e^{i pi/2} = 0.5j * j = -0.5
        assert abs(value - 1.0) <= 1e-12

    def test_hbar_and_omega_scaling(self):
        assert abs(biphoton_energy(0.0, 1.0, 2.0, hbar=3.0) - 24.0) <= 1e-12

    def test_overlap_magnitude_capped(self):
        with pytest.raises(ValueError):
            biphoton_energy(0.0, 1.5, 1.0)
