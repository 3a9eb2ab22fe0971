from __future__ import annotations

import math

import numpy as np
import pytest
from conftest import ALPHA_TOLERANCE

from nucleus_vqe import RadialPower
from nucleus_vqe.errors import ConfigError, ContractViolation, OutputError
from nucleus_vqe.hamiltonian import (
    ExponentialPotential,
    HamiltonianSpec,
    NuclearSystem,
    PolynomialPotential,
    assemble,
    bandwidth,
    check_symmetric,
    exponential_coefficients,
    kinetic_matrix,
    lowest_eigenpair,
    lowest_eigenvalue,
    oscillator_length_sq,
    r2_matrix_dimensionless,
    r2k_matrix_dimensionless,
    reduced_mass,
    write_matrix_csv,
)
from nucleus_vqe.systems import (
    PRESETS,
    hbar_omega_rule,
    neutron_alpha,
    neutron_carbon,
    preset,
    worked_example,
)

WORKED_ENTRIES = {
    (0, 0): 9.34733940,
    (1, 1): 25.50244923,
    (2, 2): 41.62324815,
    (3, 3): 57.76120253,
    (0, 1): -9.62729427,
    (1, 2): -17.60252796,
    (2, 3): -25.54554644,
    (0, 2): -0.00783036,
    (1, 3): -0.02071717,
    (0, 3): 0.0,
}


class TestMatrixElements:
    def test_reduced_mass_of_neutron_alpha(self):
        assert reduced_mass(4) == pytest.approx(4 / 5 * 938.272029)

    def test_oscillator_length(self):
        assert oscillator_length_sq(750.6176, 12.0) == pytest.approx(4.3229, abs=1e-4)

    def test_kinetic_single_state(self):
        np.testing.assert_allclose(kinetic_matrix(1, 2.0), [[1.5]])

    def test_kinetic_tridiagonal(self):
        expected = np.array(
            [
                [1.5, -math.sqrt(1.5), 0.0],
                [-math.sqrt(1.5), 3.5, -math.sqrt(5.0)],
                [0.0, -math.sqrt(5.0), 5.5],
            ]
        )
        np.testing.assert_allclose(kinetic_matrix(3, 2.0), expected)

    def test_r2_has_positive_off_diagonal(self):
        r2 = r2_matrix_dimensionless(3)
        assert r2[0, 1] == r2[1, 0] == pytest.approx(math.sqrt(1.5))
        np.testing.assert_allclose(np.diag(r2), [1.5, 3.5, 5.5])

    @pytest.mark.parametrize("k", range(5))
    def test_r2k_bandwidth(self, k: int):
        assert bandwidth(r2k_matrix_dimensionless(10, k)) == min(k, 9)

    def test_padded_power_is_exact_block(self):
        big = np.linalg.matrix_power(r2_matrix_dimensionless(12), 3)
        np.testing.assert_allclose(r2k_matrix_dimensionless(6, 3), big[:6, :6])

    def test_truncated_power_differs_in_last_entry(self):
        padded = r2k_matrix_dimensionless(4, 2, padded=True)
        truncated = r2k_matrix_dimensionless(4, 2, padded=False)
        assert padded[3, 3] != pytest.approx(truncated[3, 3])
        np.testing.assert_allclose(padded[:3, :3], truncated[:3, :3])

    def test_r2k_rejects_negative_power(self):
        with pytest.raises(ConfigError):
            r2k_matrix_dimensionless(4, -1)

    def test_exponential_coefficients(self):
        np.testing.assert_allclose(
            exponential_coefficients(-2.79, 0.05, 2), [-2.79, 0.1395, -0.0034875]
        )


class TestSpecs:
    def test_basis_size_must_be_at_least_two(self):
        with pytest.raises(ConfigError):
            worked_example(basis_size=1)

    def test_negative_truncation(self):
        with pytest.raises(ConfigError):
            worked_example(truncation=-1)

    def test_negative_range(self):
        with pytest.raises(ConfigError):
            ExponentialPotential(v0=-1.0, c=-0.1)

    def test_zero_range_is_allowed(self):
        assert ExponentialPotential(v0=-1.0, c=0.0).c == 0.0

    def test_negative_range_message(self):
        with pytest.raises(ConfigError, match="non-negative"):
            ExponentialPotential(v0=-1.0, c=-0.1)

    def test_polynomial_needs_enough_terms(self):
        spec = HamiltonianSpec(
            system=NuclearSystem(target_mass_number=4, hbar_omega=12.0),
            potential=PolynomialPotential(terms=(-50.0, 5.0)),
            basis_size=4,
            truncation=3,
        )
        with pytest.raises(ConfigError):
            assemble(spec)

    def test_with_truncation_keeps_everything_else(self):
        spec = preset("n+10C", 8, 3)
        lower = spec.with_truncation(1)
        assert lower.truncation == 1
        assert lower.basis_size == 8 and lower.radial_power is spec.radial_power

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="Unknown preset"):
            preset("n+11C", 4, 2)

    def test_unknown_isotope(self):
        with pytest.raises(ConfigError):
            neutron_carbon(11, 4, 2)

    def test_unknown_alpha_hbar_omega(self):
        with pytest.raises(ConfigError):
            neutron_alpha(14.0, 4, 2)

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_every_preset_assembles(self, name: str):
        matrix = assemble(preset(name, 8, 2))
        check_symmetric(matrix)
        assert bandwidth(matrix) == 2

    def test_hbar_omega_rule(self):
        assert hbar_omega_rule(16) == pytest.approx(15.94535587, abs=1e-8)

    def test_carbon_parameters(self):
        spec = neutron_carbon(16, 4, 2)
        assert spec.potential.v0 == pytest.approx(-2.79043728, abs=1e-8)
        assert spec.potential.c == pytest.approx(0.04526935, abs=1e-8)
        assert spec.radial_power is RadialPower.truncated


class TestAssemble:
    def test_worked_example_entries(self, worked_hamiltonian: np.ndarray):
        for (row, col), value in WORKED_ENTRIES.items():
            assert worked_hamiltonian[row, col] == pytest.approx(value, abs=1e-6)
            assert worked_hamiltonian[col, row] == worked_hamiltonian[row, col]

    @pytest.mark.parametrize("truncation", range(6))
    def test_band_follows_truncation(self, truncation: int):
        matrix = assemble(preset("n+12C", 10, truncation))
        assert bandwidth(matrix) == max(truncation, 1)

    def test_zero_truncation_is_kinetic_plus_constant(self):
        spec = preset("n+10C", 5, 0)
        expected = kinetic_matrix(5, spec.system.hbar_omega) + spec.potential.v0 * np.eye(5)
        np.testing.assert_allclose(assemble(spec), expected)

    def test_rounded_worked_example(self):
        matrix = assemble(worked_example())
        assert matrix[0, 0] == pytest.approx(
            15.95 * 0.75 - 2.79 + 2.79 * 0.05 * 1.5 - 2.79 * 0.05**2 / 2 * 3.75
        )


class TestEigensolve:
    @pytest.mark.parametrize(
        ("name", "energy"),
        (("n+10C", -6.5364), ("n+12C", -1.18495), ("n+14C", -0.49963)),
    )
    def test_carbon_energies_n8(self, name: str, energy: float):
        assert lowest_eigenvalue(assemble(preset(name, 8, 3))) == pytest.approx(
            energy, abs=1e-4
        )

    @pytest.mark.parametrize(
        ("name", "energy"),
        (("n+10C", -6.7346), ("n+12C", -1.70020), ("n+14C", -1.0070)),
    )
    def test_carbon_energies_n16(self, name: str, energy: float):
        spec = preset(name, 16, 3, RadialPower.padded)
        assert lowest_eigenvalue(assemble(spec)) == pytest.approx(energy, abs=1e-4)

    @pytest.mark.parametrize(
        ("hbar_omega", "truncation", "energy"),
        ((12.0, 1, -17.7986), (12.0, 2, -16.6190), (16.0, 1, -20.7735), (16.0, 2, -18.9470)),
    )
    def test_alpha_energies(self, hbar_omega: float, truncation: int, energy: float):
        value = lowest_eigenvalue(assemble(neutron_alpha(hbar_omega, 8, truncation)))
        assert value == pytest.approx(energy, abs=ALPHA_TOLERANCE)

    def test_alpha_converged_in_basis_size(self):
        small = lowest_eigenvalue(assemble(neutron_alpha(12.0, 8, 1)))
        large = lowest_eigenvalue(assemble(neutron_alpha(12.0, 16, 1)))
        assert large == pytest.approx(small, abs=5e-4)

    @pytest.mark.parametrize("name", ("n+10C", "n+12C", "n+14C"))
    def test_larger_basis_lowers_energy(self, name: str):
        small = lowest_eigenvalue(assemble(preset(name, 8, 3, RadialPower.padded)))
        large = lowest_eigenvalue(assemble(preset(name, 16, 3, RadialPower.padded)))
        assert large <= small + 1e-12

    def test_eigenpair(self, worked_hamiltonian: np.ndarray):
        value, vector = lowest_eigenpair(worked_hamiltonian)
        np.testing.assert_allclose(worked_hamiltonian @ vector, value * vector, atol=1e-10)
        assert np.linalg.norm(vector) == pytest.approx(1.0)
        assert np.all(vector > 0)

    def test_diagonal_matrix(self):
        assert lowest_eigenvalue(np.diag([3.0, -1.0, 2.0])) == -1.0

    def test_asymmetric_matrix(self):
        with pytest.raises(ContractViolation):
            lowest_eigenvalue(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_non_square_matrix(self):
        with pytest.raises(ContractViolation):
            check_symmetric(np.zeros((2, 3)))


def test_write_matrix_csv(tmp_path, worked_hamiltonian: np.ndarray):
    path = tmp_path / "h.csv"
    write_matrix_csv(worked_hamiltonian, path)
    rows = [[float(value) for value in line.split(",")] for line in path.read_text().splitlines()]
    np.testing.assert_array_equal(np.array(rows), worked_hamiltonian)


def test_write_matrix_csv_to_missing_directory(tmp_path, worked_hamiltonian: np.ndarray):
    with pytest.raises(OutputError):
        write_matrix_csv(worked_hamiltonian, tmp_path / "missing" / "h.csv")
