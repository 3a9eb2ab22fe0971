"""Truncated ℓ=0 harmonic-oscillator Hamiltonians H_{N,K} = T + V_K."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import scipy.linalg
import structlog

from nucleus_vqe import APP_NAME, RadialPower
from nucleus_vqe.errors import ConfigError, ContractViolation, OutputError

log = structlog.get_logger(APP_NAME)

HBAR_C = 197.3269804  # MeV fm
NUCLEON_MASS = 938.272029  # MeV

SYMMETRY_TOLERANCE = 1e-12


def reduced_mass(
    target_mass_number: int,
    projectile_mass_number: int = 1,
    nucleon_mass: float = NUCLEON_MASS,
) -> float:
    """Reduced mass of a two-cluster system in MeV.

    Args:
        target_mass_number: Mass number A of the target.
        projectile_mass_number: Mass number a of the projectile (1 for a neutron).
        nucleon_mass: Nucleon mass in MeV.

    Returns:
        A·a/(A+a)·m_N.
    """
    a, b = target_mass_number, projectile_mass_number
    return a * b / (a + b) * nucleon_mass


def oscillator_length_sq(
    mu: float, hbar_omega: float, hbar_c: float = HBAR_C
) -> float:
    """Square of the oscillator length b_s = sqrt(ħ/μω), in fm².

    Args:
        mu: Reduced mass in MeV.
        hbar_omega: Oscillator energy in MeV.
        hbar_c: ħc in MeV fm.

    Returns:
        (ħc)²/(μ ħω).
    """
    return hbar_c**2 / (mu * hbar_omega)


def _kinetic_element(row: int, col: int, hbar_omega: float, ell: int = 0) -> float:
    if row == col:
        return hbar_omega / 2 * (2 * col + ell + 1.5)
    if row == col - 1:
        return -hbar_omega / 2 * math.sqrt(col * (col + ell + 0.5))
    if row == col + 1:
        return -hbar_omega / 2 * math.sqrt((col + 1) * (col + ell + 1.5))
    return 0.0


def _r2_element(row: int, col: int, ell: int = 0) -> float:
    # in units of b_s²; the off-diagonal sign is opposite to the kinetic one
    if row == col:
        return 2 * col + ell + 1.5
    if row == col - 1:
        return math.sqrt(col * (col + ell + 0.5))
    if row == col + 1:
        return math.sqrt((col + 1) * (col + ell + 1.5))
    return 0.0


def _tridiagonal(size: int, element) -> np.ndarray:  # type: ignore[no-untyped-def]
    matrix = np.zeros((size, size))
    for col in range(size):
        for row in range(max(col - 1, 0), min(col + 2, size)):
            matrix[row, col] = element(row, col)
    return matrix


def kinetic_matrix(size: int, hbar_omega: float) -> np.ndarray:
    """Tridiagonal kinetic energy matrix in MeV."""
    return _tridiagonal(
        size, lambda row, col: _kinetic_element(row, col, hbar_omega)
    )


def r2_matrix_dimensionless(size: int) -> np.ndarray:
    """Tridiagonal matrix of (r/b_s)²."""
    return _tridiagonal(size, _r2_element)


def r2k_matrix_dimensionless(size: int, k: int, padded: bool = True) -> np.ndarray:
    """Matrix of (r/b_s)^{2k} restricted to the first `size` oscillator states.

    Args:
        size: Number of retained basis states N.
        k: Power of r².
        padded: Build r² in N+k states before taking the power, which makes the
            retained N×N block exact. Otherwise the power is taken inside the
            truncated space.

    Returns:
        A symmetric matrix with bandwidth 2k+1.

    Raises:
        ConfigError: Negative power or empty basis.
    """
    if size < 1 or k < 0:
        raise ConfigError(f"Invalid r^2k request: size={size}, k={k}")
    if k == 0:
        return np.eye(size)
    extended = size + k if padded else size
    power = np.linalg.matrix_power(r2_matrix_dimensionless(extended), k)
    return power[:size, :size]


def exponential_coefficients(v0: float, c: float, order: int) -> list[float]:
    """Taylor coefficients V0 (-c)^k / k! of V0 exp(-c (r/b_s)²), k = 0..order."""
    return [v0 * (-c) ** k / math.factorial(k) for k in range(order + 1)]


@dataclass(frozen=True)
class NuclearSystem:
    """Two-cluster system in an oscillator basis."""

    target_mass_number: int
    hbar_omega: float
    projectile_mass_number: int = 1
    nucleon_mass: float = NUCLEON_MASS
    hbar_c: float = HBAR_C

    def __post_init__(self) -> None:
        if self.target_mass_number < 1 or self.projectile_mass_number < 1:
            raise ConfigError("Mass numbers must be at least 1")
        if self.hbar_omega <= 0 or self.nucleon_mass <= 0 or self.hbar_c <= 0:
            raise ConfigError("hbar_omega, nucleon_mass and hbar_c must be positive")

    @cached_property
    def reduced_mass(self) -> float:
        """Reduced mass μ in MeV."""
        # noqa: DAR201
        return reduced_mass(
            self.target_mass_number, self.projectile_mass_number, self.nucleon_mass
        )

    @cached_property
    def oscillator_length_sq(self) -> float:
        """b_s² in fm²."""
        # noqa: DAR201
        return oscillator_length_sq(self.reduced_mass, self.hbar_omega, self.hbar_c)


@dataclass(frozen=True)
class ExponentialPotential:
    """V0 exp(-c (r/b_s)²)."""

    v0: float
    c: float

    def __post_init__(self) -> None:
        if self.c < 0:
            raise ConfigError(
                f"Exponential range parameter must be non-negative: c={self.c}"
            )

    def coefficients(self, order: int, system: NuclearSystem) -> list[float]:
        """Dimensionless coefficients; b_s cancels for this form."""
        return exponential_coefficients(self.v0, self.c, order)


@dataclass(frozen=True)
class PolynomialPotential:
    """Σ_k v_k r^{2k} with v_k in MeV fm^{-2k}."""

    terms: Tuple[float, ...] = field(default_factory=tuple)

    def coefficients(self, order: int, system: NuclearSystem) -> list[float]:
        """Coefficients v_k b_s^{2k} multiplying the dimensionless r^{2k} matrices.

        Raises:
            ConfigError: Fewer than order+1 coefficients are available.
        """
        if len(self.terms) < order + 1:
            raise ConfigError(
                f"Polynomial potential has {len(self.terms)} coefficients, "
                f"truncation order {order} needs {order + 1}"
            )
        b2 = system.oscillator_length_sq
        return [v * b2**k for k, v in enumerate(self.terms[: order + 1])]


PotentialSpec = Union[ExponentialPotential, PolynomialPotential]


@dataclass(frozen=True)
class HamiltonianSpec:
    """Everything needed to assemble H_{N,K}."""

    system: NuclearSystem
    potential: PotentialSpec
    basis_size: int
    truncation: int
    radial_power: RadialPower = RadialPower.padded

    def __post_init__(self) -> None:
        if self.basis_size < 2:
            raise ConfigError(f"Basis size must be at least 2: N={self.basis_size}")
        if self.truncation < 0:
            raise ConfigError(f"Truncation order must be >= 0: K={self.truncation}")

    def with_truncation(self, truncation: int) -> HamiltonianSpec:
        """Copy of this spec with another K."""
        return replace(self, truncation=truncation)


def assemble(spec: HamiltonianSpec) -> np.ndarray:
    """Assemble H_{N,K} = T + Σ_k v_k <r^{2k}> in MeV.

    Args:
        spec: The Hamiltonian specification.

    Returns:
        The real symmetric N×N matrix; entries beyond the band are exactly zero.
    """
    size = spec.basis_size
    padded = spec.radial_power is RadialPower.padded
    hamiltonian = kinetic_matrix(size, spec.system.hbar_omega)
    for k, coefficient in enumerate(
        spec.potential.coefficients(spec.truncation, spec.system)
    ):
        if coefficient:
            hamiltonian += coefficient * r2k_matrix_dimensionless(size, k, padded)
    log.debug(
        "Assembled Hamiltonian",
        basis_size=size,
        truncation=spec.truncation,
        radial_power=spec.radial_power.value,
    )
    return (hamiltonian + hamiltonian.T) / 2


def bandwidth(matrix: np.ndarray) -> int:
    """Largest |i - j| with a nonzero entry."""
    rows, cols = np.nonzero(matrix)
    return int(np.max(np.abs(rows - cols))) if rows.size else 0


def check_symmetric(matrix: np.ndarray) -> None:
    """Raise ContractViolation unless `matrix` is square and symmetric."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ContractViolation(f"Expected a square matrix, got shape {matrix.shape}")
    scale = max(float(np.max(np.abs(matrix))), 1.0) if matrix.size else 1.0
    if np.max(np.abs(matrix - matrix.T), initial=0.0) > SYMMETRY_TOLERANCE * scale:
        raise ContractViolation("Matrix is not symmetric")


def lowest_eigenpair(matrix: np.ndarray) -> tuple[float, np.ndarray]:
    """Lowest eigenvalue and its normalized eigenvector.

    Uses LAPACK's symmetric driver (Householder tridiagonalization followed by
    implicit QL/QR).

    Args:
        matrix: Real symmetric matrix.

    Returns:
        The smallest eigenvalue and a unit eigenvector with a positive largest
        component.
    """
    check_symmetric(matrix)
    values, vectors = scipy.linalg.eigh(np.asarray(matrix, dtype=float), driver="ev")
    vector = vectors[:, 0]
    if vector[np.argmax(np.abs(vector))] < 0:
        vector = -vector
    return float(values[0]), vector


def lowest_eigenvalue(matrix: np.ndarray) -> float:
    """Smallest eigenvalue of a real symmetric matrix."""
    return lowest_eigenpair(matrix)[0]


def write_matrix_csv(matrix: np.ndarray, path: Path) -> None:
    """Write a matrix row-major at full precision.

    Raises:
        OutputError: The file could not be written.
    """
    try:
        with Path(path).open("w", newline="") as handle:
            writer = csv.writer(handle)
            for row in np.asarray(matrix):
                writer.writerow(repr(float(value)) for value in row)
    except OSError as ex:
        raise OutputError(f"Unable to write matrix to {path}: {ex}") from ex
