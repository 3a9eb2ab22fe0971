"""Named neutron-nucleus systems.

The n+C exponential parameters are given relative to the oscillator energy
(V0/ħω) and as a range (c^{-1/2}); the n+α local potentials are polynomial
fits Σ v_k r^{2k} with v_k in MeV fm^{-2k}.
"""

from __future__ import annotations

from typing import Callable, Dict, Tuple

from nucleus_vqe import RadialPower
from nucleus_vqe.errors import ConfigError
from nucleus_vqe.hamiltonian import (
    ExponentialPotential,
    HamiltonianSpec,
    NuclearSystem,
    PolynomialPotential,
)

# A -> (V0/ħω, c^{-1/2})
NEUTRON_CARBON: Dict[int, Tuple[float, float]] = {
    10: (-0.650, 5.43),
    12: (-0.283, 5.35),
    14: (-0.242, 5.0),
    16: (-0.175, 4.7),
    18: (-0.192, 4.6),
}

NEUTRON_ALPHA: Dict[float, Tuple[float, ...]] = {
    12.0: (
        -57.207,
        6.653,
        0.086,
        -0.013,
        -0.001,
        -1.8e-5,
        2.3e-6,
        2.1e-7,
        5.7e-9,
        -3.6e-10,
        -4.3e-11,
        -1.5e-12,
        5.0e-14,
    ),
    16.0: (
        -59.571,
        6.448,
        0.133,
        -0.007,
        -0.001,
        -4.8e-5,
        4.1e-7,
        2.3e-7,
        1.5e-8,
        3.0e-10,
        -3.6e-11,
        -3.8e-12,
        -1.5e-13,
    ),
}

WORKED_EXAMPLE_V0 = -2.79
WORKED_EXAMPLE_C = 0.05
WORKED_EXAMPLE_HBAR_OMEGA = 15.95


def hbar_omega_rule(target_mass_number: int) -> float:
    """Oscillator energy 41/(A+1)^{1/3} MeV."""
    return 41.0 / (target_mass_number + 1) ** (1 / 3)


def neutron_carbon(
    target_mass_number: int,
    basis_size: int,
    truncation: int,
    radial_power: RadialPower = RadialPower.truncated,
) -> HamiltonianSpec:
    """Neutron on a carbon isotope with an exponential potential.

    Args:
        target_mass_number: Carbon mass number, one of 10, 12, 14, 16, 18.
        basis_size: Number of oscillator states N.
        truncation: Potential truncation order K.
        radial_power: How r^{2k} matrices are formed.

    Returns:
        The Hamiltonian specification.

    Raises:
        ConfigError: Unknown isotope.
    """
    try:
        v0_ratio, range_ = NEUTRON_CARBON[target_mass_number]
    except KeyError:
        raise ConfigError(
            f"No n+C parameters for A={target_mass_number}; "
            f"known: {sorted(NEUTRON_CARBON)}"
        ) from None
    hbar_omega = hbar_omega_rule(target_mass_number)
    return HamiltonianSpec(
        system=NuclearSystem(target_mass_number=target_mass_number, hbar_omega=hbar_omega),
        potential=ExponentialPotential(v0=v0_ratio * hbar_omega, c=range_**-2),
        basis_size=basis_size,
        truncation=truncation,
        radial_power=radial_power,
    )


def neutron_alpha(
    hbar_omega: float,
    basis_size: int,
    truncation: int,
    radial_power: RadialPower = RadialPower.truncated,
) -> HamiltonianSpec:
    """Neutron on ⁴He with the local polynomial potential for `hbar_omega`.

    Raises:
        ConfigError: No potential is tabulated for this oscillator energy.
    """
    try:
        terms = NEUTRON_ALPHA[float(hbar_omega)]
    except KeyError:
        raise ConfigError(
            f"No n+alpha potential for hbar_omega={hbar_omega}; "
            f"known: {sorted(NEUTRON_ALPHA)}"
        ) from None
    return HamiltonianSpec(
        system=NuclearSystem(target_mass_number=4, hbar_omega=float(hbar_omega)),
        potential=PolynomialPotential(terms=terms),
        basis_size=basis_size,
        truncation=truncation,
        radial_power=radial_power,
    )


def worked_example(
    basis_size: int = 4,
    truncation: int = 2,
    radial_power: RadialPower = RadialPower.padded,
) -> HamiltonianSpec:
    """The rounded n+¹⁶C system V0=-2.79 MeV, c=0.05, ħω=15.95 MeV."""
    return HamiltonianSpec(
        system=NuclearSystem(target_mass_number=16, hbar_omega=WORKED_EXAMPLE_HBAR_OMEGA),
        potential=ExponentialPotential(v0=WORKED_EXAMPLE_V0, c=WORKED_EXAMPLE_C),
        basis_size=basis_size,
        truncation=truncation,
        radial_power=radial_power,
    )


def _carbon(mass: int) -> Callable[[int, int, RadialPower], HamiltonianSpec]:
    return lambda n, k, mode: neutron_carbon(mass, n, k, mode)


def _alpha(hbar_omega: float) -> Callable[[int, int, RadialPower], HamiltonianSpec]:
    return lambda n, k, mode: neutron_alpha(hbar_omega, n, k, mode)


PRESETS: Dict[str, Callable[[int, int, RadialPower], HamiltonianSpec]] = {
    **{f"n+{mass}C": _carbon(mass) for mass in NEUTRON_CARBON},
    "n+alpha@12": _alpha(12.0),
    "n+alpha@16": _alpha(16.0),
    "worked-example": lambda n, k, mode: worked_example(n, k, mode),
}


def preset(
    name: str,
    basis_size: int,
    truncation: int,
    radial_power: RadialPower | None = None,
) -> HamiltonianSpec:
    """Look up a named system.

    Args:
        name: One of the keys of `PRESETS`.
        basis_size: Number of oscillator states N.
        truncation: Potential truncation order K.
        radial_power: Override the preset's radial power mode.

    Returns:
        The Hamiltonian specification.

    Raises:
        ConfigError: Unknown preset name.
    """
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ConfigError(f"Unknown preset '{name}'; known: {sorted(PRESETS)}") from None
    if radial_power is None:
        radial_power = (
            RadialPower.padded if name == "worked-example" else RadialPower.truncated
        )
    return factory(basis_size, truncation, radial_power)
