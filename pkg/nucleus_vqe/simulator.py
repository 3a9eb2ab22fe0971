"""Statevector and density-matrix simulation with grouped measurements.

Amplitude tensors carry one axis per qubit, qubit 0 first; density matrices
carry the ket axes followed by the bra axes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, List, Optional, Sequence, Union

import numpy as np
import structlog

from nucleus_vqe import APP_NAME
from nucleus_vqe.circuits import Circuit, Gate, gate_matrix
from nucleus_vqe.errors import ConfigError, ContractViolation
from nucleus_vqe.pauli import PauliString, PauliSum, dense_matrix, pauli_action

if TYPE_CHECKING:
    from nucleus_vqe.grouping import CommutingGroup

log = structlog.get_logger(APP_NAME)

REAL_TOLERANCE = 1e-10

Seed = Union[int, np.random.Generator, None]


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing noise after every gate plus symmetric readout flips."""

    p1: float = 0.001
    p2: float = 0.01
    readout_eps: float = 0.02

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "readout_eps"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"Noise probability {name} must lie in [0, 1]")

    @classmethod
    def noiseless(cls) -> NoiseModel:
        """All probabilities zero."""
        return cls(0.0, 0.0, 0.0)


def _apply(tensor: np.ndarray, matrix: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    operator = matrix.reshape((2,) * (2 * k))
    moved = np.tensordot(operator, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(moved, list(range(k)), list(axes))


@lru_cache(maxsize=None)
def depolarizing_kraus(arity: int, probability: float) -> tuple[np.ndarray, ...]:
    """Kraus operators of the depolarizing channel on `arity` qubits.

    The identity carries weight 1 - (4^k - 1)p/4^k and each other Pauli
    string p/4^k, so p=1 maps every state to the maximally mixed one.
    """
    weight = probability / 4**arity
    operators = []
    for letters in itertools.product("IXYZ", repeat=arity):
        label = "".join(letters)
        scale = 1 - (4**arity - 1) * weight if set(label) == {"I"} else weight
        if scale > 0:
            operators.append(np.sqrt(scale) * dense_matrix(PauliString(label)))
    return tuple(operators)


def zero_state(n: int) -> np.ndarray:
    """|0…0> as an amplitude vector."""
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    return state


def apply_gates(
    state: np.ndarray, gates: Sequence[Gate], n: int, params: Sequence[float] = ()
) -> np.ndarray:
    """Apply gates to a statevector (or a batch of column vectors)."""
    batch = state.shape[1:]
    tensor = state.reshape((2,) * n + batch)
    for gate in gates:
        tensor = _apply(tensor, gate_matrix(gate, params), gate.qubits)
    return tensor.reshape((2**n,) + batch)


def run(circuit: Circuit, params: Sequence[float] = ()) -> np.ndarray:
    """Statevector produced from |0…0>."""
    params = circuit.check_parameters(params)
    return apply_gates(zero_state(circuit.n_qubits), circuit.gates, circuit.n_qubits, params)


def unitary(gates: Sequence[Gate], n: int, params: Sequence[float] = ()) -> np.ndarray:
    """Dense unitary of a gate list."""
    return apply_gates(np.eye(2**n, dtype=complex), gates, n, params)


def _apply_channel(
    tensor: np.ndarray, kraus: Sequence[np.ndarray], qubits: Sequence[int], n: int
) -> np.ndarray:
    ket = list(qubits)
    bra = [q + n for q in qubits]
    total = np.zeros_like(tensor)
    for operator in kraus:
        total += _apply(_apply(tensor, operator, ket), operator.conj(), bra)
    return total


def evolve_density(
    rho: np.ndarray,
    gates: Sequence[Gate],
    n: int,
    params: Sequence[float] = (),
    noise: Optional[NoiseModel] = None,
) -> np.ndarray:
    """Apply gates to a density matrix, each followed by depolarizing noise."""
    tensor = rho.reshape((2,) * (2 * n))
    for gate in gates:
        matrix = gate_matrix(gate, params)
        tensor = _apply(tensor, matrix, gate.qubits)
        tensor = _apply(tensor, matrix.conj(), [q + n for q in gate.qubits])
        if noise is not None:
            probability = noise.p1 if gate.kind.arity == 1 else noise.p2
            if probability > 0:
                kraus = depolarizing_kraus(gate.kind.arity, probability)
                tensor = _apply_channel(tensor, kraus, gate.qubits, n)
    return tensor.reshape(2**n, 2**n)


def run_noisy(
    circuit: Circuit, params: Sequence[float] = (), noise: Optional[NoiseModel] = None
) -> np.ndarray:
    """Density matrix produced from |0…0><0…0| under `noise`."""
    params = circuit.check_parameters(params)
    n = circuit.n_qubits
    rho = np.zeros((2**n, 2**n), dtype=complex)
    rho[0, 0] = 1.0
    return evolve_density(rho, circuit.gates, n, params, noise or NoiseModel())


def expectation_exact(state: np.ndarray, hamiltonian: PauliSum) -> float:
    """<ψ|H|ψ> for a statevector or Tr[Hρ] for a density matrix.

    Raises:
        ConfigError: Dimension mismatch.
        ContractViolation: The value is not real.
    """
    state = np.asarray(state)
    dim = 2**hamiltonian.n
    if state.shape not in ((dim,), (dim, dim)):
        raise ConfigError(
            f"State of shape {state.shape} does not match {hamiltonian.n} qubits"
        )
    columns = np.arange(dim)
    value = 0.0 + 0.0j
    for pauli, coeff in hamiltonian:
        targets, phase = pauli_action(pauli)
        if state.ndim == 1:
            value += coeff * np.vdot(state[targets], phase * state)
        else:
            value += coeff * np.sum(phase * state[columns, targets])
    if abs(value.imag) > REAL_TOLERANCE * max(1.0, abs(value.real)):
        raise ContractViolation(f"Expectation value is not real: {value}")
    return float(value.real)


def outcome_probabilities(
    state: np.ndarray, rotation: Circuit, noise: Optional[NoiseModel] = None
) -> np.ndarray:
    """Computational-basis distribution after the measurement rotation."""
    n = rotation.n_qubits
    if state.ndim == 1:
        probabilities = np.abs(apply_gates(state, rotation.gates, n)) ** 2
    else:
        rotated = evolve_density(state, rotation.gates, n, noise=noise)
        probabilities = np.real(np.diag(rotated))
    probabilities = np.clip(probabilities, 0.0, None)
    return probabilities / probabilities.sum()


def flip_readout(
    outcomes: np.ndarray, n: int, eps: float, rng: np.random.Generator
) -> np.ndarray:
    """Flip every sampled bit independently with probability eps."""
    if eps <= 0:
        return outcomes
    flips = rng.random((outcomes.size, n)) < eps
    weights = 1 << np.arange(n - 1, -1, -1)
    return outcomes ^ (flips @ weights)


def check_partition(hamiltonian: PauliSum, groups: Sequence[CommutingGroup]) -> None:
    """Raise ContractViolation unless `groups` split `hamiltonian` exactly."""
    seen: List[PauliString] = [m for group in groups for m in group.members]
    if len(seen) != len(set(seen)) or set(seen) != set(hamiltonian.terms):
        raise ContractViolation("Commuting groups do not partition the Hamiltonian")


def expectation_grouped(
    state: np.ndarray,
    groups: Sequence[CommutingGroup],
    noise: Optional[NoiseModel] = None,
) -> float:
    """Grouped estimator with exact outcome distributions (infinite shots)."""
    total = 0.0
    for group in groups:
        probabilities = outcome_probabilities(state, group.rotation, noise)
        if noise is not None and noise.readout_eps > 0:
            probabilities = readout_distribution(probabilities, group.n_qubits, noise.readout_eps)
        total += float(np.dot(group.weighted_signs, probabilities))
    return total


def readout_distribution(probabilities: np.ndarray, n: int, eps: float) -> np.ndarray:
    """Outcome distribution after independent symmetric bit flips."""
    tensor = probabilities.reshape((2,) * n)
    flip = np.array([[1 - eps, eps], [eps, 1 - eps]])
    for q in range(n):
        tensor = _apply(tensor, flip, [q])
    return tensor.reshape(-1)


def expectation_shots(
    state: np.ndarray,
    groups: Sequence[CommutingGroup],
    shots_per_group: int,
    seed: Seed = None,
    noise: Optional[NoiseModel] = None,
    hamiltonian: Optional[PauliSum] = None,
) -> float:
    """Sampled grouped estimator Σ coeff · (sign-weighted outcome frequency).

    Args:
        state: Statevector, or density matrix in noisy mode.
        groups: Commuting groups covering the Hamiltonian.
        shots_per_group: Samples drawn for every group.
        seed: Seed or generator for sampling and readout flips.
        noise: Gate noise on the rotations and readout flips (density matrices).
        hamiltonian: When given, the groups are checked to partition it.

    Returns:
        The energy estimate.

    Raises:
        ConfigError: Non-positive shot count.
    """
    if shots_per_group < 1:
        raise ConfigError(f"shots_per_group must be positive, got {shots_per_group}")
    if hamiltonian is not None:
        check_partition(hamiltonian, groups)
    rng = np.random.default_rng(seed)
    total = 0.0
    for group in groups:
        if group.is_identity:
            total += float(group.weighted_signs[0])
            continue
        probabilities = outcome_probabilities(state, group.rotation, noise)
        outcomes = rng.choice(probabilities.size, size=shots_per_group, p=probabilities)
        if noise is not None:
            outcomes = flip_readout(outcomes, group.n_qubits, noise.readout_eps, rng)
        frequencies = np.bincount(outcomes, minlength=probabilities.size) / shots_per_group
        total += float(np.dot(group.weighted_signs, frequencies))
    return total
