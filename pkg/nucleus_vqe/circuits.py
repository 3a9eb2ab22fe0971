"""Gate-level circuit descriptions: ansatz families and measurement rotations."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from nucleus_vqe.errors import ConfigError


class GateKind(str, Enum):
    """Enum of supported gates."""

    ry = "ry"
    cry = "cry"
    cnot = "cnot"
    h = "h"
    sdg = "sdg"
    x = "x"

    @property
    def arity(self) -> int:
        """Number of qubits the gate acts on."""
        # noqa: DAR201
        return 2 if self in (GateKind.cry, GateKind.cnot) else 1

    @property
    def is_rotation(self) -> bool:
        """Whether the gate takes an angle."""
        # noqa: DAR201
        return self in (GateKind.ry, GateKind.cry)


@dataclass(frozen=True)
class Gate:
    """A gate on `qubits` (control first for two-qubit gates).

    Rotation angles are either fixed (`angle`) or `scale` times the
    parameter in slot `parameter`.
    """

    kind: GateKind
    qubits: Tuple[int, ...]
    parameter: Optional[int] = None
    scale: float = 1.0
    angle: float = 0.0

    def __post_init__(self) -> None:
        if len(self.qubits) != self.kind.arity or len(set(self.qubits)) != len(self.qubits):
            raise ConfigError(f"{self.kind.value} gate cannot act on qubits {self.qubits}")

    def resolved_angle(self, params: Sequence[float] = ()) -> float:
        """The rotation angle for a parameter vector."""
        if self.parameter is None:
            return self.angle
        return self.scale * float(params[self.parameter])

    def to_json(self) -> Dict[str, Any]:
        """JSON-ready representation."""
        data: Dict[str, Any] = {"gate": self.kind.value, "qubits": list(self.qubits)}
        if self.parameter is not None:
            data.update(parameter=self.parameter, scale=self.scale)
        elif self.kind.is_rotation:
            data["angle"] = self.angle
        return data


def ry_matrix(angle: float) -> np.ndarray:
    """Ry(φ) = exp(-iφY/2), a real rotation."""
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]])


_FIXED = {
    GateKind.h: np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    GateKind.sdg: np.array([[1, 0], [0, -1j]]),
    GateKind.x: np.array([[0, 1], [1, 0]]),
    GateKind.cnot: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    ),
}


def gate_matrix(gate: Gate, params: Sequence[float] = ()) -> np.ndarray:
    """Matrix of a gate, the control as the more significant qubit."""
    if gate.kind is GateKind.ry:
        return ry_matrix(gate.resolved_angle(params))
    if gate.kind is GateKind.cry:
        matrix = np.eye(4)
        matrix[2:, 2:] = ry_matrix(gate.resolved_angle(params))
        return matrix
    return _FIXED[gate.kind]


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list on `n_qubits` qubits."""

    n_qubits: int
    gates: Tuple[Gate, ...] = field(default_factory=tuple)
    n_parameters: int = 0

    def __post_init__(self) -> None:
        for gate in self.gates:
            if max(gate.qubits) >= self.n_qubits or min(gate.qubits) < 0:
                raise ConfigError(
                    f"Gate on qubits {gate.qubits} outside a {self.n_qubits}-qubit circuit"
                )
            if gate.parameter is not None and not 0 <= gate.parameter < self.n_parameters:
                raise ConfigError(f"Gate parameter slot {gate.parameter} out of range")

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def one_qubit_gate_count(self) -> int:
        """Number of one-qubit gates."""
        # noqa: DAR201
        return sum(1 for gate in self.gates if gate.kind.arity == 1)

    @property
    def two_qubit_gate_count(self) -> int:
        """Number of two-qubit gates."""
        # noqa: DAR201
        return sum(1 for gate in self.gates if gate.kind.arity == 2)

    def check_parameters(self, params: Sequence[float]) -> np.ndarray:
        """Parameters as an array of the right length.

        Raises:
            ConfigError: Wrong parameter count.
        """
        params = np.asarray(params, dtype=float)
        if params.shape != (self.n_parameters,):
            raise ConfigError(
                f"Circuit takes {self.n_parameters} parameters, got {params.shape}"
            )
        return params

    def then(self, other: Circuit) -> Circuit:
        """This circuit followed by a parameter-free circuit."""
        if other.n_parameters:
            raise ConfigError("Only parameter-free circuits can be appended")
        return Circuit(self.n_qubits, self.gates + other.gates, self.n_parameters)

    def to_json(self) -> Dict[str, Any]:
        """JSON-ready gate list."""
        return {
            "n_qubits": self.n_qubits,
            "n_parameters": self.n_parameters,
            "gates": [gate.to_json() for gate in self.gates],
        }


def onehot_ansatz(size: int) -> Circuit:
    """Recursive one-hot ansatz on N qubits with N-1 angles.

    With all angles zero the output is the state with qubit N-1 set. Each
    further angle moves the remaining amplitude one qubit to the left, so
    e_{N-1} gets cos θ_1, e_{N-j} gets sin θ_1 ⋯ sin θ_{j-1} cos θ_j and e_0
    the product of all sines.

    Args:
        size: Number of one-hot qubits N.

    Returns:
        2 one-qubit and 2N-3 two-qubit gates.

    Raises:
        ConfigError: N < 2.
    """
    if size < 2:
        raise ConfigError(f"One-hot ansatz needs N >= 2, got {size}")
    gates = [
        Gate(GateKind.ry, (size - 2,), parameter=0, scale=2.0),
        Gate(GateKind.x, (size - 1,)),
        Gate(GateKind.cnot, (size - 2, size - 1)),
    ]
    for i in range(2, size):
        control, target = size - i, size - i - 1
        gates.append(Gate(GateKind.cry, (control, target), parameter=i - 1, scale=2.0))
        gates.append(Gate(GateKind.cnot, (target, control)))
    return Circuit(size, tuple(gates), size - 1)


def layered_ansatz(n: int, layers: int) -> Circuit:
    """L layers of Ry on every qubit followed by a CNOT chain i -> i+1.

    Raises:
        ConfigError: n < 1 or L < 1.
    """
    if n < 1 or layers < 1:
        raise ConfigError(f"Layered ansatz needs n >= 1 and L >= 1, got n={n}, L={layers}")
    gates = []
    for layer in range(layers):
        gates.extend(
            Gate(GateKind.ry, (q,), parameter=layer * n + q) for q in range(n)
        )
        gates.extend(Gate(GateKind.cnot, (q, q + 1)) for q in range(n - 1))
    return Circuit(n, tuple(gates), n * layers)


def fixed_circuit(n: int, gates: Sequence[Gate]) -> Circuit:
    """Parameter-free circuit, used for measurement rotations."""
    return Circuit(n, tuple(gates))
