"""Commuting groups of Pauli terms and their measurement rotations.

Qubit-wise commuting (QC) groups are measured after single-qubit basis
changes. Distance-grouped commuting (DGC) groups collect every term with the
same X/Y support f and are measured after the inverse GHZ preparation on f.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from nucleus_vqe import APP_NAME, EncodingKind, Scheme
from nucleus_vqe.circuits import Circuit, Gate, GateKind, fixed_circuit
from nucleus_vqe.encodings import band_reach, mask_pattern, reduced_qubits
from nucleus_vqe.errors import ConfigError, ContractViolation
from nucleus_vqe.pauli import (
    PauliString,
    PauliSum,
    commutes,
    dense_matrix,
    popcount,
    qubitwise_commutes,
)
from nucleus_vqe.simulator import unitary

log = structlog.get_logger(APP_NAME)

DIAGONAL_TOLERANCE = 1e-9

MeasurementCircuit = Circuit


@dataclass(frozen=True)
class CommutingGroup:
    """Mutually measurable Pauli terms with their basis rotation."""

    scheme: Scheme
    n_qubits: int
    members: Tuple[PauliString, ...]
    coefficients: Tuple[float, ...]
    rotation: MeasurementCircuit
    flip_pattern: Tuple[int, ...] = ()
    structural: bool = True

    def __len__(self) -> int:
        return len(self.members)

    @property
    def is_identity(self) -> bool:
        """Whether the group holds only the identity string."""
        # noqa: DAR201
        return all(set(str(m)) == {"I"} for m in self.members)

    @property
    def two_qubit_gate_count(self) -> int:
        """Two-qubit gates in the rotation."""
        # noqa: DAR201
        return self.rotation.two_qubit_gate_count

    @cached_property
    def sign_table(self) -> np.ndarray:
        """Eigenvalue (±1) of every member on every measured outcome.

        Row i is the diagonal of V P_i V†, V being the rotation.

        Raises:
            ContractViolation: The rotation does not diagonalize a member.
        """
        # noqa: DAR201
        return sign_table(self)

    @cached_property
    def weighted_signs(self) -> np.ndarray:
        """Σ_i c_i sign_i: the energy contribution of each outcome."""
        # noqa: DAR201
        return np.asarray(self.coefficients) @ self.sign_table

    def as_sum(self) -> PauliSum:
        """Members and coefficients as a Pauli sum."""
        return PauliSum(self.n_qubits, dict(zip(self.members, self.coefficients)))

    def to_json(self) -> Dict[str, Any]:
        """JSON-ready description."""
        return {
            "scheme": self.scheme.value,
            "members": [str(m) for m in self.members],
            "coefficients": list(self.coefficients),
            "flip_pattern": list(self.flip_pattern),
            "structural": self.structural,
            "rotation": [gate.to_json() for gate in self.rotation.gates],
            "two_qubit_gates": self.two_qubit_gate_count,
        }


def sign_table(group: CommutingGroup) -> np.ndarray:
    """Diagonals of V P V† for every member, by dense conjugation.

    Raises:
        ContractViolation: A conjugated member is not diagonal with ±1 entries.
    """
    rotation = unitary(group.rotation.gates, group.n_qubits)
    rows = []
    for member in group.members:
        conjugated = rotation @ dense_matrix(member) @ rotation.conj().T
        diagonal = np.diag(conjugated)
        off_diagonal = conjugated - np.diag(diagonal)
        if np.max(np.abs(off_diagonal), initial=0.0) > DIAGONAL_TOLERANCE or np.max(
            np.abs(np.abs(diagonal) - 1)
        ) > DIAGONAL_TOLERANCE or np.max(np.abs(diagonal.imag)) > DIAGONAL_TOLERANCE:
            raise ContractViolation(f"Rotation does not diagonalize {member}")
        rows.append(np.rint(diagonal.real).astype(np.int8))
    return np.array(rows, dtype=np.int8).reshape(len(group.members), 2**group.n_qubits)


def qc_rotation(members: Sequence[PauliString], n: int) -> MeasurementCircuit:
    """H on X qubits, Sdg then H on Y qubits.

    Raises:
        ContractViolation: Two members disagree on a qubit.
    """
    common = ["I"] * n
    for member in members:
        for qubit, letter in enumerate(str(member)):
            if letter == "I":
                continue
            if common[qubit] not in ("I", letter):
                raise ContractViolation(
                    f"Members disagree on qubit {qubit}: {common[qubit]} and {letter}"
                )
            common[qubit] = letter
    gates: List[Gate] = []
    for qubit, letter in enumerate(common):
        if letter == "Y":
            gates.append(Gate(GateKind.sdg, (qubit,)))
        if letter in ("X", "Y"):
            gates.append(Gate(GateKind.h, (qubit,)))
    return fixed_circuit(n, gates)


def dgc_rotation(flip_pattern: Sequence[int], n: int) -> MeasurementCircuit:
    """Inverse GHZ preparation on the qubits of f.

    CNOTs from the lowest qubit c of f to every other qubit of f in ascending
    order, then H on c; |f| - 1 two-qubit gates.

    Raises:
        ConfigError: Empty f.
    """
    if not flip_pattern:
        raise ConfigError("A DGC rotation needs a non-empty flip pattern")
    control, *targets = sorted(flip_pattern)
    gates = [Gate(GateKind.cnot, (control, t)) for t in targets]
    gates.append(Gate(GateKind.h, (control,)))
    return fixed_circuit(n, gates)


def dgc_eigenvalue(member: PauliString, flip_pattern: Sequence[int], outcome: int) -> int:
    """Closed-form eigenvalue of a DGC member on a measured outcome.

    (-1)^{|y|/2} (-1)^{o_c + Σ_{t in y, t != c} o_t + Σ_{q not in f, Z} o_q}
    with y the Y positions and c the lowest qubit of f.
    """
    n = member.n
    letters = str(member)
    bits = [(outcome >> (n - 1 - q)) & 1 for q in range(n)]
    ys = [q for q in flip_pattern if letters[q] == "Y"]
    control = min(flip_pattern)
    parity = bits[control]
    parity += sum(bits[q] for q in ys if q != control)
    parity += sum(bits[q] for q, letter in enumerate(letters) if letter == "Z")
    return (-1) ** (len(ys) // 2 + parity)


def _make_qc(
    n: int, terms: Sequence[Tuple[PauliString, float]], structural: bool = True
) -> CommutingGroup:
    members = tuple(p for p, _ in terms)
    return CommutingGroup(
        scheme=Scheme.qc,
        n_qubits=n,
        members=members,
        coefficients=tuple(c for _, c in terms),
        rotation=qc_rotation(members, n),
        structural=structural,
    )


def _first_fit(terms: Sequence[Tuple[PauliString, float]]) -> List[List[Tuple[PauliString, float]]]:
    buckets: List[List[Tuple[PauliString, float]]] = []
    for pauli, coeff in terms:
        for bucket in buckets:
            if all(qubitwise_commutes(pauli, other) for other, _ in bucket):
                bucket.append((pauli, coeff))
                break
        else:
            buckets.append([(pauli, coeff)])
    return buckets


def _x_key(pauli: PauliString) -> str:
    return str(pauli).replace("Z", "I")


def qc_groups(
    hamiltonian: PauliSum, hint: Optional[EncodingKind] = None
) -> List[CommutingGroup]:
    """Qubit-wise commuting groups.

    Args:
        hamiltonian: The sum to partition.
        hint: Encoding the sum came from. One-hot sums split into Z, X and Y
            groups; binary and Gray sums get one group per X/Y letter
            assignment with the diagonal group first. Without a hint terms
            are placed first-fit in canonical order.

    Returns:
        Groups partitioning the sum.
    """
    n = hamiltonian.n
    terms = list(hamiltonian)
    if hint is None:
        return [_make_qc(n, bucket, structural=False) for bucket in _first_fit(terms)]
    buckets: Dict[str, List[Tuple[PauliString, float]]] = {}
    leftovers: List[Tuple[PauliString, float]] = []
    for pauli, coeff in terms:
        if hint is EncodingKind.one_hot:
            letters = set(str(pauli)) - {"I"}
            if len(letters) > 1:
                leftovers.append((pauli, coeff))
                continue
            key = letters.pop() if letters else "Z"
        else:
            key = _x_key(pauli)
        buckets.setdefault(key, []).append((pauli, coeff))
    if hint is EncodingKind.one_hot:
        order = [key for key in "ZXY" if key in buckets]
    else:
        order = sorted(buckets)
    groups = [_make_qc(n, buckets[key]) for key in order]
    groups.extend(_make_qc(n, bucket, structural=False) for bucket in _first_fit(leftovers))
    return groups


def dgc_groups(hamiltonian: PauliSum) -> List[CommutingGroup]:
    """One group per X/Y support pattern, diagonal terms first.

    Terms with an odd number of Y letters cannot share the GHZ rotation; they
    are grouped qubit-wise and flagged as non-structural.
    """
    n = hamiltonian.n
    buckets: Dict[Tuple[int, ...], List[Tuple[PauliString, float]]] = {}
    leftovers: List[Tuple[PauliString, float]] = []
    for pauli, coeff in hamiltonian:
        if pauli.y_count % 2:
            leftovers.append((pauli, coeff))
            continue
        buckets.setdefault(pauli.support("XY"), []).append((pauli, coeff))

    def pattern_key(support: Tuple[int, ...]) -> str:
        return mask_pattern(sum(1 << (n - 1 - q) for q in support), n)

    groups = []
    for support in sorted(buckets, key=lambda s: (len(s) > 0, pattern_key(s))):
        terms = buckets[support]
        members = tuple(p for p, _ in terms)
        rotation = dgc_rotation(support, n) if support else fixed_circuit(n, ())
        groups.append(
            CommutingGroup(
                scheme=Scheme.dgc,
                n_qubits=n,
                members=members,
                coefficients=tuple(c for _, c in terms),
                rotation=rotation,
                flip_pattern=support,
            )
        )
    for bucket in _first_fit(leftovers):
        group = _make_qc(n, bucket, structural=False)
        groups.append(
            CommutingGroup(
                scheme=Scheme.dgc,
                n_qubits=n,
                members=group.members,
                coefficients=group.coefficients,
                rotation=group.rotation,
                structural=False,
            )
        )
    if leftovers:
        log.debug("Non-structural DGC groups", terms=len(leftovers))
    return groups


def group_terms(
    hamiltonian: PauliSum, scheme: Scheme, hint: Optional[EncodingKind] = None
) -> List[CommutingGroup]:
    """Partition with the named scheme."""
    groups = qc_groups(hamiltonian, hint) if scheme is Scheme.qc else dgc_groups(hamiltonian)
    log.debug("Grouped Hamiltonian", scheme=scheme.value, terms=len(hamiltonian), groups=len(groups))
    return groups


def check_groups(groups: Sequence[CommutingGroup]) -> None:
    """Raise ContractViolation if members of a group fail to commute."""
    for group in groups:
        test = qubitwise_commutes if group.scheme is Scheme.qc or not group.structural else commutes
        for i, p in enumerate(group.members):
            for q in group.members[i + 1 :]:
                if not test(p, q):
                    raise ContractViolation(f"{p} and {q} share a group but do not commute")


def _gray_weight(k: int) -> int:
    return popcount(k ^ (k >> 1))


def _saturated(n: int, truncation: int) -> bool:
    return truncation > 2 ** (n - 1)


def _reach(n: int, truncation: int) -> range:
    return range(1, min(max(truncation, 1), 2 ** (n - 1)) + 1)


def qc_count_binary(n: int, truncation: int) -> int:
    """QC sets of a binary H_{N,K}; saturates at (1+3^n)/2."""
    if _saturated(n, truncation):
        return (1 + 3**n) // 2
    total = 1
    for k in _reach(n, truncation):
        weight = popcount(2**n - k)
        total += 2**weight - 2 ** (weight - reduced_qubits(n, k))
    return total


def qc_count_gray(n: int, truncation: int) -> int:
    """QC sets of a Gray H_{N,K}; saturates at (1+3^n)/2."""
    if _saturated(n, truncation):
        return (1 + 3**n) // 2
    return 1 + sum(
        reduced_qubits(n, k) * 2 ** _gray_weight(k - 1) for k in _reach(n, truncation)
    )


def dgc_count(n: int, truncation: int) -> int:
    """DGC sets of a binary or Gray H_{N,K}; saturates at 2^n."""
    if _saturated(n, truncation):
        return 2**n
    return 1 + sum(reduced_qubits(n, k) for k in _reach(n, truncation))


def twoqubit_count_gray(n: int, truncation: int) -> int:
    """Two-qubit gates over all DGC rotations, Gray code."""
    if _saturated(n, truncation):
        return 1 + 2 ** (n - 1) * (n - 2)
    return sum(
        reduced_qubits(n, k) * _gray_weight(k - 1) for k in _reach(n, truncation)
    )


def twoqubit_count_binary(n: int, truncation: int) -> int:
    """Two-qubit gates over all DGC rotations, binary code."""
    if _saturated(n, truncation):
        return 1 + 2 ** (n - 1) * (n - 2)
    total = 0
    for k in _reach(n, truncation):
        reduced = reduced_qubits(n, k)
        total += reduced * (2 * popcount(2**n - k) - 1 - reduced)
    return total // 2


def onehot_pairs(size: int, truncation: int) -> int:
    """Coupled state pairs in the band of a one-hot H_{N,K}."""
    k = band_reach(size, truncation)
    return size * k - k * (k + 1) // 2


def qc_count_onehot(size: int, truncation: int) -> int:
    """One-hot sums split into Z, X and Y groups."""
    return 3


def dgc_count_onehot(size: int, truncation: int) -> int:
    """Diagonal group plus one {XX, YY} group per coupled pair."""
    return 1 + onehot_pairs(size, truncation)


def twoqubit_count_onehot(size: int, truncation: int) -> int:
    """One CNOT per coupled pair."""
    return onehot_pairs(size, truncation)
