"""Fock-state encodings and the encoded Hamiltonians.

A code table lists the bitstring of every oscillator state |m>. The compact
codes (binary and reflective Gray) use n = log2(N) qubits, one-hot uses N.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog

from nucleus_vqe import APP_NAME, EncodingKind
from nucleus_vqe.errors import ConfigError, ContractViolation
from nucleus_vqe.hamiltonian import bandwidth, check_symmetric
from nucleus_vqe.pauli import (
    PauliString,
    PauliSum,
    multiply,
    outer_product,
    pauli_decompose,
    popcount,
    projector_decompose,
)

log = structlog.get_logger(APP_NAME)

ComplexTerms = Dict[PauliString, complex]


@dataclass(frozen=True)
class CodeTable:
    """Ordered bitstrings; entry m encodes |m>."""

    kind: EncodingKind
    entries: Tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.entries)) != len(self.entries):
            raise ConfigError("Code table entries must be distinct")
        if any(len(entry) != self.n_qubits for entry in self.entries):
            raise ConfigError("Code table entries must share one length")

    @property
    def n_qubits(self) -> int:
        """Qubits per entry."""
        # noqa: DAR201
        return len(self.entries[0])

    @property
    def size(self) -> int:
        """Number of encoded states N."""
        # noqa: DAR201
        return len(self.entries)

    def index(self, m: int) -> int:
        """Computational basis index of the entry for |m>."""
        return int(self.entries[m], 2)

    @cached_property
    def permutation(self) -> np.ndarray:
        """Basis index of every entry."""
        # noqa: DAR201
        return np.array([self.index(m) for m in range(self.size)])


@dataclass(frozen=True)
class FlipSequence:
    """Alternate representation of a compact code.

    Gray entries are the 1-based position of the flipped bit, binary entries
    the XOR of adjacent code words as an integer.
    """

    kind: EncodingKind
    n_qubits: int
    entries: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def pivot(self) -> int:
        """Centre entry of the sequence."""
        # noqa: DAR201
        return self.entries[len(self.entries) // 2]

    def mask(self, position: int) -> int:
        """Bit mask flipped by the 1-based `position`."""
        entry = self.entries[position - 1]
        if self.kind is EncodingKind.gray:
            return 1 << (self.n_qubits - entry)
        return entry


def gray_code(n: int) -> CodeTable:
    """Binary reflective Gray code, the new bit appended on the right.

    Raises:
        ConfigError: n < 1.
    """
    if n < 1:
        raise ConfigError(f"Gray code needs n >= 1, got {n}")
    codes = ["0", "1"]
    for _ in range(n - 1):
        codes = [c + "0" for c in codes] + [c + "1" for c in reversed(codes)]
    return CodeTable(EncodingKind.gray, tuple(codes))


def binary_code(n: int) -> CodeTable:
    """Entry m is m written in n bits, most significant bit first.

    Raises:
        ConfigError: n < 1.
    """
    if n < 1:
        raise ConfigError(f"Binary code needs n >= 1, got {n}")
    return CodeTable(EncodingKind.binary, tuple(format(m, f"0{n}b") for m in range(2**n)))


def one_hot_code(size: int) -> CodeTable:
    """Entry m has its single 1 at position m.

    Raises:
        ConfigError: size < 2.
    """
    if size < 2:
        raise ConfigError(f"One-hot code needs N >= 2, got {size}")
    return CodeTable(
        EncodingKind.one_hot,
        tuple("".join("1" if q == m else "0" for q in range(size)) for m in range(size)),
    )


def compact_qubits(size: int) -> int:
    """log2(N) for a power-of-two N.

    Raises:
        ConfigError: N is not a power of two.
    """
    if size < 2 or size & (size - 1):
        raise ConfigError(f"Compact encodings need N = 2^n, got N={size}")
    return size.bit_length() - 1


def code_table(kind: EncodingKind, size: int) -> CodeTable:
    """Code table of `kind` for N = `size` states."""
    if kind is EncodingKind.one_hot:
        return one_hot_code(size)
    n = compact_qubits(size)
    return gray_code(n) if kind is EncodingKind.gray else binary_code(n)


def alternate_representation(code: CodeTable) -> FlipSequence:
    """Flip sequence between adjacent entries of a compact code.

    Raises:
        ConfigError: One-hot tables have no alternate representation.
        ContractViolation: Adjacent Gray entries differ in more than one bit.
    """
    if not code.kind.is_compact:
        raise ConfigError("Only binary and Gray codes have an alternate representation")
    n = code.n_qubits
    entries = []
    for m in range(code.size - 1):
        flipped = code.index(m) ^ code.index(m + 1)
        if code.kind is EncodingKind.gray:
            if popcount(flipped) != 1:
                raise ContractViolation(
                    f"Gray entries {code.entries[m]} and {code.entries[m + 1]} "
                    "differ in more than one bit"
                )
            entries.append(n - flipped.bit_length() + 1)
        else:
            entries.append(flipped)
    return FlipSequence(code.kind, n, tuple(entries))


def mask_pattern(mask: int, n: int) -> str:
    """X/I string of a bit mask, qubit 0 first."""
    return format(mask, f"0{n}b").replace("1", "X").replace("0", "I")


def interval_mask(sequence: FlipSequence, left: int, right: int) -> int:
    """Accumulated XOR of the 1-based flip entries left..right."""
    if not 1 <= left <= right <= len(sequence):
        raise ConfigError(
            f"Interval [{left}, {right}] outside 1..{len(sequence)}"
        )
    mask = 0
    for position in range(left, right + 1):
        mask ^= sequence.mask(position)
    return mask


def interval_pattern(sequence: FlipSequence, left: int, right: int) -> str:
    """X/I pattern of the flip interval [left, right]."""
    return mask_pattern(interval_mask(sequence, left, right), sequence.n_qubits)


def canonical_subsequence(
    sequence: FlipSequence, left: int, right: int
) -> tuple[int, int]:
    """Shortest interval ending at a power-of-two index with the same pattern.

    Args:
        sequence: A flip sequence.
        left: 1-based first position.
        right: 1-based last position.

    Returns:
        (L', R') with R' a power of two and R'-L'+1 <= right-left+1; ties go
        to the smaller endpoint.

    Raises:
        ContractViolation: No such interval exists.
    """
    target = interval_mask(sequence, left, right)
    endpoints = [1 << j for j in range(sequence.n_qubits) if 1 << j <= len(sequence)]
    for length in range(1, right - left + 2):
        for end in endpoints:
            if length <= end and interval_mask(sequence, end - length + 1, end) == target:
                return end - length + 1, end
    raise ContractViolation(f"No power-of-two-ending interval matches [{left}, {right}]")


def flip_string_table(kind: EncodingKind, n: int) -> Dict[Tuple[int, int], str]:
    """Patterns of the length-k flip intervals ending at index 2^j.

    Args:
        kind: Binary or Gray.
        n: Qubit count.

    Returns:
        (k, 2^j) -> X/I string, for every 2^j >= k.
    """
    sequence = alternate_representation(code_table(kind, 2**n))
    table = {}
    for j in range(n):
        end = 1 << j
        for k in range(1, end + 1):
            table[(k, end)] = interval_pattern(sequence, end - k + 1, end)
    return table


def number_operator(code: CodeTable, m: int) -> PauliSum:
    """Encoded |m><m|."""
    if not 0 <= m < code.size:
        raise ConfigError(f"State {m} outside 0..{code.size - 1}")
    if code.kind is EncodingKind.one_hot:
        return PauliSum(
            code.size,
            {
                PauliString.identity(code.size): 0.5,
                PauliString.single(code.size, m, "Z"): -0.5,
            },
        )
    return projector_decompose(code.index(m), code.n_qubits)


def _product(left: ComplexTerms, right: ComplexTerms) -> ComplexTerms:
    result: ComplexTerms = {}
    for p, a in left.items():
        for q, b in right.items():
            phase, pauli = multiply(p, q)
            result[pauli] = result.get(pauli, 0.0) + phase.as_complex * a * b
    return {p: c for p, c in result.items() if abs(c) > 1e-14}


def step_operator(code: CodeTable, m: int, k: int = 1) -> ComplexTerms:
    """Encoded |m+k><m| with complex coefficients.

    The step-1 operator is the tensor product of single-qubit outer products;
    longer steps follow the recursion S^k_m = S^1_{m+k-1} S^{k-1}_m.
    """
    if k == 1:
        terms: ComplexTerms = {}
        for pauli, coeff in outer_product(
            code.n_qubits, code.index(m + 1), code.index(m)
        ):
            terms[pauli] = terms.get(pauli, 0.0) + coeff
        return terms
    return _product(step_operator(code, m + k - 1, 1), step_operator(code, m, k - 1))


def ladder_operator(code: CodeTable, m: int, k: int) -> PauliSum:
    """Encoded Hermitian pair |m+k><m| + |m><m+k|.

    Raises:
        ConfigError: The indices leave the code table.
    """
    if k < 1 or m < 0 or m + k > code.size - 1:
        raise ConfigError(f"Ladder |{m + k}><{m}| outside 0..{code.size - 1}")
    if code.kind is EncodingKind.one_hot:
        size = code.size
        return PauliSum(
            size,
            {
                PauliString.from_letters(size, {m: "X", m + k: "X"}): 0.5,
                PauliString.from_letters(size, {m: "Y", m + k: "Y"}): 0.5,
            },
        )
    raising = step_operator(code, m, k)
    return PauliSum.from_pairs(
        code.n_qubits,
        [*raising.items(), *((p, c.conjugate()) for p, c in raising.items())],
    )


def jordan_wigner_ladder(size: int, m: int, k: int) -> PauliSum:
    """Jordan–Wigner image of a†_m a_{m+k} + h.c. on `size` qubits."""
    if k < 1 or m < 0 or m + k > size - 1:
        raise ConfigError(f"Ladder |{m + k}><{m}| outside 0..{size - 1}")
    string: Dict[int, str] = {q: "Z" for q in range(m + 1, m + k)}
    return PauliSum(
        size,
        {
            PauliString.from_letters(size, {**string, m: "X", m + k: "X"}): 0.5,
            PauliString.from_letters(size, {**string, m: "Y", m + k: "Y"}): 0.5,
        },
    )


def _check_band(hamiltonian: np.ndarray, truncation: Optional[int]) -> np.ndarray:
    hamiltonian = np.asarray(hamiltonian, dtype=float)
    check_symmetric(hamiltonian)
    if truncation is not None and bandwidth(hamiltonian) > max(truncation, 1):
        raise ContractViolation(
            f"Matrix bandwidth {bandwidth(hamiltonian)} exceeds truncation K={truncation}"
        )
    return hamiltonian


def encode_onehot(hamiltonian: np.ndarray, truncation: Optional[int] = None) -> PauliSum:
    """One-hot encoding on N qubits.

    Args:
        hamiltonian: Real symmetric banded matrix.
        truncation: Declared K; the band is checked against it when given.

    Returns:
        Σ_m ½H_mm(I - Z_m) + Σ_{m<m'} ½H_{m'm}(X_m X_m' + Y_m Y_m').
    """
    hamiltonian = _check_band(hamiltonian, truncation)
    size = hamiltonian.shape[0]
    pairs: List[Tuple[PauliString, float]] = []
    for m in range(size):
        pairs.append((PauliString.identity(size), hamiltonian[m, m] / 2))
        pairs.append((PauliString.single(size, m, "Z"), -hamiltonian[m, m] / 2))
    for m, m_prime in zip(*np.nonzero(np.triu(hamiltonian, 1))):
        coupling = hamiltonian[m_prime, m] / 2
        for letter in "XY":
            pairs.append(
                (PauliString.from_letters(size, {m: letter, m_prime: letter}), coupling)
            )
    return PauliSum.from_pairs(size, pairs)


def embed(hamiltonian: np.ndarray, code: CodeTable) -> np.ndarray:
    """H placed on the code's computational basis states."""
    dim = 2**code.n_qubits
    permutation = code.permutation
    dense = np.zeros((dim, dim))
    dense[np.ix_(permutation, permutation)] = hamiltonian
    return dense


def encode_compact(
    hamiltonian: np.ndarray, code: CodeTable, truncation: Optional[int] = None
) -> PauliSum:
    """Binary or Gray encoding on log2(N) qubits.

    Args:
        hamiltonian: Real symmetric matrix with N = 2^n.
        code: The compact code table.
        truncation: Declared K; the band is checked against it when given.

    Returns:
        The Pauli decomposition of Σ H_{m'm} |code(m')><code(m)|.

    Raises:
        ConfigError: Size mismatch with the code table.
    """
    hamiltonian = _check_band(hamiltonian, truncation)
    if hamiltonian.shape[0] != code.size or not code.kind.is_compact:
        raise ConfigError(
            f"A {code.kind.value} code for N={code.size} cannot encode a "
            f"{hamiltonian.shape[0]}-state matrix"
        )
    return pauli_decompose(embed(hamiltonian, code))


def encode_structural(hamiltonian: np.ndarray, code: CodeTable) -> PauliSum:
    """Encode from number and ladder operators."""
    hamiltonian = np.asarray(hamiltonian, dtype=float)
    total = PauliSum(code.n_qubits)
    for m in range(code.size):
        total = total + float(hamiltonian[m, m]) * number_operator(code, m)
    for m, m_prime in zip(*np.nonzero(np.triu(hamiltonian, 1))):
        total = total + float(hamiltonian[m_prime, m]) * ladder_operator(
            code, int(m), int(m_prime - m)
        )
    return total


def encode(
    hamiltonian: np.ndarray, kind: EncodingKind, truncation: Optional[int] = None
) -> PauliSum:
    """Encode H with the named encoding."""
    size = np.asarray(hamiltonian).shape[0]
    if kind is EncodingKind.one_hot:
        encoded = encode_onehot(hamiltonian, truncation)
    else:
        encoded = encode_compact(hamiltonian, code_table(kind, size), truncation)
    log.debug("Encoded Hamiltonian", encoding=kind.value, size=size, terms=len(encoded))
    return encoded


def band_reach(size: int, truncation: int) -> int:
    """Bandwidth of H_{N,K}: max(K, 1) capped by N - 1."""
    return min(max(truncation, 1), size - 1)


def reduced_qubits(n: int, k: int) -> int:
    """n - ceil(log2 k)."""
    return n - (k - 1).bit_length()


def term_count_onehot(size: int, truncation: int) -> int:
    """Pauli terms of a one-hot H_{N,K}: 1 + N + 2NK - K(K+1)."""
    k = band_reach(size, truncation)
    return 1 + size + 2 * size * k - k * (k + 1)


def term_count_compact(n: int, truncation: int) -> int:
    """Pauli terms of a binary or Gray H_{N,K}, N = 2^n.

    Saturates at 2^{n-1}(1+2^n) once K exceeds 2^{n-1}.
    """
    half = 2 ** (n - 1)
    if truncation > half:
        return half * (1 + 2**n)
    reach = max(truncation, 1)
    return 2**n + half * sum(reduced_qubits(n, k) for k in range(1, reach + 1))
