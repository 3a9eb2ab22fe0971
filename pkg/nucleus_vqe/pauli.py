"""Pauli strings, real Pauli sums and their dense-matrix oracle.

Qubit 0 is the leftmost letter of a printed string and the most significant
bit of a computational basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from enum import Enum
from functools import cached_property
from types import MappingProxyType
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse

from nucleus_vqe.errors import ConfigError, ContractViolation

LETTERS = "IXYZ"
PRUNE_TOLERANCE = 1e-12
HERMITIAN_TOLERANCE = 1e-10
MAX_DENSE_QUBITS = 10

# (x, z) bits of each letter; Y = i X Z
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {bits: letter for letter, bits in _LETTER_BITS.items()}

# single-qubit products: (a, b) -> (power of i, letter)
_PRODUCTS: Dict[Tuple[str, str], Tuple[int, str]] = {
    ("X", "Y"): (1, "Z"),
    ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"),
    ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"),
    ("X", "Z"): (3, "Y"),
}


class Phase(Enum):
    """Phases of the Pauli group, stored as powers of i."""

    one = 0
    i = 1
    minus_one = 2
    minus_i = 3

    @classmethod
    def from_power(cls, power: int) -> Phase:
        """Phase i^power."""
        return cls(power % 4)

    @property
    def as_complex(self) -> complex:
        """The phase as a complex number."""
        # noqa: DAR201
        return (1, 1j, -1, -1j)[self.value]

    def __mul__(self, other: Phase) -> Phase:
        return Phase.from_power(self.value + other.value)


def popcount(value: int) -> int:
    """Number of set bits."""
    return bin(value).count("1")


def _parity(indices: np.ndarray, mask: int) -> np.ndarray:
    masked = indices & mask
    parity = np.zeros_like(masked)
    while np.any(masked):
        parity ^= masked & 1
        masked = masked >> 1
    return parity


@dataclass(frozen=True, order=True)
class PauliString:
    """An n-qubit Pauli string such as ``IXXZ``."""

    letters: str

    def __post_init__(self) -> None:
        if not self.letters or any(letter not in LETTERS for letter in self.letters):
            raise ConfigError(f"Invalid Pauli string '{self.letters}'")

    def __str__(self) -> str:
        return self.letters

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def n(self) -> int:
        """Qubit count."""
        # noqa: DAR201
        return len(self.letters)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        """I on every qubit."""
        return cls("I" * n)

    @classmethod
    def from_masks(cls, n: int, x: int, z: int) -> PauliString:
        """Build a string from X and Z bit masks (qubit 0 is the top bit)."""
        letters = []
        for qubit in range(n):
            bit = n - 1 - qubit
            letters.append(_BITS_LETTER[((x >> bit) & 1, (z >> bit) & 1)])
        return cls("".join(letters))

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        """`letter` on `qubit`, identity elsewhere."""
        return cls.from_letters(n, {qubit: letter})

    @classmethod
    def from_letters(cls, n: int, letters: Mapping[int, str]) -> PauliString:
        """Build a string from a sparse qubit -> letter map."""
        chars = ["I"] * n
        for qubit, letter in letters.items():
            chars[qubit] = letter
        return cls("".join(chars))

    @cached_property
    def x_mask(self) -> int:
        """Bit mask of the X and Y positions."""
        # noqa: DAR201
        return self._mask(0)

    @cached_property
    def z_mask(self) -> int:
        """Bit mask of the Z and Y positions."""
        # noqa: DAR201
        return self._mask(1)

    def _mask(self, which: int) -> int:
        mask = 0
        for letter in self.letters:
            mask = (mask << 1) | _LETTER_BITS[letter][which]
        return mask

    @property
    def is_diagonal(self) -> bool:
        """Whether the string only holds I and Z."""
        # noqa: DAR201
        return self.x_mask == 0

    @property
    def y_count(self) -> int:
        """Number of Y letters."""
        # noqa: DAR201
        return self.letters.count("Y")

    def support(self, letters: str = "XYZ") -> tuple[int, ...]:
        """Qubits carrying one of `letters`."""
        return tuple(q for q, letter in enumerate(self.letters) if letter in letters)

    def reversed(self) -> PauliString:
        """The same operator with the qubit order reversed."""
        return PauliString(self.letters[::-1])


PauliLike = Union[PauliString, str]


def as_pauli(value: PauliLike) -> PauliString:
    """Coerce a label into a PauliString."""
    return value if isinstance(value, PauliString) else PauliString(value)


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ConfigError(f"Qubit counts differ: {p} has {p.n}, {q} has {q.n}")


def multiply(p: PauliLike, q: PauliLike) -> tuple[Phase, PauliString]:
    """Product of two Pauli strings.

    Args:
        p: Left factor.
        q: Right factor.

    Returns:
        The phase and string R with p·q = phase·R.
    """
    p, q = as_pauli(p), as_pauli(q)
    _check_same_n(p, q)
    power = 0
    letters = []
    for a, b in zip(p.letters, q.letters):
        if a == "I":
            letters.append(b)
        elif b == "I":
            letters.append(a)
        elif a == b:
            letters.append("I")
        else:
            step, letter = _PRODUCTS[(a, b)]
            power += step
            letters.append(letter)
    return Phase.from_power(power), PauliString("".join(letters))


def _anticommuting_positions(p: PauliString, q: PauliString) -> int:
    _check_same_n(p, q)
    return sum(
        1 for a, b in zip(p.letters, q.letters) if a != "I" and b != "I" and a != b
    )


def commutes(p: PauliLike, q: PauliLike) -> bool:
    """Whether p and q commute as operators."""
    return _anticommuting_positions(as_pauli(p), as_pauli(q)) % 2 == 0


def qubitwise_commutes(p: PauliLike, q: PauliLike) -> bool:
    """Whether p and q commute on every qubit separately."""
    return _anticommuting_positions(as_pauli(p), as_pauli(q)) == 0


def _as_real(value: Union[complex, float], label: str) -> float:
    if isinstance(value, complex) or np.iscomplexobj(value):
        if abs(value.imag) > HERMITIAN_TOLERANCE:
            raise ContractViolation(
                f"Coefficient of {label} is not real: {value}"
            )
        value = value.real
    return float(value)


class PauliSum:
    """A real linear combination of n-qubit Pauli strings.

    Coefficients with magnitude at most 1e-12 are dropped. Iteration follows
    the canonical order, lexicographic with I < X < Y < Z.
    """

    def __init__(
        self, n: int, terms: Union[Mapping[PauliLike, float], None] = None
    ) -> None:
        """Create a Pauli sum.

        Args:
            n: Qubit count.
            terms: Coefficients per Pauli string; repeated strings are summed.

        Raises:
            ConfigError: A string has the wrong length.
        """
        if n < 1:
            raise ConfigError(f"Qubit count must be positive: n={n}")
        accumulated: Dict[PauliString, float] = {}
        for label, coeff in (terms or {}).items():
            pauli = as_pauli(label)
            if pauli.n != n:
                raise ConfigError(f"Pauli string {pauli} does not act on {n} qubits")
            accumulated[pauli] = accumulated.get(pauli, 0.0) + _as_real(coeff, str(pauli))
        self._n = n
        self._terms = MappingProxyType(
            {
                pauli: accumulated[pauli]
                for pauli in sorted(accumulated)
                if abs(accumulated[pauli]) > PRUNE_TOLERANCE
            }
        )

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[PauliLike, complex]]) -> PauliSum:
        """Sum repeated (string, coefficient) pairs."""
        terms: Dict[PauliString, complex] = {}
        for label, coeff in pairs:
            pauli = as_pauli(label)
            terms[pauli] = terms.get(pauli, 0.0) + coeff
        return cls(n, terms)  # type: ignore[arg-type]

    @classmethod
    def identity(cls, n: int, coeff: float = 1.0) -> PauliSum:
        """coeff times the identity."""
        return cls(n, {PauliString.identity(n): coeff})

    @property
    def n(self) -> int:
        """Qubit count."""
        # noqa: DAR201
        return self._n

    @property
    def terms(self) -> Mapping[PauliString, float]:
        """Read-only view of the nonzero terms in canonical order."""
        # noqa: DAR201
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[PauliString, float]]:
        return iter(self._terms.items())

    def __contains__(self, label: object) -> bool:
        if isinstance(label, str):
            label = PauliString(label)
        return label in self._terms

    def __getitem__(self, label: PauliLike) -> float:
        return self._terms.get(as_pauli(label), 0.0)

    def __add__(self, other: PauliSum) -> PauliSum:
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.n != self.n:
            raise ConfigError(f"Cannot add sums on {self.n} and {other.n} qubits")
        return PauliSum.from_pairs(self.n, [*self, *other])

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> PauliSum:
        return PauliSum(self.n, {p: scalar * c for p, c in self})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n == other.n and dict(self._terms) == dict(other._terms)

    def __repr__(self) -> str:
        return f"PauliSum(n={self.n}, terms={{{', '.join(f'{p}: {c!r}' for p, c in self)}}})"

    @property
    def labels(self) -> list[str]:
        """Term labels in canonical order."""
        # noqa: DAR201
        return [str(pauli) for pauli in self._terms]

    def isclose(self, other: PauliSum, atol: float = 1e-10) -> bool:
        """Coefficient-wise comparison; missing terms count as zero."""
        if self.n != other.n:
            return False
        keys = set(self._terms) | set(other.terms)
        return all(abs(self[key] - other[key]) <= atol for key in keys)

    def reverse_qubits(self) -> PauliSum:
        """The same operator with qubit order reversed."""
        return PauliSum(self.n, {p.reversed(): c for p, c in self})

    def listing(self, decimals: int = 3) -> list[str]:
        """One ``<coeff> <string>`` line per term, rounded half-even."""
        quantum = Decimal(1).scaleb(-decimals)
        lines = []
        for pauli, coeff in self:
            rounded = Decimal(repr(coeff)).quantize(quantum, rounding=ROUND_HALF_EVEN)
            lines.append(f"{rounded:+f} {pauli}")
        return lines

    def to_json(self) -> dict[str, Any]:
        """JSON-ready representation in canonical order."""
        return {
            "n": self.n,
            "terms": [{"pauli": str(p), "coeff": c} for p, c in self],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> PauliSum:
        """Inverse of `to_json`.

        Raises:
            ConfigError: Malformed document.
        """
        try:
            return cls(
                int(data["n"]),
                {term["pauli"]: float(term["coeff"]) for term in data["terms"]},
            )
        except (KeyError, TypeError, ValueError) as ex:
            raise ConfigError(f"Malformed Pauli sum document: {ex}") from ex


def _dimension_guard(n: int) -> None:
    if n > MAX_DENSE_QUBITS:
        raise ConfigError(
            f"Dense matrices are limited to {MAX_DENSE_QUBITS} qubits, got {n}"
        )


def pauli_action(pauli: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """Column action of a Pauli string: P|k> = phase[k] |target[k]>."""
    indices = np.arange(2**pauli.n)
    phase = (1j) ** (pauli.y_count % 4) * (1 - 2 * _parity(indices, pauli.z_mask))
    return indices ^ pauli.x_mask, phase


def dense_matrix(operator: Union[PauliLike, PauliSum]) -> np.ndarray:
    """Dense 2^n × 2^n matrix of a Pauli string or sum.

    Raises:
        ConfigError: More than 10 qubits.
    """
    if isinstance(operator, PauliSum):
        _dimension_guard(operator.n)
        matrix = np.zeros((2**operator.n, 2**operator.n), dtype=complex)
        for pauli, coeff in operator:
            targets, phase = pauli_action(pauli)
            matrix[targets, np.arange(targets.size)] += coeff * phase
        return matrix
    pauli = as_pauli(operator)
    _dimension_guard(pauli.n)
    targets, phase = pauli_action(pauli)
    matrix = np.zeros((targets.size, targets.size), dtype=complex)
    matrix[targets, np.arange(targets.size)] = phase
    return matrix


def pauli_decompose(matrix: np.ndarray) -> PauliSum:
    """Expand a Hermitian matrix in the Pauli basis, c_P = Tr[P M]/2^n.

    Each X mask is handled by one Walsh–Hadamard transform of the entries
    M[k, k ^ x].

    Args:
        matrix: Hermitian 2^n × 2^n matrix.

    Returns:
        The real Pauli sum equal to `matrix`.

    Raises:
        ContractViolation: Non-square, non-power-of-two or non-Hermitian input.
    """
    matrix = np.asarray(matrix)
    dim = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != dim or dim < 2 or dim & (dim - 1):
        raise ContractViolation(f"Expected a 2^n square matrix, got {matrix.shape}")
    n = dim.bit_length() - 1
    _dimension_guard(n)
    if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOLERANCE:
        raise ContractViolation("Matrix is not Hermitian")
    walsh = scipy.linalg.hadamard(dim)
    indices = np.arange(dim)
    terms: Dict[PauliString, complex] = {}
    for x in range(dim):
        transformed = walsh @ matrix[indices, indices ^ x]
        for z in np.flatnonzero(np.abs(transformed) > PRUNE_TOLERANCE * dim):
            coeff = (1j) ** (popcount(x & int(z)) % 4) * transformed[z] / dim
            terms[PauliString.from_masks(n, x, int(z))] = coeff
    return PauliSum(n, terms)  # type: ignore[arg-type]


def projector_decompose(index: int, n: int) -> PauliSum:
    """|index><index| as 2^n I/Z strings with coefficients ±2^{-n}.

    Raises:
        ConfigError: Index out of range.
    """
    if not 0 <= index < 2**n:
        raise ConfigError(f"Basis index {index} out of range for {n} qubits")
    scale = 2.0**-n
    return PauliSum(
        n,
        {
            PauliString.from_masks(n, 0, z): scale * (-1) ** popcount(index & z)
            for z in range(2**n)
        },
    )


def outer_product(n: int, ket: int, bra: int) -> List[tuple[PauliString, complex]]:
    """|ket><bra| as (string, complex coefficient) pairs.

    Each qubit contributes |a><b|: |0><0| = (I+Z)/2, |1><1| = (I-Z)/2,
    |0><1| = (X+iY)/2 and |1><0| = (X-iY)/2.
    """
    factors: List[List[tuple[str, complex]]] = []
    for qubit in range(n):
        bit = n - 1 - qubit
        a, b = (ket >> bit) & 1, (bra >> bit) & 1
        if a == b:
            factors.append([("I", 0.5), ("Z", 0.5 if a == 0 else -0.5)])
        else:
            factors.append([("X", 0.5), ("Y", 0.5j if a == 0 else -0.5j)])
    pairs: List[tuple[str, complex]] = [("", 1.0)]
    for factor in factors:
        pairs = [(s + letter, c * w) for s, c in pairs for letter, w in factor]
    return [(PauliString(s), c) for s, c in pairs]


def sparse_matrix(operator: PauliSum) -> scipy.sparse.csr_matrix:
    """Sparse matrix of a Pauli sum; no qubit limit beyond memory."""
    dim = 2**operator.n
    columns = np.arange(dim)
    rows, cols, values = [], [], []
    for pauli, coeff in operator:
        targets, phase = pauli_action(pauli)
        rows.append(targets)
        cols.append(columns)
        values.append(coeff * phase)
    if not values:
        return scipy.sparse.csr_matrix((dim, dim), dtype=complex)
    return scipy.sparse.coo_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    ).tocsr()
