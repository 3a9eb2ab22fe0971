"""Closed-form resource counts checked against enumeration.

Enumeration encodes a generic banded matrix (band entries drawn uniformly
from [0.5, 1.5], so nothing cancels by accident) and counts the terms and
groups the encoders and grouping actually produce.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Iterable, List

import numpy as np
import structlog

from nucleus_vqe import APP_NAME, EncodingKind, Scheme
from nucleus_vqe.encodings import band_reach, encode, term_count_compact, term_count_onehot
from nucleus_vqe.grouping import (
    dgc_count,
    dgc_count_onehot,
    group_terms,
    qc_count_binary,
    qc_count_gray,
    qc_count_onehot,
    twoqubit_count_binary,
    twoqubit_count_gray,
    twoqubit_count_onehot,
)
from nucleus_vqe.simulator import Seed

log = structlog.get_logger(APP_NAME)

CountFormula = Callable[[int, int], int]

# kind -> (terms, QC sets, DGC sets, two-qubit gates), each f(n or N, K)
FORMULAS: Dict[EncodingKind, tuple[CountFormula, ...]] = {
    EncodingKind.one_hot: (
        term_count_onehot,
        qc_count_onehot,
        dgc_count_onehot,
        twoqubit_count_onehot,
    ),
    EncodingKind.binary: (
        term_count_compact,
        qc_count_binary,
        dgc_count,
        twoqubit_count_binary,
    ),
    EncodingKind.gray: (
        term_count_compact,
        qc_count_gray,
        dgc_count,
        twoqubit_count_gray,
    ),
}


@dataclass(frozen=True)
class Counts:
    """Pauli terms, QC sets, DGC sets and DGC two-qubit gates."""

    terms: int
    qc_sets: int
    dgc_sets: int
    two_qubit_gates: int


@dataclass(frozen=True)
class CountRow:
    """Formula and enumerated counts at one grid point."""

    encoding: EncodingKind
    size: int
    truncation: int
    formula: Counts
    enumerated: Counts

    @property
    def matches(self) -> bool:
        """Whether formula and enumeration agree everywhere."""
        # noqa: DAR201
        return self.formula == self.enumerated

    def to_json(self) -> Dict[str, Any]:
        """JSON-ready record."""
        return {
            "encoding": self.encoding.value,
            "N": self.size,
            "K": self.truncation,
            "formula": asdict(self.formula),
            "enumerated": asdict(self.enumerated),
            "match": self.matches,
        }


def generic_banded_matrix(size: int, truncation: int, seed: Seed = None) -> np.ndarray:
    """Symmetric matrix with every entry of the H_{N,K} band in [0.5, 1.5]."""
    rng = np.random.default_rng(seed)
    reach = band_reach(size, truncation)
    matrix = np.zeros((size, size))
    for offset in range(reach + 1):
        values = rng.uniform(0.5, 1.5, size - offset)
        matrix += np.diag(values, offset)
        if offset:
            matrix += np.diag(values, -offset)
    return matrix


def formula_counts(kind: EncodingKind, size: int, truncation: int) -> Counts:
    """Closed-form counts for N = `size` states."""
    argument = size if kind is EncodingKind.one_hot else size.bit_length() - 1
    return Counts(*(formula(argument, truncation) for formula in FORMULAS[kind]))


def enumerate_counts(
    kind: EncodingKind, size: int, truncation: int, seed: Seed = None
) -> Counts:
    """Counts read off the encoded and grouped generic matrix."""
    encoded = encode(generic_banded_matrix(size, truncation, seed), kind)
    dgc = group_terms(encoded, Scheme.dgc)
    return Counts(
        terms=len(encoded),
        qc_sets=len(group_terms(encoded, Scheme.qc, kind)),
        dgc_sets=len(dgc),
        two_qubit_gates=sum(group.two_qubit_gate_count for group in dgc),
    )


def count_row(kind: EncodingKind, size: int, truncation: int, seed: Seed = None) -> CountRow:
    """Formula and enumeration side by side."""
    return CountRow(
        encoding=kind,
        size=size,
        truncation=truncation,
        formula=formula_counts(kind, size, truncation),
        enumerated=enumerate_counts(kind, size, truncation, seed),
    )


def count_grid(
    kinds: Iterable[EncodingKind],
    sizes: Iterable[int],
    truncations: Iterable[int] | None = None,
    seed: Seed = None,
) -> List[CountRow]:
    """Rows for every (encoding, N, K); K defaults to 0..N."""
    rng = np.random.default_rng(seed)
    sizes = list(sizes)
    fixed = list(truncations) if truncations is not None else None
    rows = []
    for kind in kinds:
        for size in sizes:
            for truncation in fixed if fixed is not None else range(size + 1):
                row = count_row(kind, size, truncation, rng)
                if not row.matches:
                    log.warning("Count mismatch", **row.to_json())
                rows.append(row)
    return rows
