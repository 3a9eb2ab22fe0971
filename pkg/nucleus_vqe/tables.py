"""Printable code, flip-sequence and operator tables."""

from __future__ import annotations

from typing import Any, Dict, List, Tuple

from nucleus_vqe import EncodingKind
from nucleus_vqe.encodings import (
    CodeTable,
    FlipSequence,
    alternate_representation,
    code_table,
    flip_string_table,
    ladder_operator,
    number_operator,
)
from nucleus_vqe.pauli import PauliString, PauliSum

COEFFICIENT_TOLERANCE = 1e-12


def onehot_label(pauli: PauliString) -> str:
    """`X_1X_4` style label with 1-based qubit subscripts; `I` for the identity."""
    factors = [f"{letter}_{q + 1}" for q, letter in enumerate(pauli.letters) if letter != "I"]
    return "".join(factors) or "I"


def render_operator(operator: PauliSum, one_hot: bool = False) -> str:
    """Render a Pauli sum as `0.5 (XI - XZ)` when all magnitudes agree.

    Sums with unequal magnitudes are written term by term.
    """
    terms = list(operator)
    if not terms:
        return "0"
    label = onehot_label if one_hot else str
    magnitude = abs(terms[0][1])
    if all(abs(abs(c) - magnitude) <= COEFFICIENT_TOLERANCE for _, c in terms):
        body = ""
        for position, (pauli, coeff) in enumerate(terms):
            sign = "-" if coeff < 0 else "+"
            if position == 0:
                body = ("-" if coeff < 0 else "") + label(pauli)
            else:
                body += f" {sign} {label(pauli)}"
        return f"{magnitude:g} ({body})"
    return " ".join(f"{coeff:+g} {label(pauli)}" for pauli, coeff in terms)


def operator_table(code: CodeTable) -> List[Tuple[str, PauliSum]]:
    """Every encoded number operator and ladder pair of a code."""
    rows = [(f"|{m}><{m}|", number_operator(code, m)) for m in range(code.size)]
    for k in range(1, code.size):
        for m in range(code.size - k):
            rows.append((f"|{m}><{m + k}| + h.c.", ladder_operator(code, m, k)))
    return rows


def code_table_text(code: CodeTable) -> List[str]:
    lines = [f"{code.kind.value} code, N={code.size}"]
    lines.extend(f"|{m}>  {entry}" for m, entry in enumerate(code.entries))
    return lines


def alternate_text(sequence: FlipSequence) -> List[str]:
    return [
        f"{sequence.kind.value} alternate representation, n={sequence.n_qubits}",
        " ".join(str(entry) for entry in sequence.entries),
    ]


def flip_string_text(kind: EncodingKind, n: int) -> List[str]:
    """Rows k, columns 2^j; blank where 2^j < k."""
    table = flip_string_table(kind, n)
    ends = [1 << j for j in range(n)]
    width = max(n, 4)
    lines = [
        f"{kind.value} flip strings, n={n}",
        "k".rjust(4) + "".join(str(end).rjust(width + 2) for end in ends),
    ]
    for k in range(1, ends[-1] + 1):
        cells = [table.get((k, end), "").rjust(width + 2) for end in ends]
        lines.append(str(k).rjust(4) + "".join(cells))
    return lines


def operator_text(code: CodeTable) -> List[str]:
    one_hot = code.kind is EncodingKind.one_hot
    rows = operator_table(code)
    width = max(len(name) for name, _ in rows)
    lines = [f"{code.kind.value} operators, N={code.size}"]
    lines.extend(
        f"{name.ljust(width)}  {render_operator(op, one_hot)}" for name, op in rows
    )
    return lines


def render_tables(kind: EncodingKind, size: int) -> str:
    """All tables for one encoding and N as plain text."""
    code = code_table(kind, size)
    blocks = [code_table_text(code)]
    if kind.is_compact:
        blocks.append(alternate_text(alternate_representation(code)))
        blocks.append(flip_string_text(kind, code.n_qubits))
    blocks.append(operator_text(code))
    return "\n\n".join("\n".join(block) for block in blocks)


def tables_json(kind: EncodingKind, size: int) -> Dict[str, Any]:
    """All tables for one encoding and N as a JSON-ready document."""
    code = code_table(kind, size)
    one_hot = kind is EncodingKind.one_hot
    document: Dict[str, Any] = {
        "encoding": kind.value,
        "N": size,
        "code": list(code.entries),
        "operators": [
            {
                "operator": name,
                "text": render_operator(op, one_hot),
                "pauli": op.to_json(),
            }
            for name, op in operator_table(code)
        ],
    }
    if kind.is_compact:
        document["alternate_representation"] = list(
            alternate_representation(code).entries
        )
        document["flip_strings"] = [
            {"k": k, "end": end, "pattern": pattern}
            for (k, end), pattern in sorted(flip_string_table(kind, code.n_qubits).items())
        ]
    return document
