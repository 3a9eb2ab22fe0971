from __future__ import annotations

import itertools

import numpy as np
import pytest
from conftest import random_symmetric

from nucleus_vqe.errors import ConfigError, ContractViolation
from nucleus_vqe.pauli import (
    PauliString,
    PauliSum,
    Phase,
    commutes,
    dense_matrix,
    multiply,
    pauli_decompose,
    projector_decompose,
    qubitwise_commutes,
    sparse_matrix,
)


def all_strings(n: int) -> list[str]:
    return ["".join(letters) for letters in itertools.product("IXYZ", repeat=n)]


class TestPauliString:
    @pytest.mark.parametrize("label", ("", "IXA", "xz"))
    def test_invalid_letters(self, label: str):
        with pytest.raises(ConfigError):
            PauliString(label)

    def test_masks(self):
        pauli = PauliString("XYZI")
        assert pauli.x_mask == 0b1100
        assert pauli.z_mask == 0b0110
        assert PauliString.from_masks(4, 0b1100, 0b0110) == pauli

    def test_from_letters(self):
        assert str(PauliString.from_letters(4, {0: "X", 3: "X"})) == "XIIX"
        assert str(PauliString.single(3, 1, "Z")) == "IZI"

    def test_support(self):
        assert PauliString("XZYI").support("XY") == (0, 2)
        assert PauliString("XZYI").support() == (0, 1, 2)


class TestMultiply:
    @pytest.mark.parametrize(
        ("p", "q", "phase", "product"),
        (
            ("X", "Y", Phase.i, "Z"),
            ("Y", "X", Phase.minus_i, "Z"),
            ("IX", "IX", Phase.one, "II"),
            ("XZ", "ZX", Phase.one, "YY"),
            ("XX", "YY", Phase.minus_one, "ZZ"),
        ),
    )
    def test_products(self, p: str, q: str, phase: Phase, product: str):
        assert multiply(p, q) == (phase, PauliString(product))

    @pytest.mark.parametrize(("p", "q"), itertools.product(all_strings(2), repeat=2))
    def test_matches_dense_product(self, p: str, q: str):
        phase, product = multiply(p, q)
        np.testing.assert_allclose(
            dense_matrix(p) @ dense_matrix(q), phase.as_complex * dense_matrix(product)
        )

    def test_mismatched_lengths(self):
        with pytest.raises(ConfigError):
            multiply("X", "XX")


class TestCommutation:
    def test_xx_yy(self):
        assert commutes("XX", "YY")
        assert not qubitwise_commutes("XX", "YY")

    def test_qubitwise_example(self):
        assert qubitwise_commutes("XIZ", "XZI")

    @pytest.mark.parametrize("p", all_strings(2))
    def test_self(self, p: str):
        assert commutes(p, p) and qubitwise_commutes(p, p)

    @pytest.mark.parametrize(("p", "q"), itertools.product(all_strings(2), repeat=2))
    def test_matches_dense_commutator(self, p: str, q: str):
        a, b = dense_matrix(p), dense_matrix(q)
        assert commutes(p, q) == np.allclose(a @ b, b @ a)


class TestPauliSum:
    def test_prunes_and_sorts(self):
        total = PauliSum(2, {"ZZ": 1.0, "XI": 2.0, "IZ": 1e-13, "II": 0.5})
        assert total.labels == ["II", "XI", "ZZ"]
        assert "IZ" not in total

    def test_repeated_strings_are_summed(self):
        total = PauliSum.from_pairs(1, [("X", 1.0), ("X", 0.5), ("Z", 1.0), ("Z", -1.0)])
        assert total == PauliSum(1, {"X": 1.5})

    def test_complex_coefficient_rejected(self):
        with pytest.raises(ContractViolation):
            PauliSum(1, {"X": 1j})

    def test_wrong_length(self):
        with pytest.raises(ConfigError):
            PauliSum(2, {"XXX": 1.0})

    def test_arithmetic(self):
        a = PauliSum(2, {"XX": 1.0, "ZI": 2.0})
        b = PauliSum(2, {"XX": -1.0, "IZ": 1.0})
        assert a + b == PauliSum(2, {"ZI": 2.0, "IZ": 1.0})
        assert a - a == PauliSum(2)
        assert 2 * a == PauliSum(2, {"XX": 2.0, "ZI": 4.0})

    def test_isclose(self):
        a = PauliSum(1, {"X": 1.0})
        assert a.isclose(PauliSum(1, {"X": 1.0 + 1e-12}))
        assert not a.isclose(PauliSum(1, {"X": 1.0, "Z": 1e-3}))

    def test_reverse_qubits(self):
        total = PauliSum(3, {"XIZ": 1.0, "YYI": -2.0})
        assert total.reverse_qubits() == PauliSum(3, {"ZIX": 1.0, "IYY": -2.0})

    def test_listing_rounds_half_even(self):
        total = PauliSum(2, {"II": 0.0125, "XX": -8.80126, "ZZ": 7.0})
        assert total.listing(3) == ["+0.012 II", "-8.801 XX", "+7.000 ZZ"]

    def test_json(self):
        total = PauliSum(2, {"ZX": 7.95913, "II": 33.5})
        document = total.to_json()
        assert document == {
            "n": 2,
            "terms": [{"pauli": "II", "coeff": 33.5}, {"pauli": "ZX", "coeff": 7.95913}],
        }
        assert PauliSum.from_json(document) == total

    def test_malformed_json(self):
        with pytest.raises(ConfigError):
            PauliSum.from_json({"n": 2})


class TestDense:
    def test_identity(self):
        np.testing.assert_allclose(dense_matrix("III"), np.eye(8))

    def test_z(self):
        np.testing.assert_allclose(dense_matrix("Z"), np.diag([1, -1]))

    def test_left_letter_is_most_significant(self):
        np.testing.assert_allclose(
            dense_matrix("XZ"), np.kron(dense_matrix("X"), dense_matrix("Z"))
        )

    def test_y(self):
        np.testing.assert_allclose(dense_matrix("Y"), [[0, -1j], [1j, 0]])

    def test_too_many_qubits(self):
        with pytest.raises(ConfigError):
            dense_matrix("I" * 11)

    def test_sparse_matches_dense(self, rng: np.random.Generator):
        total = PauliSum(3, {label: rng.normal() for label in ("XYY", "ZIZ", "IXI", "III")})
        np.testing.assert_allclose(sparse_matrix(total).toarray(), dense_matrix(total))


class TestDecompose:
    def test_identity(self):
        assert pauli_decompose(np.eye(4)) == PauliSum(2, {"II": 1.0})

    @pytest.mark.parametrize("n", range(1, 5))
    def test_round_trip(self, rng: np.random.Generator, n: int):
        # real sums must hold an even number of Y letters to be Hermitian
        labels = [s for s in all_strings(n) if s.count("Y") % 2 == 0]
        chosen = rng.choice(labels, size=min(6, len(labels)), replace=False)
        total = PauliSum(n, {str(label): rng.uniform(-2, 2) for label in chosen})
        assert pauli_decompose(dense_matrix(total)).isclose(total, atol=1e-10)

    @pytest.mark.parametrize("n", range(1, 5))
    def test_reproduces_matrix(self, rng: np.random.Generator, n: int):
        matrix = random_symmetric(rng, 2**n)
        np.testing.assert_allclose(dense_matrix(pauli_decompose(matrix)), matrix, atol=1e-10)

    def test_non_hermitian(self):
        with pytest.raises(ContractViolation):
            pauli_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_not_power_of_two(self):
        with pytest.raises(ContractViolation):
            pauli_decompose(np.eye(3))


class TestProjectors:
    def test_zero_on_one_qubit(self):
        assert projector_decompose(0, 1) == PauliSum(1, {"I": 0.5, "Z": 0.5})

    @pytest.mark.parametrize(("index", "n"), [(i, n) for n in range(1, 5) for i in range(2**n)])
    def test_matches_elementary_matrix(self, index: int, n: int):
        expected = np.zeros((2**n, 2**n))
        expected[index, index] = 1.0
        np.testing.assert_allclose(dense_matrix(projector_decompose(index, n)), expected)

    def test_projectors_sum_to_identity(self):
        total = PauliSum(3)
        for index in range(8):
            total = total + projector_decompose(index, 3)
        assert total.isclose(PauliSum.identity(3))

    def test_projector_on_six(self):
        projector = projector_decompose(6, 3)
        assert projector["ZZI"] == pytest.approx(0.125)
        assert len(projector) == 8

    def test_out_of_range(self):
        with pytest.raises(ConfigError):
            projector_decompose(4, 2)
