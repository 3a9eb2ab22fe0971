"""Band-diagonal neutron-nucleus Hamiltonians on qubits, solved with VQE."""

from enum import Enum

APP_NAME = "nucleus-vqe"


class EncodingKind(str, Enum):
    """Enum of the Fock-state to qubit encodings."""

    one_hot = "one-hot"
    binary = "binary"
    gray = "gray"

    @property
    def is_compact(self) -> bool:
        """Whether the encoding uses log2(N) qubits."""
        # noqa: DAR201
        return self is not EncodingKind.one_hot


class Scheme(str, Enum):
    """Enum of Pauli term grouping schemes."""

    qc = "qc"
    dgc = "dgc"


class SimulationMode(str, Enum):
    """Enum of energy evaluation modes."""

    exact = "exact"
    shot = "shot"
    noisy = "noisy"


class Method(str, Enum):
    """Enum of optimizers a stage can run."""

    spsa = "spsa"
    gd = "gd"


class GradientMode(str, Enum):
    """Enum of gradient estimators used by gradient descent."""

    parameter_shift = "parameter-shift"
    central_difference = "central-difference"


class RadialPower(str, Enum):
    """How powers of the r² matrix are taken.

    `padded` builds r² in a larger space before raising it to a power so the
    retained block is exact; `truncated` raises the N×N matrix itself.
    """

    padded = "padded"
    truncated = "truncated"
