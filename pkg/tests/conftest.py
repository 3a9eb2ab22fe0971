from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

test_dir = Path(__file__).parent

sys.path.append(str(test_dir.parent))

from nucleus_vqe.hamiltonian import assemble  # noqa: E402
from nucleus_vqe.systems import preset  # noqa: E402

# The tabulated n+alpha potential coefficients are printed rounded, and no
# single hbar*c in 197.0..197.7 MeV fm brings every n+alpha table energy within
# half a unit of its last printed digit. 1e-2 MeV is what the rounded
# coefficients support.
ALPHA_TOLERANCE = 1e-2


@pytest.fixture(scope="session")
def worked_hamiltonian() -> np.ndarray:
    """H_{4,2} of n+16C, the matrix behind the printed N=4 listings."""
    return assemble(preset("n+16C", 4, 2))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_symmetric(
    rng: np.random.Generator, size: int, reach: int | None = None
) -> np.ndarray:
    matrix = rng.normal(size=(size, size))
    matrix = (matrix + matrix.T) / 2
    if reach is not None:
        rows, cols = np.indices(matrix.shape)
        matrix[np.abs(rows - cols) > reach] = 0.0
    return matrix


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    state = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return state / np.linalg.norm(state)
