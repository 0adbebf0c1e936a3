import math

import numpy as np
import pytest

from povmdecomp import validate_povm

KET0 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
KET1 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
PLUS = 0.5 * np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
MINUS = 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]], dtype=complex)

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def equatorial_projector(theta: float) -> np.ndarray:
    """Rank-1 qubit projector with Bloch vector (cos t, sin t, 0)."""
    return 0.5 * (np.eye(2) + math.cos(theta) * PAULI_X + math.sin(theta) * PAULI_Y)


def pentagon_elements() -> list:
    return [0.4 * equatorial_projector(2.0 * math.pi * k / 5.0) for k in range(5)]


def trine_elements() -> list:
    return [(2.0 / 3.0) * equatorial_projector(2.0 * math.pi * k / 3.0) for k in range(3)]


@pytest.fixture
def bb84_povm():
    return validate_povm([0.5 * KET0, 0.5 * KET1, 0.5 * PLUS, 0.5 * MINUS])


@pytest.fixture
def pentagon_povm():
    return validate_povm(pentagon_elements())


@pytest.fixture
def trine_povm():
    return validate_povm(trine_elements())


@pytest.fixture
def coin_split_povm():
    """Full-rank two-outcome POVM {1/2 |0><0|, 1/2 |0><0| + |1><1|}."""
    return validate_povm([0.5 * KET0, 0.5 * KET0 + KET1])
