"""Random POVM generators used by tests, benchmarks and examples."""

from __future__ import annotations

import numpy as np

from .linalg import eigendecompose, hermitize
from .povm import WeightedPovm, validate_povm
from .tolerances import DEFAULT_TOLERANCES, Tolerances


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """A Haar-random pure state vector of dimension ``dim``."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """A Haar-random unitary via QR of a complex Gaussian, phases fixed."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_rank1_povm(
    dim: int,
    n_outcomes: int,
    rng: np.random.Generator,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> WeightedPovm:
    """A random rank-1 POVM with exactly ``n_outcomes`` outcomes.

    Samples n - d weighted Haar-random projectors scaled to leave a strictly
    positive remainder, then completes with the remainder's eigenbasis (an
    orthogonal d-outcome vertex). n = d degenerates to a random orthonormal
    projective measurement.
    """
    if n_outcomes < dim:
        raise ValueError(f"need at least {dim} outcomes, got {n_outcomes}")
    free = n_outcomes - dim
    raw = []
    if free:
        projectors = [np.outer(v, v.conj()) for v in (haar_state(dim, rng) for _ in range(free))]
        weights = rng.uniform(0.5, 1.5, size=free)
        total = sum(w * p for w, p in zip(weights, projectors))
        top = float(eigendecompose(hermitize(total)).eigenvalues[-1])
        margin = rng.uniform(0.1, 0.5)
        scale = (1.0 - margin) / top
        raw = [scale * w * p for w, p in zip(weights, projectors)]
        remainder = np.eye(dim) - sum(raw)
    else:
        remainder = np.eye(dim, dtype=np.complex128)

    values, vectors = eigendecompose(hermitize(remainder), tol)
    for j in range(dim):
        raw.append(values[j] * np.outer(vectors[:, j], vectors[:, j].conj()))
    return validate_povm(raw, dim=dim, tol=tol)


def random_full_rank_povm(
    dim: int,
    n_outcomes: int,
    rng: np.random.Generator,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> WeightedPovm:
    """A random POVM whose elements are generically full rank.

    Random positive matrices M_i are whitened by S^{-1/2} with S = sum_i M_i,
    which makes them sum to the identity without disturbing their rank.
    """
    if n_outcomes < 2:
        raise ValueError("need at least 2 outcomes")
    mats = []
    for _ in range(n_outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        mats.append(g @ g.conj().T)
    total = hermitize(sum(mats))
    values, vectors = eigendecompose(total, tol)
    inv_sqrt = (vectors / np.sqrt(values)) @ vectors.conj().T
    raw = [inv_sqrt @ m @ inv_sqrt for m in mats]
    return validate_povm(raw, dim=dim, tol=tol)
