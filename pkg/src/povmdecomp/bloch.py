"""Generalized Bloch coordinates for unit-trace Hermitian operators.

The coordinate frame is the generalized Gell-Mann basis of SU(d) generators,
normalized to tr(g_i g_j) = 2 delta_ij, in the fixed order

    symmetric off-diagonal   (j, k), j < k, row-major
    antisymmetric off-diagonal, same pair order
    diagonal                 l = 1 .. d-1

so that d = 2 yields the Pauli matrices (x, y, z). Coordinates of an operator
E are v_j = tr(E g_j) and the inverse map is E = I/d + (1/2) sum_j v_j g_j.
Pure states sit on the sphere of radius sqrt(2(d-1)/d). Fixing the order makes
coordinate vectors (and therefore LP columns downstream) reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionTooSmall, LengthMismatch, NotUnitTrace
from .linalg import hermitize
from .tolerances import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """The d*d - 1 SU(d) generators for one dimension, stacked along axis 0."""

    dim: int
    matrices: np.ndarray  # (d*d - 1, d, d) complex, read-only

    def __len__(self) -> int:
        return self.matrices.shape[0]


@lru_cache(maxsize=None)
def generator_basis(dim: int) -> GeneratorBasis:
    """Build (and cache) the generator basis for dimension ``dim``."""
    if dim < 2:
        raise DimensionTooSmall(f"need dimension >= 2, got {dim}")
    mats = []
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=np.complex128)
            sym[j, k] = 1.0
            sym[k, j] = 1.0
            mats.append(sym)
    for j in range(dim):
        for k in range(j + 1, dim):
            asym = np.zeros((dim, dim), dtype=np.complex128)
            asym[j, k] = -1.0j
            asym[k, j] = 1.0j
            mats.append(asym)
    for l in range(1, dim):
        diag = np.zeros(dim, dtype=np.complex128)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(math.sqrt(2.0 / (l * (l + 1))) * np.diag(diag))
    stacked = np.stack(mats)
    stacked.flags.writeable = False
    return GeneratorBasis(dim=dim, matrices=stacked)


def to_bloch(
    element,
    basis: GeneratorBasis | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """Coordinates v_j = tr(E g_j) of a unit-trace Hermitian operator.

    Raises NotUnitTrace when tr(E) strays from 1 by more than 1e-9.
    """
    e = hermitize(element, tol)
    d = e.shape[0]
    trace = float(e.trace().real)
    if abs(trace - 1.0) > 1e-9:
        raise NotUnitTrace(f"trace is {trace!r}, expected 1")
    if basis is None:
        basis = generator_basis(d)
    if basis.dim != d:
        raise LengthMismatch(f"basis is for dimension {basis.dim}, operator has {d}")
    components = np.einsum("kij,ji->k", basis.matrices, e).real
    components.flags.writeable = False
    return components


def from_bloch(components, basis: GeneratorBasis) -> np.ndarray:
    """Operator I/d + (1/2) sum_j v_j g_j for a coordinate vector v."""
    v = np.asarray(components, dtype=np.float64)
    d = basis.dim
    if v.ndim != 1 or v.shape[0] != d * d - 1:
        raise LengthMismatch(
            f"expected {d * d - 1} components for dimension {d}, got shape {v.shape}"
        )
    e = np.eye(d, dtype=np.complex128) / d + 0.5 * np.tensordot(v, basis.matrices, axes=1)
    return hermitize(e)


def pure_state_norm(dim: int) -> float:
    """Bloch radius sqrt(2(d-1)/d) shared by all pure states in dimension d."""
    if dim < 2:
        raise DimensionTooSmall(f"need dimension >= 2, got {dim}")
    return math.sqrt(2.0 * (dim - 1) / dim)
