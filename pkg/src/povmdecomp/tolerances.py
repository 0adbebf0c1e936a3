"""One bundle of numerical tolerances threaded through the whole pipeline."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by the linear algebra, LP and decomposition layers.

    hermiticity       allowed asymmetry absorbed by symmetrization
    eigen_convergence off-diagonal Frobenius target of the Jacobi sweep (relative)
    psd               eigenvalues above -psd count as nonnegative
    rank              relative eigenvalue cutoff for rank counting
    completeness      elementwise residual allowed in the identity sum
    zero_weight       weights and coefficients below this are treated as exact zeros
    pivot             smallest tableau entry accepted as a simplex pivot
    feasibility       phase-I artificial objective at or below this means feasible
    certificate       margin required of an infeasibility certificate (b'nu above it)
    independence      singular value cutoff for linear independence of elements
    dedup             elementwise distance under which two projectors are the same
    """

    hermiticity: float = 1e-12
    eigen_convergence: float = 1e-13
    psd: float = 1e-9
    rank: float = 1e-9
    completeness: float = 1e-9
    zero_weight: float = 1e-10
    pivot: float = 1e-9
    feasibility: float = 1e-9
    certificate: float = 1e-8
    independence: float = 1e-9
    dedup: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()
