"""Dense complex Hermitian matrix arithmetic.

Everything downstream manipulates measurement elements as Hermitian matrices,
so this module owns their construction discipline (symmetrize, forbid NaN/Inf,
keep diagonals real) and provides a cyclic Jacobi eigendecomposition with a
fixed sweep order and a fixed eigenvector phase convention. The fixed
conventions make every result bit-reproducible for bit-identical input, which
the decomposition layers rely on.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import IterationLimitExceeded
from .tolerances import DEFAULT_TOLERANCES, Tolerances

MAX_JACOBI_SWEEPS = 100


class EigenDecomposition(NamedTuple):
    """Spectral decomposition M = V diag(w) V† with w ascending.

    eigenvalues:  real array of shape (d,), sorted ascending (stable sort)
    eigenvectors: complex array of shape (d, d); column j belongs to w[j],
                  scaled so its first component above 1e-12 is real positive
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitize(matrix, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Return the Hermitian part (M + M†)/2 as a read-only complex array.

    Symmetrization absorbs harmless I/O rounding instead of rejecting it; the
    diagonal imaginary part is forced to exactly zero. Non-square or
    non-finite input is rejected.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    h = 0.5 * (m + m.conj().T)
    np.fill_diagonal(h, h.diagonal().real)
    h.flags.writeable = False
    return h


def _offdiag_norm(a: np.ndarray) -> float:
    # Direct sum over off-diagonal entries; the sqrt(|A|^2 - |diag|^2) shortcut
    # cancels catastrophically once the off-diagonal part is small.
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Apply one complex Jacobi rotation zeroing a[p, q], accumulating into v."""
    apq = a[p, q]
    phase = apq / abs(apq)
    theta = (a[q, q].real - a[p, p].real) / (2.0 * abs(apq))
    sgn = 1.0 if theta >= 0 else -1.0
    t = -sgn / (abs(theta) + math.hypot(theta, 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    cp = a[:, p].copy()
    cq = a[:, q].copy()
    a[:, p] = c * cp + s * np.conj(phase) * cq
    a[:, q] = -s * phase * cp + c * cq
    rp = a[p, :].copy()
    rq = a[q, :].copy()
    a[p, :] = c * rp + s * phase * rq
    a[q, :] = -s * np.conj(phase) * rp + c * rq
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp + s * np.conj(phase) * vq
    v[:, q] = -s * phase * vp + c * vq


def eigendecompose(
    matrix,
    tol: Tolerances = DEFAULT_TOLERANCES,
    max_sweeps: int = MAX_JACOBI_SWEEPS,
) -> EigenDecomposition:
    """Full spectral decomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Sweeps run over index pairs (p, q), p < q, in row-major order until the
    off-diagonal Frobenius norm drops below ``tol.eigen_convergence`` scaled by
    max(1, |M|_F). Raises IterationLimitExceeded when the budget runs out,
    which signals pathological input rather than a tight budget: quadratic
    convergence makes the default budget generous for any sane dimension.
    """
    a = np.array(hermitize(matrix, tol))
    d = a.shape[0]
    v = np.eye(d, dtype=np.complex128)
    target = tol.eigen_convergence * max(1.0, float(np.linalg.norm(a)))
    skip = 0.1 * target / max(1, d * d)

    sweeps = 0
    while _offdiag_norm(a) > target:
        if sweeps >= max_sweeps:
            raise IterationLimitExceeded(
                f"off-diagonal norm {_offdiag_norm(a):.3e} still above "
                f"{target:.3e} after {max_sweeps} sweeps"
            )
        for p in range(d - 1):
            for q in range(p + 1, d):
                if abs(a[p, q]) > skip:
                    _rotate(a, v, p, q)
        sweeps += 1

    eigenvalues = a.diagonal().real.copy()
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = v[:, order]

    # Phase convention: first component with magnitude above 1e-12 is made
    # real positive. A unit vector always has one (max component >= 1/sqrt(d)).
    for j in range(d):
        col = vectors[:, j]
        k = int(np.flatnonzero(np.abs(col) > 1e-12)[0])
        vectors[:, j] = col * np.conj(col[k] / abs(col[k]))
        vectors[k, j] = vectors[k, j].real

    eigenvalues.flags.writeable = False
    vectors.flags.writeable = False
    return EigenDecomposition(eigenvalues, vectors)


def is_psd(matrix, tol: float = 1e-9) -> bool:
    """True iff the smallest eigenvalue is at least -tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    eigenvalues, _ = eigendecompose(matrix)
    return bool(eigenvalues[0] >= -tol)


def matrix_rank(matrix, tol: float = 1e-9) -> int:
    """Count eigenvalues with |w| above tol * max(1, |w|_max)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    eigenvalues, _ = eigendecompose(matrix)
    cutoff = tol * max(1.0, float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 1.0)
    return int(np.count_nonzero(np.abs(eigenvalues) > cutoff))
