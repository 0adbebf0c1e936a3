"""Standard-form linear programming on a dense tableau.

Solves min c'x subject to Ax = b, x >= 0 with the classic two-phase simplex
method. Pivoting follows Bland's lowest-index rule throughout, which rules out
cycling and makes every run reproducible. Phase I either produces a basic
feasible solution (a vertex of the feasible polytope) or an infeasibility
certificate nu with A'nu <= 0 and b'nu > 0, read off the final phase-I
multipliers. Redundant rows, where an artificial variable stays basic at zero
level and no original column can replace it, are detected and ignored.

All arithmetic is floating point with explicit tolerances; at the intended
problem sizes (tens of rows and columns) refactorization and exact arithmetic
buy nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalStall, Unbounded
from .tolerances import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True, eq=False)
class StandardLp:
    """Data (A, b, c) of min c'x s.t. Ax = b, x >= 0; c may be absent."""

    a_matrix: np.ndarray  # (p, q)
    b_vector: np.ndarray  # (p,)
    cost: np.ndarray | None = None  # (q,)

    def __post_init__(self):
        a = np.asarray(self.a_matrix, dtype=np.float64)
        b = np.asarray(self.b_vector, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError(f"A must be a nonempty 2-d matrix, got shape {a.shape}")
        if b.shape != (a.shape[0],):
            raise ValueError(f"b has shape {b.shape}, expected ({a.shape[0]},)")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("LP data must be finite")
        c = self.cost
        if c is not None:
            c = np.asarray(c, dtype=np.float64)
            if c.shape != (a.shape[1],):
                raise ValueError(f"cost has shape {c.shape}, expected ({a.shape[1]},)")
            if not np.all(np.isfinite(c)):
                raise ValueError("LP data must be finite")
            c = c.copy()
            c.flags.writeable = False
        a = a.copy()
        b = b.copy()
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a_matrix", a)
        object.__setattr__(self, "b_vector", b)
        object.__setattr__(self, "cost", c)

    @property
    def shape(self) -> tuple[int, int]:
        return self.a_matrix.shape


@dataclass(frozen=True, eq=False)
class BasicFeasibleSolution:
    """A vertex: Ax = b, x >= 0, entries outside the basis exactly zero."""

    x: np.ndarray
    basis: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class InfeasibilityCertificate:
    """Separating vector nu with A'nu <= 0 (within tolerance) and b'nu > 0."""

    nu: np.ndarray


def _default_budget(p: int, q: int) -> int:
    # Number of bases bounds the pivots under Bland's rule; clamp to keep the
    # guard meaningful when the combinatorial bound overflows practical time.
    return min(math.comb(p + q, min(p, q)), 10_000_000)


def _pivot(tableau: np.ndarray, rhs: np.ndarray, basis: list, row: int, col: int) -> None:
    pivot = tableau[row, col]
    tableau[row, :] /= pivot
    rhs[row] /= pivot
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row, :])
    rhs -= factors * rhs[row]
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0
    basis[row] = col


def _run_simplex(
    tableau: np.ndarray,
    rhs: np.ndarray,
    cost: np.ndarray,
    basis: list,
    tol: Tolerances,
    budget: int,
    phase_two: bool,
) -> int:
    """Minimize cost over the current tableau in place; returns pivots used.

    Entering column: lowest index with reduced cost below -tol.pivot.
    Leaving row: minimum ratio, ties broken by lowest basic variable index.
    """
    pivots = 0
    while True:
        reduced = cost - cost[basis] @ tableau
        entering = -1
        for j in range(tableau.shape[1]):
            if reduced[j] < -tol.pivot:
                entering = j
                break
        if entering < 0:
            return pivots
        column = tableau[:, entering]
        best_row = -1
        best_ratio = math.inf
        for r in range(tableau.shape[0]):
            if column[r] > tol.pivot:
                ratio = rhs[r] / column[r]
                if ratio < best_ratio - tol.pivot or (
                    abs(ratio - best_ratio) <= tol.pivot
                    and (best_row < 0 or basis[r] < basis[best_row])
                ):
                    best_ratio = ratio
                    best_row = r
        if best_row < 0:
            if phase_two:
                raise Unbounded(f"column {entering} has no blocking constraint")
            raise NumericalStall("phase-I descent with no blocking constraint")
        _pivot(tableau, rhs, basis, best_row, entering)
        pivots += 1
        if pivots > budget:
            raise NumericalStall(f"pivot budget {budget} exhausted")


def find_vertex(
    lp: StandardLp,
    tol: Tolerances = DEFAULT_TOLERANCES,
    pivot_budget: int | None = None,
):
    """Phase-I feasibility: a BasicFeasibleSolution or an InfeasibilityCertificate.

    Any cost on the LP is ignored. Raises NumericalStall when the phase-I
    objective lands between the feasibility threshold and the certificate
    margin, where neither outcome can be certified.
    """
    a = lp.a_matrix
    b = lp.b_vector
    p, q = a.shape
    if pivot_budget is None:
        pivot_budget = _default_budget(p, q)

    sign = np.where(b < 0.0, -1.0, 1.0)
    tableau = np.hstack([a * sign[:, None], np.eye(p)])
    rhs = b * sign
    cost = np.concatenate([np.zeros(q), np.ones(p)])
    basis = list(range(q, q + p))

    pivots = _run_simplex(tableau, rhs, cost, basis, tol, pivot_budget, phase_two=False)
    objective = float(cost[basis] @ rhs)

    if objective > tol.feasibility:
        # Multipliers y at the phase-I optimum: reduced cost of artificial i is
        # 1 - y_i, and nu = sign * y is the certificate in original row signs.
        reduced = cost - cost[basis] @ tableau
        nu = sign * (1.0 - reduced[q:])
        if objective <= tol.certificate:
            raise NumericalStall(
                f"phase-I objective {objective:.3e} below the certificate margin"
            )
        if np.max(a.T @ nu) > tol.certificate or float(b @ nu) <= tol.certificate:
            raise NumericalStall("phase-I multipliers do not verify as a certificate")
        nu.flags.writeable = False
        return InfeasibilityCertificate(nu=nu)

    # Drive leftover artificial variables out; rows that offer no original
    # pivot are redundant equations and are ignored from here on.
    for r in range(p):
        if basis[r] < q:
            continue
        entering = -1
        for j in range(q):
            if j not in basis and abs(tableau[r, j]) > tol.pivot:
                entering = j
                break
        if entering >= 0:
            _pivot(tableau, rhs, basis, r, entering)
            pivots += 1
            if pivots > pivot_budget:
                raise NumericalStall(f"pivot budget {pivot_budget} exhausted")

    x = np.zeros(q)
    out_basis = []
    for r in range(p):
        if basis[r] < q:
            value = rhs[r]
            x[basis[r]] = 0.0 if abs(value) < tol.zero_weight else value
            out_basis.append(basis[r])

    residual = float(np.max(np.abs(a @ x - b)))
    if residual > 1e-8 * (1.0 + float(np.max(np.abs(b)))) or float(np.min(x)) < -1e-10:
        raise NumericalStall(f"phase-I solution fails verification (residual {residual:.3e})")
    x.flags.writeable = False
    return BasicFeasibleSolution(x=x, basis=tuple(sorted(out_basis)))


def optimize(
    lp: StandardLp,
    start: BasicFeasibleSolution,
    tol: Tolerances = DEFAULT_TOLERANCES,
    pivot_budget: int | None = None,
) -> BasicFeasibleSolution:
    """Phase II from a known vertex: minimize lp.cost with Bland's rule.

    Raises Unbounded when a descent direction has no blocking constraint and
    ValueError when the start is not a basic feasible solution of ``lp``.
    """
    if lp.cost is None:
        raise ValueError("optimize needs lp.cost")
    a = lp.a_matrix
    b = lp.b_vector
    p, q = a.shape
    if pivot_budget is None:
        pivot_budget = _default_budget(p, q)

    tableau = a.astype(np.float64).copy()
    rhs = b.astype(np.float64).copy()
    basis_rows: list = [None] * p
    taken = set()

    # Pivot the start basis in, one distinct row per basis column.
    for col in start.basis:
        candidates = [r for r in range(p) if r not in taken]
        if not candidates:
            raise ValueError("start basis has more columns than rows")
        row = max(candidates, key=lambda r: abs(tableau[r, col]))
        if abs(tableau[row, col]) <= tol.pivot:
            raise ValueError("start basis columns are linearly dependent")
        fake_basis = list(range(p))  # placeholder labels, fixed below
        _pivot(tableau, rhs, fake_basis, row, col)
        basis_rows[row] = col
        taken.add(row)

    # Unpivoted rows must be satisfied (rhs zero); extend degenerately when a
    # usable column exists, otherwise the row is redundant and dropped.
    keep = []
    for r in range(p):
        if basis_rows[r] is not None:
            keep.append(r)
            continue
        if abs(rhs[r]) > 1e-8 * (1.0 + float(np.max(np.abs(b)))):
            raise ValueError("start does not satisfy Ax = b on its basis")
        entering = -1
        for j in range(q):
            if j not in basis_rows and abs(tableau[r, j]) > tol.pivot:
                entering = j
                break
        if entering >= 0:
            fake_basis = list(range(p))
            _pivot(tableau, rhs, fake_basis, r, entering)
            basis_rows[r] = entering
            keep.append(r)

    tableau = tableau[keep, :]
    rhs = np.maximum(rhs[keep], 0.0)  # clamp the -1e-10 jitter a BFS may carry
    basis = [basis_rows[r] for r in keep]

    _run_simplex(tableau, rhs, np.asarray(lp.cost), basis, tol, pivot_budget, phase_two=True)

    x = np.zeros(q)
    for r, col in enumerate(basis):
        value = rhs[r]
        x[col] = 0.0 if abs(value) < tol.zero_weight else value
    x.flags.writeable = False
    return BasicFeasibleSolution(x=x, basis=tuple(sorted(basis)))
