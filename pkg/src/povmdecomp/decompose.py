"""Convex decomposition of a POVM into extremal rank-1 POVMs.

The weights of a rank-1 POVM with unit-trace elements E_i satisfy exactly two
linear conditions: they sum to the dimension and their Bloch-weighted sum
vanishes. Stacking both gives the equality system A x = b with columns
(bloch(E_i), 1) and b = (0, ..., 0, d), whose nonnegative solutions form a
polytope; its vertices are precisely the extremal sub-POVMs available from the
element set. Decomposition repeatedly finds a vertex x, peels it off with the
largest probability p = min_i a_i / x_i keeping the remainder nonnegative, and
renormalizes, shrinking the coefficient support every round until the
remainder is itself a vertex (p = 1).

Prepared outcomes that share one projector (duplicate columns) are fused for
the linear program and split back proportionally to their prepared weights
when reconstructing, since only classical relabeling distinguishes them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bloch import generator_basis, to_bloch
from .errors import InternalInfeasible, NumericalStall
from .linalg import matrix_rank
from .povm import PreparedPovm, RelabelMap, WeightedPovm, aggregate_by_target, prepare_rank1
from .simplex import BasicFeasibleSolution, InfeasibilityCertificate, StandardLp, find_vertex
from .tolerances import DEFAULT_TOLERANCES, Tolerances


class ExtremalityStatus(enum.Enum):
    EXTREMAL = "Extremal"
    NOT_RANK_ONE = "NotRankOne"
    LINEARLY_DEPENDENT_ELEMENTS = "LinearlyDependentElements"
    MORE_THAN_D_SQUARED_OUTCOMES = "MoreThanDSquaredOutcomes"


@dataclass(frozen=True, eq=False)
class ExtremalityReport:
    is_extremal: bool
    reason: ExtremalityStatus
    witness: np.ndarray | None = None  # sub-POVM coefficients on a strict support subset


class Term(NamedTuple):
    """One convex factor: probability times an extremal rank-1 POVM."""

    probability: float
    povm: WeightedPovm


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Result of decomposing a POVM: sum_k p_k * (term k), plus relabeling data.

    Term outcome labels are prepared-outcome indices (group representatives
    where duplicates were fused). ``groups`` lists, per representative, all
    prepared outcomes sharing its projector; reconstruction splits a term
    outcome across its group proportionally to the prepared weights and sends
    each share to relabel[l].
    """

    dim: int
    prepared: PreparedPovm
    groups: tuple[tuple[int, ...], ...]
    terms: tuple[Term, ...]

    @property
    def relabel(self) -> RelabelMap:
        return self.prepared.relabel

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(t.probability for t in self.terms)


def lp_from_elements(elements, dim: int) -> StandardLp:
    """Equality system over coefficient space: columns (bloch(E_i), 1), b = (0, d)."""
    basis = generator_basis(dim)
    columns = [np.concatenate([to_bloch(e, basis), [1.0]]) for e in elements]
    a = np.stack(columns, axis=1)
    b = np.zeros(dim * dim)
    b[-1] = float(dim)
    return StandardLp(a_matrix=a, b_vector=b)


def build_feasibility_lp(prepared: PreparedPovm) -> StandardLp:
    """The coefficient polytope of a prepared (rank-1) POVM, one column per outcome."""
    return lp_from_elements(prepared.povm.elements, prepared.povm.dim)


def _peel(coeffs: np.ndarray, x: np.ndarray, tol: Tolerances):
    """Split coeffs = p*x + (1-p)*residual with the largest admissible p.

    Indices attaining the minimum ratio are snapped to exactly zero, so the
    residual support is strictly smaller; p = 1 (empty residual) means coeffs
    was the vertex itself.
    """
    support = np.flatnonzero(x > tol.zero_weight)
    ratios = coeffs[support] / x[support]
    p = float(np.min(ratios))
    if p > 1.0:
        p = 1.0
    if 1.0 - p < tol.zero_weight:
        return 1.0, np.zeros_like(coeffs)
    residual = (coeffs - p * x) / (1.0 - p)
    residual[support[ratios <= p * (1.0 + 1e-12)]] = 0.0
    residual[np.abs(residual) < tol.zero_weight] = 0.0
    if float(np.min(residual)) < -1e-8:
        raise NumericalStall("peeled residual went significantly negative")
    np.maximum(residual, 0.0, out=residual)
    return p, residual


def extract_step(coeffs, lp: StandardLp, tol: Tolerances = DEFAULT_TOLERANCES):
    """One round: find a vertex on the current support and peel it off.

    Returns (x, p, residual) where x is the vertex embedded in full coefficient
    space, p the extraction probability, and residual the renormalized
    remainder (all zeros when p = 1, in which case x equals coeffs).
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    support = np.flatnonzero(coeffs > tol.zero_weight)
    sub = StandardLp(a_matrix=lp.a_matrix[:, support], b_vector=lp.b_vector)
    found = find_vertex(sub, tol)
    if isinstance(found, InfeasibilityCertificate):
        raise InternalInfeasible(
            "coefficient support became infeasible; upstream state is corrupt"
        )
    x = np.zeros_like(coeffs)
    x[support] = found.x
    p, residual = _peel(coeffs, x, tol)
    if p >= 1.0:
        x = coeffs.copy()
    return x, p, residual


def _group_duplicates(elements: np.ndarray, tol: Tolerances) -> list[list[int]]:
    """Group outcome indices whose projectors coincide elementwise within tol.dedup."""
    groups: list[list[int]] = []
    for i in range(elements.shape[0]):
        for group in groups:
            if np.max(np.abs(elements[i] - elements[group[0]])) <= tol.dedup:
                group.append(i)
                break
        else:
            groups.append([i])
    return groups


def decompose(povm: WeightedPovm, tol: Tolerances = DEFAULT_TOLERANCES) -> Decomposition:
    """Decompose a POVM into extremal rank-1 factors plus a relabeling map.

    The factor count never exceeds (number of prepared outcomes) - n + 1 where
    n is the outcome count of the last factor, and each factor has between d
    and d*d outcomes. The returned probabilities sum to one and reconstruct
    the input through the relabel map (see ``reconstruct``).
    """
    prepared = prepare_rank1(povm, tol)
    return _decompose_prepared(prepared, tol)


def _merged_problem(prepared: PreparedPovm, tol: Tolerances):
    groups = [tuple(g) for g in _group_duplicates(prepared.povm.elements, tol)]
    reps = [g[0] for g in groups]
    elements = prepared.povm.elements[reps]
    coeffs = np.array([float(np.sum(prepared.povm.weights[list(g)])) for g in groups])
    lp = lp_from_elements(elements, prepared.povm.dim)
    return groups, reps, elements, coeffs, lp


def _term_from_vertex(
    dim: int, elements: np.ndarray, reps: list[int], x: np.ndarray, tol: Tolerances
) -> WeightedPovm:
    support = np.flatnonzero(x > tol.zero_weight)
    weights = x[support].copy()
    weights.flags.writeable = False
    return WeightedPovm(
        dim=dim,
        weights=weights,
        elements=elements[support],
        labels=tuple(reps[j] for j in support),
    )


def _decompose_prepared(prepared: PreparedPovm, tol: Tolerances) -> Decomposition:
    groups, reps, elements, coeffs, lp = _merged_problem(prepared, tol)
    dim = prepared.povm.dim

    terms = []
    remaining = 1.0
    for _ in range(len(reps) + 1):
        x, p, residual = extract_step(coeffs, lp, tol)
        if p >= 1.0:
            terms.append(Term(remaining, _term_from_vertex(dim, elements, reps, x, tol)))
            break
        terms.append(Term(remaining * p, _term_from_vertex(dim, elements, reps, x, tol)))
        remaining *= 1.0 - p
        coeffs = residual
    else:
        raise NumericalStall("support did not shrink to a vertex")

    return Decomposition(dim=dim, prepared=prepared, groups=tuple(groups), terms=tuple(terms))


def expand_term(decomposition: Decomposition, term: Term):
    """Flatten one term to (weight, projector, prepared_label, original_label) rows.

    Fused outcomes are split across their duplicate group proportionally to
    the prepared weights, so the rows carry per-prepared-outcome shares.
    """
    prepared = decomposition.prepared
    group_of = {g[0]: g for g in decomposition.groups}
    rows = []
    for weight, element, rep in zip(term.povm.weights, term.povm.elements, term.povm.labels):
        group = group_of[rep]
        total = float(np.sum(prepared.povm.weights[list(group)]))
        for l in group:
            share = float(weight) * float(prepared.povm.weights[l]) / total
            rows.append((share, prepared.povm.elements[l], l, prepared.relabel[l]))
    return rows


def reconstruct(decomposition: Decomposition, n_original: int | None = None) -> np.ndarray:
    """Recombine sum_k p_k * (term k pushed through the relabel map).

    Returns grids indexed by original outcome position, comparable directly
    against the validated input's weighted elements.
    """
    if n_original is None:
        n_original = max(decomposition.relabel.targets) + 1
    dim = decomposition.dim
    out = np.zeros((n_original, dim, dim), dtype=np.complex128)
    for term in decomposition.terms:
        rows = expand_term(decomposition, term)
        out += term.probability * aggregate_by_target(
            [r[0] for r in rows], [r[1] for r in rows], [r[3] for r in rows], n_original
        )
    return out


def check_extremal(povm: WeightedPovm, tol: Tolerances = DEFAULT_TOLERANCES) -> ExtremalityReport:
    """Decide extremality of a POVM by the rank-1 independence criterion.

    Extremal iff every element is rank-1 and the weighted elements, flattened
    to real vectors (Bloch coordinates plus trace), are linearly independent;
    independence forces the outcome count to be at most d*d. For dependent
    element sets a witness sub-POVM on a strictly smaller support is returned
    (it always exists: a vertex of the coefficient polytope cannot use all of
    a dependent column set).
    """
    for i in range(povm.n_outcomes):
        if matrix_rank(povm.elements[i], tol.rank) != 1:
            return ExtremalityReport(False, ExtremalityStatus.NOT_RANK_ONE)

    lp = lp_from_elements(povm.elements, povm.dim)
    stacked = (lp.a_matrix * povm.weights[None, :]).T  # rows: a_i * (bloch(E_i), 1)
    singular = np.linalg.svd(stacked, compute_uv=False)
    cutoff = tol.independence * max(1.0, float(singular[0]))
    rank = int(np.count_nonzero(singular > cutoff))

    if rank == povm.n_outcomes:
        if povm.n_outcomes > povm.dim ** 2:
            # Unreachable for honest input: more than d*d vectors of length d*d
            # cannot be independent. Kept as a guard for the count bound.
            return ExtremalityReport(False, ExtremalityStatus.MORE_THAN_D_SQUARED_OUTCOMES)
        return ExtremalityReport(True, ExtremalityStatus.EXTREMAL)

    witness = None
    found = find_vertex(lp, tol)
    if isinstance(found, BasicFeasibleSolution):
        support = np.flatnonzero(found.x > tol.zero_weight)
        if len(support) < povm.n_outcomes:
            witness = found.x
    return ExtremalityReport(False, ExtremalityStatus.LINEARLY_DEPENDENT_ELEMENTS, witness)


def separating_vector(vectors, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray | None:
    """A direction nu with v_i . nu < 0 for all i, or None when none exists.

    Existence of such a nu proves the vectors sit in an open half-space, which
    is exactly the obstruction to completing the corresponding rank-1
    operators into a POVM. Found by LP feasibility with the scale-free margin
    v_i . nu <= -|v_i| (free nu split into positive and negative parts plus
    slacks).
    """
    vs = np.asarray(vectors, dtype=np.float64)
    if vs.ndim != 2 or vs.shape[0] == 0:
        raise ValueError("expected a nonempty list of equal-length vectors")
    n, m = vs.shape
    norms = np.linalg.norm(vs, axis=1)
    if np.any(norms <= tol.zero_weight):
        return None  # a zero vector lies in no open half-space

    a = np.hstack([vs, -vs, np.eye(n)])
    b = -norms
    found = find_vertex(StandardLp(a_matrix=a, b_vector=b), tol)
    if isinstance(found, InfeasibilityCertificate):
        return None
    nu = found.x[:m] - found.x[m : 2 * m]
    if np.max(vs @ nu + 1e-9 * norms) >= 0.0:
        return None  # verification failed, do not hand back a bogus direction
    nu.flags.writeable = False
    return nu
