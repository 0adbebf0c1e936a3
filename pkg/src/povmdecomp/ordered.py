"""Ordered decompositions: pick extremal factors by rank instead of first-found.

The coefficient polytope of a small instance can be enumerated outright: every
independent column subset of size up to d*d yields at most one candidate
vertex. With the catalog in hand, extraction can greedily prefer vertices with
the fewest outcomes, or those maximizing the quadratic cost Q = sum_i x_i^2,
which for qubits ranks fewer-outcome vertices first (Q of a 2-outcome vertex
is 2, above the 3-outcome range [4/3, 3/2], which sits above the 4-outcome
range [1, 4/3]). That ordering argument breaks beyond 4 outcomes, so the Q
bounds are only exposed for d = 2. Enumeration is exponential in the column
count and guarded by a cap; the scalable path remains first-found extraction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .decompose import Decomposition, Term, _decompose_prepared, _merged_problem, _peel, _term_from_vertex
from .errors import NumericalStall, TooLarge, Unsupported
from .povm import WeightedPovm, prepare_rank1
from .simplex import StandardLp
from .tolerances import DEFAULT_TOLERANCES, Tolerances

DEFAULT_ENUMERATION_CAP = 16


class Strategy(enum.Enum):
    FIRST_FOUND = "first"
    FEWEST_OUTCOMES = "fewest"
    MAX_Q = "maxq"


@dataclass(frozen=True, eq=False)
class Vertex:
    """One catalog entry: full-length coefficients plus ranking metadata."""

    x: np.ndarray
    support: tuple[int, ...]
    outcome_count: int
    q_value: float


@dataclass(frozen=True, eq=False)
class VertexCatalog:
    vertices: tuple[Vertex, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def supports(self) -> set:
        return {v.support for v in self.vertices}


def q_cost(x) -> float:
    """Quadratic vertex cost sum_i x_i^2."""
    arr = np.asarray(x, dtype=np.float64)
    return float(np.sum(arr * arr))


def q_bounds(n: int, d: int) -> tuple[float, float]:
    """(min, max) of the quadratic cost over extremal qubit vertices with n outcomes.

    Only derived for d = 2 and n in {2, 3, 4}: Q2 = d^2/2 exactly, Q3 ranges
    over [d^2/3, 3 d^2/8], Q4 over [d^2/4, d^2/3]. Anything else raises
    Unsupported rather than extrapolating.
    """
    if d != 2 or n not in (2, 3, 4):
        raise Unsupported(f"q_bounds is only defined for d=2 and n in {{2,3,4}}, got n={n}, d={d}")
    d2 = float(d * d)
    if n == 2:
        return (d2 / 2.0, d2 / 2.0)
    if n == 3:
        return (d2 / 3.0, 3.0 * d2 / 8.0)
    return (d2 / 4.0, d2 / 3.0)


def enumerate_vertices(
    lp: StandardLp,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> VertexCatalog:
    """All vertices of {x >= 0, Ax = b} by brute force over column subsets.

    Exhaustive at this scale: every vertex is the unique solution on its own
    (independent) support, so scanning subsets of size up to rank(A) and
    keeping nonnegative consistent solutions, deduplicated by support, finds
    them all. Raises TooLarge above the cap.
    """
    a = lp.a_matrix
    b = lp.b_vector
    p, q = a.shape
    if q > cap:
        raise TooLarge(f"{q} columns exceed the enumeration cap {cap}")

    b_scale = 1.0 + float(np.max(np.abs(b)))
    seen: dict[tuple[int, ...], Vertex] = {}
    for size in range(1, min(p, q) + 1):
        for subset in combinations(range(q), size):
            cols = a[:, subset]
            solution, _, rank, _ = np.linalg.lstsq(cols, b, rcond=None)
            if rank < size:
                continue  # dependent columns never support a vertex uniquely
            if float(np.max(np.abs(cols @ solution - b))) > 1e-8 * b_scale:
                continue
            if float(np.min(solution)) < -1e-10:
                continue
            x = np.zeros(q)
            x[list(subset)] = np.where(np.abs(solution) < tol.zero_weight, 0.0, solution)
            support = tuple(int(j) for j in np.flatnonzero(x > tol.zero_weight))
            if not support or support in seen:
                continue
            x.flags.writeable = False
            seen[support] = Vertex(
                x=x, support=support, outcome_count=len(support), q_value=q_cost(x)
            )

    ordered = sorted(seen.values(), key=lambda v: (v.outcome_count, v.support))
    return VertexCatalog(vertices=tuple(ordered))


def _rank_key(strategy: Strategy):
    if strategy is Strategy.FEWEST_OUTCOMES:
        return lambda v: (v.outcome_count, v.support)
    # Max Q first; ties fall back to fewer outcomes, then support order.
    return lambda v: (-v.q_value, v.outcome_count, v.support)


def ordered_decompose(
    povm: WeightedPovm,
    strategy: Strategy = Strategy.FIRST_FOUND,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> Decomposition:
    """Decompose with factors chosen by the given ranking strategy.

    FIRST_FOUND delegates to the simplex-driven pipeline. The ranked
    strategies enumerate the vertex catalog once (subject to the cap) and, at
    every extraction step, peel off the top-ranked vertex supported inside the
    current coefficient support.
    """
    if strategy is Strategy.FIRST_FOUND:
        prepared = prepare_rank1(povm, tol)
        return _decompose_prepared(prepared, tol)

    prepared = prepare_rank1(povm, tol)
    groups, reps, elements, coeffs, lp = _merged_problem(prepared, tol)
    dim = prepared.povm.dim
    catalog = enumerate_vertices(lp, cap=cap, tol=tol)
    key = _rank_key(strategy)

    terms = []
    remaining = 1.0
    for _ in range(len(reps) + 1):
        support = set(np.flatnonzero(coeffs > tol.zero_weight))
        candidates = [v for v in catalog.vertices if set(v.support) <= support]
        if not candidates:
            raise NumericalStall("no catalog vertex fits the current support")
        best = min(candidates, key=key)
        p, residual = _peel(coeffs, best.x, tol)
        if p >= 1.0:
            terms.append(Term(remaining, _term_from_vertex(dim, elements, reps, coeffs, tol)))
            break
        terms.append(Term(remaining * p, _term_from_vertex(dim, elements, reps, best.x, tol)))
        remaining *= 1.0 - p
        coeffs = residual
    else:
        raise NumericalStall("support did not shrink to a vertex")

    return Decomposition(dim=dim, prepared=prepared, groups=tuple(groups), terms=tuple(terms))
