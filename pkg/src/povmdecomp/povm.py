"""POVM data model: validation, weighted normal form, rank-1 preparation, relabeling.

A POVM enters as a list of PSD matrices summing to the identity. Internally it
is kept in weighted form, weight a_i = tr(E_i_raw) together with the unit-trace
element E_i = E_i_raw / a_i, because the decomposition layer works on the
weights alone. Outcomes whose trace is numerically zero are dropped (they are
physically equivalent to absent outcomes); every surviving outcome keeps its
original position as its label.

Higher-rank elements are split into rank-1 pieces along their eigenbases by
``prepare_rank1``; the resulting RelabelMap records, for each rank-1 outcome,
which original outcome it reports as. That classical relabeling step is what
lets the decomposition downstream use rank-1 extremal measurements only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyPovm, NotComplete, NotPsd
from .linalg import eigendecompose, hermitize, matrix_rank
from .tolerances import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True, eq=False)
class WeightedPovm:
    """Ordered outcomes (a_i, E_i) with tr(E_i) = 1, plus outcome labels.

    Invariants (established by validate_povm, preserved by the pipeline):
    positive weights, PSD elements, sum_i a_i E_i = identity, sum_i a_i = dim.
    """

    dim: int
    weights: np.ndarray  # (N,) positive floats
    elements: np.ndarray  # (N, dim, dim) complex, unit trace each
    labels: tuple[int, ...]

    @property
    def n_outcomes(self) -> int:
        return len(self.labels)

    def weighted_elements(self) -> np.ndarray:
        """The raw grids a_i E_i, shape (N, dim, dim)."""
        return self.weights[:, None, None] * self.elements


@dataclass(frozen=True)
class RelabelMap:
    """Total map from rank-1 (prepared) outcome index to original outcome index."""

    targets: tuple[int, ...]

    def __getitem__(self, prepared_index: int) -> int:
        return self.targets[prepared_index]

    def __len__(self) -> int:
        return len(self.targets)


@dataclass(frozen=True, eq=False)
class PreparedPovm:
    """A rank-1 POVM together with the relabeling back to the source outcomes."""

    povm: WeightedPovm
    relabel: RelabelMap

    @property
    def n_outcomes(self) -> int:
        return self.povm.n_outcomes


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def validate_povm(
    elements,
    dim: int | None = None,
    labels=None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> WeightedPovm:
    """Check a raw element list and return it in weighted unit-trace form.

    Raises NotPsd (with the offending index), NotComplete (with the residual
    norm) or EmptyPovm. Elements with trace below the zero threshold are
    dropped; ``labels`` defaults to the original positions so dropped outcomes
    leave a visible gap.
    """
    raw = [hermitize(e, tol) for e in elements]
    if not raw:
        raise EmptyPovm("no elements given")
    d = raw[0].shape[0]
    if dim is not None and dim != d:
        raise ValueError(f"elements are {d}x{d} but dim={dim} was requested")
    for i, e in enumerate(raw):
        if e.shape != (d, d):
            raise ValueError(f"element {i} has shape {e.shape}, expected ({d}, {d})")
    if labels is None:
        labels = range(len(raw))
    labels = tuple(labels)
    if len(labels) != len(raw):
        raise ValueError("labels and elements must have equal length")

    for i, e in enumerate(raw):
        eigenvalues, _ = eigendecompose(e, tol)
        if eigenvalues[0] < -tol.psd:
            raise NotPsd(i, float(eigenvalues[0]))

    total = np.sum(raw, axis=0)
    residual = float(np.max(np.abs(total - np.eye(d))))
    if residual > tol.completeness:
        raise NotComplete(residual)

    kept_weights = []
    kept_elements = []
    kept_labels = []
    for label, e in zip(labels, raw):
        weight = float(e.trace().real)
        if weight <= tol.zero_weight:
            continue
        kept_weights.append(weight)
        kept_elements.append(e / weight)
        kept_labels.append(label)
    if not kept_weights:
        raise EmptyPovm("all elements are numerically zero")

    return WeightedPovm(
        dim=d,
        weights=_freeze(np.array(kept_weights)),
        elements=_freeze(np.stack(kept_elements)),
        labels=tuple(kept_labels),
    )


def prepare_rank1(povm: WeightedPovm, tol: Tolerances = DEFAULT_TOLERANCES) -> PreparedPovm:
    """Split every higher-rank element into rank-1 outcomes along its eigenbasis.

    Rank-1 elements pass through unchanged. An element of rank r contributes r
    outcomes (eigenvalues below the rank cutoff are discarded) in ascending
    eigenvalue order, all relabeled to the source outcome's label, so the
    prepared POVM has sum_i rank(E_i) outcomes and identical statistics after
    relabeling. Degenerate eigenspaces use the eigendecomposition's
    deterministic basis; any orthonormal choice is statistically equivalent.
    """
    weights = []
    elements = []
    targets = []
    for i in range(povm.n_outcomes):
        element = povm.elements[i]
        weight = float(povm.weights[i])
        label = int(povm.labels[i])
        if matrix_rank(element, tol.rank) == 1:
            weights.append(weight)
            elements.append(element)
            targets.append(label)
            continue
        eigenvalues, vectors = eigendecompose(element, tol)
        cutoff = tol.rank * max(1.0, float(np.max(np.abs(eigenvalues))))
        for j, value in enumerate(eigenvalues):
            if abs(value) <= cutoff:
                continue
            vec = vectors[:, j]
            projector = hermitize(np.outer(vec, vec.conj()), tol)
            weights.append(weight * float(value))
            elements.append(projector)
            targets.append(label)
    prepared = WeightedPovm(
        dim=povm.dim,
        weights=_freeze(np.array(weights)),
        elements=_freeze(np.stack(elements)),
        labels=tuple(range(len(weights))),
    )
    return PreparedPovm(povm=prepared, relabel=RelabelMap(targets=tuple(targets)))


def aggregate_by_target(
    weights, elements, targets, n_targets: int
) -> np.ndarray:
    """Sum w_l E_l into slot targets[l]; returns grids of shape (n_targets, d, d)."""
    elements = np.asarray(elements)
    d = elements.shape[-1]
    out = np.zeros((n_targets, d, d), dtype=np.complex128)
    for w, e, t in zip(weights, elements, targets):
        out[t] += w * e
    return out


def povm_equal(a: WeightedPovm, b: WeightedPovm, tol: float = 1e-9) -> bool:
    """True iff the label-aggregated grids a_i E_i agree elementwise within tol.

    Outcome order is irrelevant; labels carry the identity of an outcome, and
    missing labels compare as zero.
    """
    if a.dim != b.dim:
        return False

    def grids(p: WeightedPovm) -> dict:
        acc: dict = {}
        for w, e, label in zip(p.weights, p.elements, p.labels):
            if label in acc:
                acc[label] = acc[label] + w * e
            else:
                acc[label] = w * e
        return acc

    ga, gb = grids(a), grids(b)
    zero = np.zeros((a.dim, a.dim), dtype=np.complex128)
    for label in set(ga) | set(gb):
        if np.max(np.abs(ga.get(label, zero) - gb.get(label, zero))) > tol:
            return False
    return True
