"""JSON file formats for POVMs and decompositions.

Matrices are nested row-major arrays of [re, im] pairs so golden files stay
hand-authorable. Floats go through Python's shortest-repr serialization, which
round-trips bit-exactly; re-serializing a loaded file reproduces it byte for
byte (keys are emitted in a fixed order).

POVM file:
    {"dim": d, "elements": [matrix, ...], "labels": [int, ...]?}

Decomposition file:
    {"dim": d,
     "relabel": [original_label_for_prepared_0, ...],
     "terms": [{"probability": p,
                "outcomes": [{"weight": w, "projector": matrix,
                              "prepared_label": l, "original_label": i}, ...]},
               ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .decompose import Decomposition, expand_term
from .errors import FileFormatError
from .povm import aggregate_by_target


def matrix_to_pairs(matrix: np.ndarray) -> list:
    m = np.asarray(matrix, dtype=np.complex128)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def matrix_from_pairs(data, where: str) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"{where}: malformed matrix") from exc
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
        raise FileFormatError(f"{where}: expected a square grid of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def read_povm_file(path):
    """Parse a POVM file; returns (dim, raw elements (N, d, d), labels or None).

    Only structure is checked here; PSD and completeness belong to
    validate_povm so callers can distinguish parse errors from bad physics.
    """
    try:
        with open(path, "r", encoding="utf-8") as fp:
            doc = json.load(fp)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise FileFormatError(f"{path}: 'dim' must be a positive integer")
    elements = doc.get("elements")
    if not isinstance(elements, list) or not elements:
        raise FileFormatError(f"{path}: 'elements' must be a nonempty list")
    grids = []
    for i, entry in enumerate(elements):
        grid = matrix_from_pairs(entry, f"{path}: elements[{i}]")
        if grid.shape != (dim, dim):
            raise FileFormatError(f"{path}: elements[{i}] is {grid.shape[0]}x{grid.shape[1]}, expected {dim}x{dim}")
        grids.append(grid)
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != len(grids) or not all(
            isinstance(l, int) and l >= 0 for l in labels
        ):
            raise FileFormatError(
                f"{path}: 'labels' must be nonnegative ints matching 'elements'"
            )
        labels = tuple(labels)
    return dim, np.stack(grids), labels


def write_povm_file(path, dim: int, elements, labels=None) -> None:
    doc = {"dim": int(dim), "elements": [matrix_to_pairs(e) for e in elements]}
    if labels is not None:
        doc["labels"] = [int(l) for l in labels]
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(doc, fp, indent=2)
        fp.write("\n")


@dataclass(frozen=True, eq=False)
class OutcomeRecord:
    weight: float
    projector: np.ndarray
    prepared_label: int
    original_label: int


@dataclass(frozen=True, eq=False)
class TermRecord:
    probability: float
    outcomes: tuple[OutcomeRecord, ...]


@dataclass(frozen=True, eq=False)
class DecompositionRecord:
    """File-level view of a decomposition, one row per prepared-outcome share."""

    dim: int
    relabel: tuple[int, ...]
    terms: tuple[TermRecord, ...]


def record_from_decomposition(decomposition: Decomposition) -> DecompositionRecord:
    terms = []
    for term in decomposition.terms:
        outcomes = tuple(
            OutcomeRecord(weight=w, projector=proj, prepared_label=l, original_label=i)
            for w, proj, l, i in expand_term(decomposition, term)
        )
        terms.append(TermRecord(probability=term.probability, outcomes=outcomes))
    return DecompositionRecord(
        dim=decomposition.dim,
        relabel=tuple(decomposition.relabel.targets),
        terms=tuple(terms),
    )


def record_to_document(record: DecompositionRecord) -> dict:
    return {
        "dim": record.dim,
        "relabel": list(record.relabel),
        "terms": [
            {
                "probability": t.probability,
                "outcomes": [
                    {
                        "weight": o.weight,
                        "projector": matrix_to_pairs(o.projector),
                        "prepared_label": o.prepared_label,
                        "original_label": o.original_label,
                    }
                    for o in t.outcomes
                ],
            }
            for t in record.terms
        ],
    }


def write_decomposition_file(path, record: DecompositionRecord) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(record_to_document(record), fp, indent=2)
        fp.write("\n")


def read_decomposition_file(path) -> DecompositionRecord:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            doc = json.load(fp)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise FileFormatError(f"{path}: 'dim' must be a positive integer")
    relabel = doc.get("relabel")
    if not isinstance(relabel, list) or not all(isinstance(i, int) for i in relabel):
        raise FileFormatError(f"{path}: 'relabel' must be a list of ints")
    raw_terms = doc.get("terms")
    if not isinstance(raw_terms, list) or not raw_terms:
        raise FileFormatError(f"{path}: 'terms' must be a nonempty list")
    terms = []
    for k, raw in enumerate(raw_terms):
        if not isinstance(raw, dict) or not isinstance(raw.get("probability"), (int, float)):
            raise FileFormatError(f"{path}: terms[{k}] needs a numeric 'probability'")
        raw_outcomes = raw.get("outcomes")
        if not isinstance(raw_outcomes, list) or not raw_outcomes:
            raise FileFormatError(f"{path}: terms[{k}] needs a nonempty 'outcomes' list")
        outcomes = []
        for j, o in enumerate(raw_outcomes):
            where = f"{path}: terms[{k}].outcomes[{j}]"
            if not isinstance(o, dict) or not isinstance(o.get("weight"), (int, float)):
                raise FileFormatError(f"{where}: needs a numeric 'weight'")
            if not isinstance(o.get("prepared_label"), int) or not isinstance(
                o.get("original_label"), int
            ):
                raise FileFormatError(f"{where}: needs integer labels")
            projector = matrix_from_pairs(o.get("projector"), where)
            if projector.shape != (dim, dim):
                raise FileFormatError(f"{where}: projector has wrong shape")
            outcomes.append(
                OutcomeRecord(
                    weight=float(o["weight"]),
                    projector=projector,
                    prepared_label=o["prepared_label"],
                    original_label=o["original_label"],
                )
            )
        terms.append(TermRecord(probability=float(raw["probability"]), outcomes=tuple(outcomes)))
    return DecompositionRecord(dim=dim, relabel=tuple(relabel), terms=tuple(terms))


def reconstruct_record(record: DecompositionRecord, n_original: int) -> np.ndarray:
    """Recombine the file contents into per-original-outcome grids."""
    out = np.zeros((n_original, record.dim, record.dim), dtype=np.complex128)
    for term in record.terms:
        for o in term.outcomes:
            if not 0 <= o.original_label < n_original:
                raise FileFormatError(
                    f"original label {o.original_label} outside 0..{n_original - 1}"
                )
        out += term.probability * aggregate_by_target(
            [o.weight for o in term.outcomes],
            [o.projector for o in term.outcomes],
            [o.original_label for o in term.outcomes],
            n_original,
        )
    return out
