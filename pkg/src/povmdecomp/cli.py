"""Command-line front end.

Commands: decompose, verify, check-extremal, enumerate. Exit codes form a
stable contract: 0 success, 1 negative finding, 2 parse error, 3 validation
or numerical error, 4 enumeration cap exceeded. Errors are reported as a
single JSON line on standard error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .decompose import check_extremal, decompose, lp_from_elements
from .errors import (
    EmptyPovm,
    FileFormatError,
    NotComplete,
    NotPsd,
    PovmdecompError,
    TooLarge,
)
from .fileio import (
    read_decomposition_file,
    read_povm_file,
    reconstruct_record,
    record_from_decomposition,
    write_decomposition_file,
)
from .ordered import DEFAULT_ENUMERATION_CAP, Strategy, enumerate_vertices, ordered_decompose
from .povm import prepare_rank1, validate_povm
from .tolerances import DEFAULT_TOLERANCES

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_TOO_LARGE = 4


def _fail(code: int, error: Exception) -> int:
    detail = {"error": type(error).__name__, "detail": str(error)}
    if isinstance(error, NotPsd):
        detail["index"] = error.index
    if isinstance(error, NotComplete):
        detail["residual"] = error.residual
    print(json.dumps(detail), file=sys.stderr)
    return code


def _tolerances(args) -> "DEFAULT_TOLERANCES.__class__":
    if args.tol is None:
        return DEFAULT_TOLERANCES
    return dataclasses.replace(DEFAULT_TOLERANCES, psd=args.tol, completeness=args.tol)


def _load_validated(path, tol):
    dim, grids, labels = read_povm_file(path)
    return validate_povm(grids, dim=dim, labels=labels, tol=tol)


def cmd_decompose(args) -> int:
    tol = _tolerances(args)
    try:
        povm = _load_validated(args.input, tol)
    except FileFormatError as exc:
        return _fail(EXIT_PARSE, exc)
    except FileNotFoundError as exc:
        return _fail(EXIT_PARSE, exc)
    except PovmdecompError as exc:
        return _fail(EXIT_VALIDATION, exc)

    strategy = Strategy(args.strategy)
    try:
        if strategy is Strategy.FIRST_FOUND:
            result = decompose(povm, tol=tol)
        else:
            result = ordered_decompose(povm, strategy, cap=args.enum_cap, tol=tol)
    except TooLarge as exc:
        return _fail(EXIT_TOO_LARGE, exc)
    except PovmdecompError as exc:
        return _fail(EXIT_VALIDATION, exc)

    record = record_from_decomposition(result)
    if args.output:
        write_decomposition_file(args.output, record)

    counts = [term.povm.n_outcomes for term in result.terms]
    print(f"terms: {len(result.terms)}")
    print("outcome counts: " + " ".join(str(c) for c in counts))
    print("probabilities: " + " ".join(f"{t.probability:.12g}" for t in result.terms))
    if args.output:
        print(f"written: {args.output}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        dim, grids, _ = read_povm_file(args.original)
        record = read_decomposition_file(args.decomposition)
        if record.dim != dim:
            raise FileFormatError(
                f"dimension mismatch: POVM is {dim}, decomposition is {record.dim}"
            )
        recombined = reconstruct_record(record, n_original=grids.shape[0])
    except (FileFormatError, FileNotFoundError) as exc:
        return _fail(EXIT_PARSE, exc)

    residual = float(np.max(np.abs(recombined - grids)))
    total = sum(t.probability for t in record.terms)
    print(f"max residual: {residual:.3e}")
    print(f"probability sum: {total:.12g}")
    if residual <= args.tol and abs(total - 1.0) <= 1e-9:
        return EXIT_OK
    return EXIT_FINDING


def cmd_check_extremal(args) -> int:
    tol = _tolerances(args)
    try:
        povm = _load_validated(args.input, tol)
    except (FileFormatError, FileNotFoundError) as exc:
        return _fail(EXIT_PARSE, exc)
    except PovmdecompError as exc:
        return _fail(EXIT_VALIDATION, exc)

    report = check_extremal(povm, tol=tol)
    print(f"extremal: {report.is_extremal}")
    print(f"reason: {report.reason.value}")
    if report.witness is not None:
        print("witness: " + " ".join(f"{v:.12g}" for v in report.witness))
    return EXIT_OK if report.is_extremal else EXIT_FINDING


def cmd_enumerate(args) -> int:
    tol = _tolerances(args)
    try:
        povm = _load_validated(args.input, tol)
    except (FileFormatError, FileNotFoundError) as exc:
        return _fail(EXIT_PARSE, exc)
    except PovmdecompError as exc:
        return _fail(EXIT_VALIDATION, exc)

    prepared = prepare_rank1(povm, tol)
    lp = lp_from_elements(prepared.povm.elements, prepared.povm.dim)
    try:
        catalog = enumerate_vertices(lp, cap=args.enum_cap, tol=tol)
    except TooLarge as exc:
        return _fail(EXIT_TOO_LARGE, exc)

    doc = {
        "dim": povm.dim,
        "n_columns": prepared.povm.n_outcomes,
        "vertices": [
            {
                "support": list(v.support),
                "x": [float(value) for value in v.x],
                "outcome_count": v.outcome_count,
                "q_value": v.q_value,
            }
            for v in catalog.vertices
        ],
    }
    text = json.dumps(doc, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fp:
            fp.write(text + "\n")
        print(f"vertices: {len(catalog)}")
        print(f"written: {args.output}")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="povmdecomp",
        description="Decompose finite POVMs into convex combinations of extremal rank-1 POVMs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="decompose a POVM file into extremal factors")
    p_dec.add_argument("input", help="POVM JSON file")
    p_dec.add_argument("--strategy", choices=[s.value for s in Strategy], default="first")
    p_dec.add_argument("--tol", type=float, default=None, help="validation tolerance override")
    p_dec.add_argument("--enum-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p_dec.add_argument("--output", default=None, help="write the decomposition JSON here")
    p_dec.set_defaults(func=cmd_decompose)

    p_ver = sub.add_parser("verify", help="check a decomposition file against its POVM")
    p_ver.add_argument("original", help="POVM JSON file")
    p_ver.add_argument("decomposition", help="decomposition JSON file")
    p_ver.add_argument("--tol", type=float, default=1e-8, help="max allowed residual")
    p_ver.set_defaults(func=cmd_verify)

    p_chk = sub.add_parser("check-extremal", help="report whether a POVM is extremal")
    p_chk.add_argument("input", help="POVM JSON file")
    p_chk.add_argument("--tol", type=float, default=None, help="validation tolerance override")
    p_chk.set_defaults(func=cmd_check_extremal)

    p_enum = sub.add_parser("enumerate", help="list all vertices of the coefficient polytope")
    p_enum.add_argument("input", help="POVM JSON file")
    p_enum.add_argument("--tol", type=float, default=None, help="validation tolerance override")
    p_enum.add_argument("--enum-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    p_enum.add_argument("--output", default=None, help="write the catalog JSON here")
    p_enum.set_defaults(func=cmd_enumerate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
