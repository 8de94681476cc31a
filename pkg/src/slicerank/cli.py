"""Command-line interface: ``slicerank <command> ...``.

Exit codes: 0 ok, 2 budget exceeded, 3 transform precondition, 4 zero-form
precondition or failed verification, 5 regression fixture mismatch, 1 any
other error.  Axes and term indices on the command line are 1-based.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .decomposition import SliceDecomposition, TensorRankDecomposition, assemble, assemble_tensor_rank
from .enumeration import (
    admissible_census,
    count_matrix_decompositions,
    count_tensor_rank_decompositions,
    lower_bound_example_census,
    verify_subspace_uniqueness_tensor_rank,
)
from .errors import (
    BudgetExceeded,
    DependentFamilies,
    DimensionMismatch,
    InvalidPartition,
    NonZeroShiftSum,
    NotZero,
    PreconditionFailed,
    SingularChange,
    SliceRankError,
)
from .field import GF, rank, subspace_from_vectors, zero_subspace
from .rank import RankBudget, membership_in_target, slice_rank, tensor_rank
from .sunflower import check_hypotheses, generate_sunflower_fixture, merge_to_center
from .transforms import basis_change, pair_shift, regroup_tensor_rank, slice_by_axis, star_shift
from .zero_form import extract_zero_form, extract_zero_form_order3, verify_zero_form

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2
EXIT_TRANSFORM = 3
EXIT_ZERO_FORM = 4
EXIT_REGRESSION = 5


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _budget(args) -> RankBudget:
    if args.budget is None:
        return RankBudget.default()
    return RankBudget(max_candidates=args.budget)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _pair(text: str) -> tuple[int, int]:
    j, i = _ints(text)
    return j - 1, i - 1


def _default_out(path: str, suffix: str) -> Path:
    p = Path(path)
    return p.with_name(p.stem + suffix + ".json")


def _load_tensor(path):
    obj = io.load(path)
    if not isinstance(obj, tuple):
        raise _Exit(EXIT_ERROR, f"{path} is not a tensor file")
    return obj


def cmd_rank(args) -> int:
    t, field = _load_tensor(args.tensor)
    budget = _budget(args)
    out = Path(args.out) if args.out else _default_out(args.tensor, ".witness")
    if args.kind == "matrix":
        if t.ndim != 2:
            raise _Exit(EXIT_ERROR, f"matrix rank needs an order-2 tensor, got order {t.ndim}")
        k = rank(t, field)
        col = subspace_from_vectors(t.T, t.shape[0], field)
        w = membership_in_target(t, (col, zero_subspace(t.shape[1], field)), field)
        dec = w.decomposition(t.shape, field)
        print(f"rank {k}")
    elif args.kind == "slice":
        res = slice_rank(t, field, budget)
        k, dec = res.k, res.witness
        print(f"slice_rank {k}")
    else:
        k, dec = tensor_rank(t, field, budget)
        print(f"tensor_rank {k}")
    io.save_decomposition(out, dec)
    print(f"witness written to {out}")
    return EXIT_OK


def _assembled(dec) -> np.ndarray:
    return assemble_tensor_rank(dec) if isinstance(dec, TensorRankDecomposition) else assemble(dec)


def cmd_transform(args) -> int:
    src = io.load(args.input)
    op = args.op
    if op == "slice-by-axis":
        if isinstance(src, tuple):
            t, field = src
        else:
            t, field = _assembled(src), src.field
        if args.axis is None:
            raise _Exit(EXIT_ERROR, "--axis is required")
        before = t
        out = slice_by_axis(t, args.axis - 1, field)
    else:
        if not isinstance(src, (SliceDecomposition, TensorRankDecomposition)):
            raise _Exit(EXIT_ERROR, f"{args.input} is not a decomposition file")
        before = _assembled(src)
        try:
            if op == "regroup":
                if not isinstance(src, TensorRankDecomposition):
                    raise _Exit(EXIT_ERROR, "regroup needs a tensor_rank decomposition")
                parts = json.loads(args.partition)
                out = regroup_tensor_rank(src, [[int(i) - 1 for i in part] for part in parts])
            else:
                if not isinstance(src, SliceDecomposition):
                    raise _Exit(EXIT_ERROR, f"{op} needs a slice decomposition")
                field = src.field
                if op == "basis-change":
                    out = basis_change(src, args.axis - 1, np.array(json.loads(args.change), dtype=np.int64))
                elif op == "pair-shift":
                    c = np.array(json.loads(args.c), dtype=np.int64)
                    out = pair_shift(src, _pair(args.first), _pair(args.second), c)
                elif op == "star-shift":
                    axes = [j - 1 for j in _ints(args.axes)]
                    idx = [i - 1 for i in _ints(args.indices)]
                    shifts = [np.array(s, dtype=np.int64) for s in json.loads(args.shifts)]
                    out = star_shift(src, axes, idx, shifts)
                else:
                    raise _Exit(EXIT_ERROR, f"unknown op {op}")
        except (NonZeroShiftSum, SingularChange, InvalidPartition, PreconditionFailed, DimensionMismatch, IndexError) as exc:
            raise _Exit(EXIT_TRANSFORM, f"{type(exc).__name__}: {exc}") from exc
        except (TypeError, KeyError, json.JSONDecodeError) as exc:
            raise _Exit(EXIT_ERROR, f"bad arguments for {op}: {exc}") from exc
    if not np.array_equal(assemble(out), before):
        raise _Exit(EXIT_ERROR, "internal error: transformed decomposition assembles differently")
    dest = Path(args.out) if args.out else _default_out(args.input, "." + op)
    io.save_decomposition(dest, out)
    print(f"{op}: {out.length} terms, assembled tensor unchanged; written to {dest}")
    return EXIT_OK


def cmd_verify_zero_form(args) -> int:
    dec = io.load(args.decomposition)
    cert = io.load(args.certificate)
    report = verify_zero_form(dec, cert)
    print(report)
    return EXIT_OK if report.ok else EXIT_ZERO_FORM


def cmd_extract_zero_form(args) -> int:
    dec = io.load(args.decomposition)
    if not isinstance(dec, SliceDecomposition):
        raise _Exit(EXIT_ERROR, f"{args.decomposition} is not a slice decomposition")
    try:
        cert = extract_zero_form_order3(dec).certificate if args.order3 else extract_zero_form(dec)
    except (NotZero, DependentFamilies) as exc:
        raise _Exit(EXIT_ZERO_FORM, f"{type(exc).__name__}: {exc}") from exc
    out = Path(args.out) if args.out else _default_out(args.decomposition, ".certificate")
    io.save_certificate(out, cert)
    print(f"certificate with {len(cert)} nonzero entries written to {out}")
    return EXIT_OK


def cmd_sunflower(args) -> int:
    if args.family:
        fam = io.load(args.family)
    elif args.generate is not None:
        if not (args.dims and args.center and args.petal):
            raise _Exit(EXIT_ERROR, "--generate needs --dims, --center and --petal")
        fam = generate_sunflower_fixture(
            args.generate, _ints(args.dims), GF(args.p), _ints(args.center), _ints(args.petal), args.h
        )
        if args.family_out:
            io.save_family(args.family_out, fam)
    else:
        raise _Exit(EXIT_ERROR, "give a family file or --generate SEED")
    report = check_hypotheses(fam)
    if not report.ok:
        print("hypotheses violated:")
        print(report)
        return EXIT_ERROR
    merged = merge_to_center(fam)
    total = sum(fam.center_shape)
    if args.out:
        out = Path(args.out)
    elif args.family:
        out = _default_out(args.family, ".merged")
    else:
        out = Path("sunflower.merged.json")
    io.save_decomposition(out, merged)
    print(f"merged {fam.h} petals onto the center: {merged.length} terms")
    print(f"sr <= {' + '.join(str(r) for r in fam.center_shape)} = {total}")
    print(f"written to {out}")
    return EXIT_OK


def _census(args):
    t, field = _load_tensor(args.tensor)
    budget = _budget(args)
    what = args.what
    if what == "matrix-count":
        return count_matrix_decompositions(t, field, budget)
    if what == "admissible":
        return admissible_census(t, field, budget)
    if what == "tensor-rank-count":
        rep = count_tensor_rank_decompositions(t, field, budget=budget)
        spans = verify_subspace_uniqueness_tensor_rank(t, field, rep.counts["tensor_rank"], budget)
        rep.counts["span_tuples"] = spans.counts["span_tuples"]
        rep.checks["unique_spans"] = spans.checks["unique_spans"]
        return rep
    if what == "example-lower-bound":
        if t.ndim < 4:
            raise _Exit(EXIT_ERROR, "example-lower-bound needs an order >= 4 tensor M(x1,x2) c(x3,...)")
        n1, n2 = t.shape[:2]
        unf = t.reshape(n1 * n2, -1)
        if rank(unf, field) > 1:
            raise _Exit(EXIT_ERROR, "tensor is not of the form M(x1,x2) c(x3,...)")
        if not t.any():
            M, c = np.zeros((n1, n2), dtype=np.int64), np.ones(t.shape[2:], dtype=np.int64)
        else:
            jcol = int(np.flatnonzero(unf.any(axis=0))[0])
            irow = int(np.flatnonzero(unf[:, jcol])[0])
            M = unf[:, jcol].reshape(n1, n2)
            c = (unf[irow] * field.inv(unf[irow, jcol])).reshape(t.shape[2:]) % field.p
        k = rank(M, field)
        if k % 2:
            raise _Exit(EXIT_ERROR, f"M has odd rank {k}")
        return lower_bound_example_census(k // 2, M, c, field, budget)
    raise _Exit(EXIT_ERROR, f"unknown census {what}")


def cmd_census(args) -> int:
    rep = _census(args)
    print(rep)
    if args.json:
        print(io.dumps(io.census_to_dict(rep)), end="")
    if args.fixture:
        path = Path(args.fixture)
        if path.exists():
            pinned = io.census_from_dict(io.read_json(path))
            if pinned != rep.summary():
                print(f"regression mismatch against {path}")
                return EXIT_REGRESSION
            print(f"matches fixture {path}")
        else:
            io.save_census(path, rep)
            print(f"fixture written to {path}")
    return EXIT_OK if rep.passed else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slicerank", description="Exact slice rank and tensor rank workbench over GF(p).")
    sub = ap.add_subparsers(dest="command", required=True)

    def budget_flag(p):
        p.add_argument("--budget", type=int, default=None, help="candidate budget (default: $SLICERANK_BUDGET or built-in)")

    p = sub.add_parser("rank", help="matrix, slice or tensor rank with a witness")
    p.add_argument("tensor")
    p.add_argument("--kind", choices=["slice", "tensor", "matrix"], default="slice")
    p.add_argument("--out")
    budget_flag(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("transform", help="apply a tensor-preserving transformation")
    p.add_argument("input", help="decomposition file (tensor file for slice-by-axis)")
    p.add_argument("--op", required=True, choices=["basis-change", "regroup", "slice-by-axis", "pair-shift", "star-shift"])
    p.add_argument("--axis", type=int, help="axis (1-based) for basis-change and slice-by-axis")
    p.add_argument("--change", help="JSON matrix for basis-change")
    p.add_argument("--partition", help="JSON list of 1-based term lists, one per axis")
    p.add_argument("--first", help="axis,index of the first term (pair-shift)")
    p.add_argument("--second", help="axis,index of the second term (pair-shift)")
    p.add_argument("--c", help="JSON nested list: shift tensor (pair-shift)")
    p.add_argument("--axes", help="comma-separated axes (star-shift)")
    p.add_argument("--indices", help="comma-separated term indices, one per axis (star-shift)")
    p.add_argument("--shifts", help="JSON list of shift tensors, one per axis (star-shift)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify-zero-form", help="check a certificate against a decomposition of zero")
    p.add_argument("decomposition")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify_zero_form)

    p = sub.add_parser("extract-zero-form", help="build a certificate for a decomposition of zero")
    p.add_argument("decomposition")
    p.add_argument("--order3", action="store_true", help="use the explicit order-3 construction")
    p.add_argument("--out")
    p.set_defaults(func=cmd_extract_zero_form)

    p = sub.add_parser("sunflower", help="merge a sunflower family onto its center")
    p.add_argument("family", nargs="?")
    p.add_argument("--generate", type=int, metavar="SEED")
    p.add_argument("--dims")
    p.add_argument("--center", help="center functions per axis, comma-separated")
    p.add_argument("--petal", help="petal functions per axis, comma-separated")
    p.add_argument("--h", type=int, default=None)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--family-out")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sunflower)

    p = sub.add_parser("census", help="exhaustive counts against closed formulas and bounds")
    p.add_argument("tensor")
    p.add_argument("--what", required=True, choices=["matrix-count", "admissible", "tensor-rank-count", "example-lower-bound"])
    p.add_argument("--fixture", help="pinned census JSON: compared if present, written otherwise")
    p.add_argument("--json", action="store_true", help="also print the machine-readable summary")
    budget_flag(p)
    p.set_defaults(func=cmd_census)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if str(exc):
            print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetExceeded as exc:
        lb = "unknown" if exc.lower_bound is None else exc.lower_bound
        print(f"budget exceeded: {exc}; proven lower bound {lb}", file=sys.stderr)
        return EXIT_BUDGET
    except (SliceRankError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
