"""Command line entry points.

Subcommands: ``norm`` (molecule norm with witness), ``project`` (grid
projection of a function at sample points with error and bound),
``fdd-table`` (per-level projection diagnostics of a molecule), ``verify``
(the seeded self-verification suites) and ``bap`` (restrict-extend
diagnostics along a farthest-point chain of a finite metric space).

Exit codes: 0 ok, 1 verification-suite failure, 2 input error, 3 solver
error.  Output goes to stdout or is written atomically to ``--output``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import extension, freespace, operators, verify
from .geometry import FiniteSupportPoint
from .interpolation import TabulatedFunction
from .lp import SimplexError

_BUILTIN_FUNCTIONS = ("identity-coordinate", "l1-norm", "max-coordinate", "random-lattice")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lipfree")
    sub = parser.add_subparsers(dest="command", required=True)

    norm = sub.add_parser("norm", help="exact norm of a molecule with the dual witness")
    norm.add_argument("--input", required=True, help="molecule JSON file")
    norm.add_argument("--tol", type=float, default=1e-9)
    _io_flags(norm, default_format="json")

    project = sub.add_parser("project", help="grid projection of a function at sample points")
    project.add_argument("--input", required=True, help="sample points JSON file")
    project.add_argument("--function", default="l1-norm",
                         help=f"builtin name {_BUILTIN_FUNCTIONS} or use --function-file")
    project.add_argument("--function-file", help="tabulated function JSON file")
    project.add_argument("--n", type=int, required=True, help="projection level")
    project.add_argument("--dim", type=int, help="coordinate mode dimension (default: sequence mode)")
    project.add_argument("--seed", type=int, help="seed (required for random-lattice)")
    project.add_argument("--tol", type=float, default=1e-9, help="slack for the bound check")
    _io_flags(project, default_format="json")

    fdd = sub.add_parser("fdd-table", help="per-level projection table for a molecule")
    fdd.add_argument("--input", required=True, help="molecule JSON file")
    fdd.add_argument("--n-max", type=int, required=True)
    fdd.add_argument("--tol", type=float, default=1e-7)
    _io_flags(fdd, default_format="csv")

    ver = sub.add_parser("verify", help="run the seeded self-verification suites")
    ver.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    ver.add_argument("--suite", help="run a single named suite")
    _io_flags(ver, default_format="json")

    bap = sub.add_parser("bap", help="restrict-extend diagnostics along a farthest-point chain")
    bap.add_argument("--input", required=True, help="metric space JSON file")
    bap.add_argument("--scheme", choices=extension.SCHEMES, default="inv-dist")
    bap.add_argument("--p", type=float, default=2.0, help="shepard exponent")
    bap.add_argument("--function", choices=("origin-distance", "random"), default="origin-distance")
    bap.add_argument("--seed", type=int, help="seed (required for --function random)")
    _io_flags(bap, default_format="csv")
    return parser


def _io_flags(cmd, default_format):
    cmd.add_argument("--format", choices=("json", "csv"), default=default_format)
    cmd.add_argument("--output", help="write here (atomically) instead of stdout")


def _read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_molecule(path) -> freespace.Molecule:
    return freespace.Molecule.from_json(_read_json(path))


def _parse_point(obj, dim):
    if isinstance(obj, dict):
        point = FiniteSupportPoint.from_json(obj)
        if dim is not None:
            return np.asarray(point.leading(dim))
        return point
    if dim is not None:
        arr = np.asarray(obj, dtype=float)
        if arr.shape != (dim,):
            raise ValueError(f"expected points of dimension {dim}, got {arr.tolist()}")
        return arr
    return FiniteSupportPoint.from_dense(obj)


def _load_points(path, dim):
    obj = _read_json(path)
    if isinstance(obj, dict):
        obj = obj["points"]
    return [_parse_point(p, dim) for p in obj]


def _encode_point(p):
    if isinstance(p, FiniteSupportPoint):
        return p.to_json()
    return list(np.asarray(p, dtype=float))


def _resolve_function(args) -> operators.LipFunction:
    if args.function_file:
        obj = _read_json(args.function_file)
        pts = tuple(
            tuple(np.asarray(p, float)) if args.dim is not None else _parse_point(p, None)
            for p in obj["points"]
        )
        table = TabulatedFunction(points=pts, values=tuple(obj["values"]),
                                  origin=int(obj.get("origin", 0)))
        return operators.tabulated_lip_function(table)
    name = args.function
    if name == "identity-coordinate":
        return operators.coordinate_function(1)
    if name == "l1-norm":
        return operators.l1_norm_function()
    if name == "max-coordinate":
        return operators.max_coordinate_function()
    if name == "random-lattice":
        if args.seed is None:
            raise ValueError("--seed is required for the random-lattice function")
        return operators.random_lattice_function(np.random.default_rng(args.seed), dim=args.dim)
    raise ValueError(f"unknown function {name!r}; builtins are {_BUILTIN_FUNCTIONS}")


def _cmd_norm(args):
    mu = _load_molecule(args.input)
    cert = freespace.free_norm(mu, tol=args.tol)
    payload = cert.to_json(mu)
    rows = [["value", cert.value]]
    rows += [[json.dumps(e["point"]), e["value"]] for e in payload["witness"]]
    return payload, {"columns": ["point", "value"], "rows": rows}, 0


def _cmd_project(args):
    points = _load_points(args.input, args.dim)
    f = _resolve_function(args)
    rows = []
    for p in points:
        chk = operators.convergence_check(f, p, args.n, dim=args.dim, tol=args.tol)
        rows.append(
            {
                "point": _encode_point(p),
                "value": chk.value,
                "exact": chk.exact,
                "error": chk.error,
                "bound": chk.bound,
            }
        )
    payload = {"function": f.label, "n": args.n, "rows": rows}
    table = {
        "columns": ["point", "value", "exact", "error", "bound"],
        "rows": [[json.dumps(r["point"]), r["value"], r["exact"], r["error"], r["bound"]] for r in rows],
    }
    return payload, table, 0


def _cmd_fdd_table(args):
    mu = _load_molecule(args.input)
    report = freespace.decomposition_report(mu, args.n_max, norm_tol=args.tol)
    payload = report.to_json()
    table = {
        "columns": ["n", "norm", "err", "bound", "support_size"],
        "rows": [
            [r.n, r.norm_value, r.err_value, r.bound, r.support_size] for r in report.rows
        ],
    }
    return payload, table, 0


def _cmd_verify(args):
    report = verify.run_verification(seed=args.seed, only=args.suite)
    payload = report.to_json()
    table = {
        "columns": ["suite", "passed", "worst_case"],
        "rows": [[s.name, s.passed, s.worst] for s in report.suites],
    }
    return payload, table, 0 if report.passed else 1


def _cmd_bap(args):
    space = extension.FinitePointedMetricSpace.from_json(_read_json(args.input))
    if args.function == "origin-distance":
        values = [float(space.dist[space.origin, i]) for i in range(space.size)]
    else:
        if args.seed is None:
            raise ValueError("--seed is required for --function random")
        rng = np.random.default_rng(args.seed)
        values = [float(v) for v in rng.normal(size=space.size)]
        values[space.origin] = 0.0
    f = extension.space_function(space, values)
    rows = extension.chain_table(space, f, scheme=args.scheme, p=args.p)
    doubling = extension.doubling_estimate(space)
    payload = {
        "doubling_estimate": doubling,
        "scheme": args.scheme,
        "function": args.function,
        "rows": [vars(r) for r in rows],
    }
    table = {
        "header": f"# doubling_estimate={doubling} scheme={args.scheme}",
        "columns": ["n", "k_hat", "lip_ratio", "max_err"],
        "rows": [[r.size, r.k_hat, r.lip_ratio, r.max_err] for r in rows],
    }
    return payload, table, 0


_DISPATCH = {
    "norm": _cmd_norm,
    "project": _cmd_project,
    "fdd-table": _cmd_fdd_table,
    "verify": _cmd_verify,
    "bap": _cmd_bap,
}


def _render(payload, table, fmt) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2)
    buf = io.StringIO()
    if table.get("header"):
        buf.write(table["header"] + "\n")
    writer = csv.writer(buf)
    writer.writerow(table["columns"])
    writer.writerows(table["rows"])
    return buf.getvalue().rstrip("\n")


def _emit(text: str, output: str | None) -> None:
    if output:
        tmp = output + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        os.replace(tmp, output)
    else:
        print(text)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload, table, code = _DISPATCH[args.command](args)
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SimplexError, np.linalg.LinAlgError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    _emit(_render(payload, table, args.format), args.output)
    return code


def main_entry() -> None:
    sys.exit(main())
