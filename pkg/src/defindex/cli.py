"""Command line front end.

Subcommands: antitree, glue, analyze, solve, check-reduction.
Exit codes: 0 decisive/ok, 2 usage or parse error, 3 undetermined,
4 internal inconsistency.  All randomness is seeded (--seed, default 0);
identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import jsonio
from .engine import (
    AnalysisSettings,
    AntitreeDesc,
    FiniteGraphDesc,
    GluedDesc,
    TreeDesc,
    analyze,
    descriptor_from_json,
)
from .errors import (
    DefindexError,
    InternalInconsistencyError,
    ReductionInconsistencyError,
)
from .graphs import AntitreeSpec, Graph, build_antitree, glue_copies
from .jacobi import ClassifierTolerances, JacobiMatrix, solve_recurrence
from .radial import check_reduction_consistency, reduce_to_jacobi

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNDETERMINED = 3
EXIT_INCONSISTENT = 4


class _UsageError(Exception):
    pass


def _parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if t in ("j", "+j"):
        return 1j
    if t == "-j":
        return -1j
    try:
        return complex(t)
    except ValueError:
        raise _UsageError(f"cannot parse complex number {text!r}")


def _spec_from_args(args) -> AntitreeSpec:
    if args.alpha is not None and args.sizes is not None:
        raise _UsageError("give either --alpha or --sizes, not both")
    if args.alpha is not None:
        if args.alpha <= 0:
            raise _UsageError(f"--alpha must be positive, got {args.alpha}")
        return AntitreeSpec.power_law(args.alpha, args.depth)
    if args.sizes is not None:
        sizes = [int(s) for s in args.sizes.split(",")]
        depth = args.depth if args.depth_given else None
        return AntitreeSpec.explicit(sizes, depth)
    raise _UsageError("one of --alpha or --sizes is required")


def _write_text(path: str, text: str):
    Path(path).write_text(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_antitree(args) -> int:
    spec = _spec_from_args(args)
    g = build_antitree(spec)
    sizes = spec.sphere_sizes_exact(spec.depth)
    graph_json = jsonio.dumps(g.to_json_dict()) + "\n"
    rows = [(n, int(s)) for n, s in enumerate(sizes)]
    if args.out:
        _write_text(args.out + ".graph.json", graph_json)
        with open(args.out + ".spheres.csv", "w") as fh:
            jsonio.write_csv(fh, ["n", "size"], rows)
        print(f"wrote {args.out}.graph.json and {args.out}.spheres.csv")
    else:
        sys.stdout.write(graph_json)
        jsonio.write_csv(sys.stdout, ["n", "size"], rows)
    return EXIT_OK


def cmd_glue(args) -> int:
    if args.copies < 1:
        raise _UsageError(f"--copies must be positive, got {args.copies}")
    with open(args.graph) as fh:
        g = Graph.from_json_dict(json.load(fh))
    glued = glue_copies(g, args.copies, args.at)
    text = jsonio.dumps(glued.to_json_dict()) + "\n"
    if args.out:
        _write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _descriptor_from_args(args):
    if args.descriptor:
        with open(args.descriptor) as fh:
            return descriptor_from_json(json.load(fh))
    if args.antitree:
        if args.alpha is None and args.sizes is None:
            raise _UsageError("--antitree needs --alpha or --sizes")
        spec = _spec_from_args(args)
        desc = AntitreeDesc(spec)
    elif args.graph:
        with open(args.graph) as fh:
            g = Graph.from_json_dict(json.load(fh))
        desc = TreeDesc(g) if args.tree else FiniteGraphDesc(g)
    else:
        raise _UsageError("give --antitree, --graph, or --descriptor")
    if args.copies is not None:
        if args.copies < 1:
            raise _UsageError(f"--copies must be positive, got {args.copies}")
        desc = GluedDesc(desc, args.copies)
    return desc


def cmd_analyze(args) -> int:
    desc = _descriptor_from_args(args)
    settings = AnalysisSettings(
        scan_n_max=args.scan_n_max,
        trace_n_max=args.trace_n_max,
        carleman_threshold=args.carleman_threshold,
        tolerances=ClassifierTolerances(
            tail_fraction=args.tail_fraction,
            divergence_factor=args.divergence_factor,
            growth_ratio=args.growth_ratio,
            decay_ratio=args.decay_ratio,
        ),
    )
    report = analyze(desc, settings)
    doc = report.to_json_dict()
    doc["settings"] = settings.to_json_dict()
    text = jsonio.dumps(doc) + "\n"
    if args.out:
        _write_text(args.out, text)
    sys.stdout.write(text)
    return EXIT_OK if report.decisive else EXIT_UNDETERMINED


def cmd_solve(args) -> int:
    if args.n_max < 1:
        raise _UsageError(f"--n-max must be positive, got {args.n_max}")
    if args.alpha is None and args.sizes is None:
        raise _UsageError("one of --alpha or --sizes is required")
    spec = _spec_from_args(args)
    J = reduce_to_jacobi(spec)
    if J.max_index is not None and args.n_max > J.max_index + 1:
        raise _UsageError(
            f"--n-max {args.n_max} exceeds the explicit matrix range "
            f"(max {J.max_index + 1})"
        )
    z = _parse_complex(args.z)
    u0 = _parse_complex(args.u0)
    if args.u1 is not None:
        u1 = _parse_complex(args.u1)
    else:
        u1 = (z - J.b(0)) * u0 / J.a(0)
    sol = solve_recurrence(J, z, (u0, u1), args.n_max)
    l_abs = sol.log10_abs()
    l_psum = sol.log10_partial_sums()
    rows = (
        (n, float(l_abs[n]), float(l_psum[n])) for n in range(sol.n_max + 1)
    )
    if args.out:
        with open(args.out, "w") as fh:
            jsonio.write_csv(fh, ["n", "log10_abs_u", "log10_partial_sum"], rows)
        print(f"wrote {args.out}")
    else:
        jsonio.write_csv(
            sys.stdout, ["n", "log10_abs_u", "log10_partial_sum"], rows
        )
    return EXIT_OK


def cmd_check_reduction(args) -> int:
    if args.alpha is None and args.sizes is None:
        raise _UsageError("one of --alpha or --sizes is required")
    spec = _spec_from_args(args)
    try:
        report = check_reduction_consistency(
            spec, args.depth, args.trials, args.tol, seed=args.seed
        )
        code = EXIT_OK
    except ReductionInconsistencyError as exc:
        report = exc.report
        code = EXIT_INCONSISTENT
    text = jsonio.dumps(report.to_json_dict()) + "\n"
    if args.out:
        _write_text(args.out, text)
    sys.stdout.write(text)
    return code


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_spec_flags(p: argparse.ArgumentParser, default_depth: int):
    p.add_argument("--alpha", type=float, default=None,
                   help="power-law exponent for the sphere sizes")
    p.add_argument("--sizes", type=str, default=None,
                   help="explicit sphere sizes, comma separated (s_0=1 first)")
    p.add_argument("--depth", type=int, default=default_depth,
                   help=f"largest sphere radius to materialise (default {default_depth})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="defindex",
        description="Deficiency indices of graph adjacency matrices: "
        "antitree construction, Jacobi reduction, analytic criteria and "
        "a numerical limit-point/limit-circle classifier.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("antitree", help="build an antitree truncation")
    _add_spec_flags(p, 8)
    p.add_argument("--out", type=str, default=None,
                   help="output prefix: writes PREFIX.graph.json and PREFIX.spheres.csv")
    p.set_defaults(func=cmd_antitree)

    p = sub.add_parser("glue", help="glue copies of a graph at a vertex")
    p.add_argument("--graph", type=str, required=True, help="graph JSON file")
    p.add_argument("--copies", type=int, required=True)
    p.add_argument("--at", type=int, default=0, help="gluing vertex (default 0)")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("analyze", help="deficiency-index report")
    p.add_argument("--antitree", action="store_true",
                   help="analyze the antitree given by --alpha/--sizes")
    _add_spec_flags(p, 8)
    p.add_argument("--copies", type=int, default=None,
                   help="glue this many copies of the base descriptor")
    p.add_argument("--graph", type=str, default=None,
                   help="finite graph JSON file (whole graph, empty boundary)")
    p.add_argument("--tree", action="store_true",
                   help="treat --graph as a tree truncation")
    p.add_argument("--descriptor", type=str, default=None,
                   help="JSON descriptor file")
    p.add_argument("--scan-n-max", type=int, default=1_000_000)
    p.add_argument("--trace-n-max", type=int, default=10_000)
    p.add_argument("--carleman-threshold", type=float, default=1e3)
    p.add_argument("--tail-fraction", type=float, default=1e-6)
    p.add_argument("--divergence-factor", type=float, default=1e6)
    p.add_argument("--growth-ratio", type=float, default=8.5)
    p.add_argument("--decay-ratio", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0, help="unused; analysis is deterministic")
    p.add_argument("--out", type=str, default=None, help="also write the report here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("solve", help="trace a recurrence solution to CSV")
    _add_spec_flags(p, 8)
    p.add_argument("--z", type=str, default="i", help="spectral parameter (default i)")
    p.add_argument("--u0", type=str, default="1")
    p.add_argument("--u1", type=str, default=None,
                   help="default (z - b_0) u0 / a_0, the row-0 solution")
    p.add_argument("--n-max", dest="n_max", type=int, default=10_000)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check-reduction", help="verify the Jacobi reduction numerically")
    _add_spec_flags(p, 8)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_check_reduction)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalise other codes
        return EXIT_USAGE if exc.code not in (0,) else 0
    args.depth_given = (
        "--depth" in (argv if argv is not None else sys.argv[1:])
    )
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (DefindexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
