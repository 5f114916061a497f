"""Command-line interface: ``ghspace <command> ...``.

Results go to stdout (or ``-o``) as JSON.  Errors go to stderr as a JSON
object with an ``error`` field.  Exit codes: 0 success, 1 unreadable or
invalid input, 2 the search could not certify an exact answer, 3 the
brute-force oracle refused an oversized instance.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .correspondence import CapExceeded, oracle_min_distortion
from .geodesic import DomainError, check_geodesic, make_geodesic, sample
from .hausdorff import hausdorff, one_sided
from .metric_core import TOL_METRIC, MetricError, diameter, validate_pseudometric
from .realization import realize
from .solver import DEFAULT_BUDGET, NotExact, gh_exact

EXIT_OK, EXIT_INVALID, EXIT_NOT_EXACT, EXIT_CAP = 0, 1, 2, 3


def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _index_list(s: str) -> list[int]:
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {s!r}")


def _t_list(s: str) -> list[float]:
    try:
        ts = [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}")
    if not ts or any(not 0.0 <= t <= 1.0 for t in ts):
        raise argparse.ArgumentTypeError("t values must lie in [0, 1]")
    return ts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=TOL_METRIC,
                        help="tolerance for symmetry and triangle checks (default 1e-9)")
    common.add_argument("--format", choices=["json", "csv"], default=None,
                        help="input format (default: by file extension)")
    common.add_argument("--points", action="store_true",
                        help="inputs are CSV point clouds rather than distance matrices")
    common.add_argument("--metric", choices=["euclidean", "chebyshev"], default="euclidean",
                        help="metric for point-cloud inputs")
    common.add_argument("-o", "--output", default=None, help="output file (default stdout)")

    p = argparse.ArgumentParser(
        prog="ghspace", description="Exact Gromov-Hausdorff distance for finite metric spaces."
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check the metric axioms")
    v.add_argument("file")
    v.add_argument("--pseudo", action="store_true", help="allow zero off-diagonal distances")

    h = sub.add_parser("hausdorff", parents=[common], help="Hausdorff distance of two subsets")
    h.add_argument("file")
    h.add_argument("--A", dest="A", type=_index_list, required=True)
    h.add_argument("--B", dest="B", type=_index_list, required=True)

    for name, text in [
        ("gh", "exact Gromov-Hausdorff distance"),
        ("realize", "common metric space realizing the distance"),
        ("geodesic", "sample the shortest curve between two spaces"),
        ("oracle", "Gromov-Hausdorff distance by exhaustive enumeration"),
    ]:
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("fileX")
        s.add_argument("fileY")
        if name != "oracle":
            s.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET,
                           help="node limit for the exact search")
        if name == "gh":
            s.add_argument("--require-exact", action="store_true",
                           help="exit with status 2 if the search hits the budget")
        if name == "geodesic":
            grid = s.add_mutually_exclusive_group()
            grid.add_argument("--ts", type=_t_list, default=None, help="e.g. 0,0.25,0.5,0.75,1")
            grid.add_argument("--steps", type=_positive_int, default=None,
                              help="k equal steps, i.e. k+1 samples from 0 to 1")
            s.add_argument("--check", action="store_true",
                           help="verify d_GH(R_s, R_t) = |s-t| d_GH(X, Y) on the grid")
    return p


def _load(args, path):
    return formats.load_space(path, args.format, args.points, args.metric, args.tol)


def _emit(args, payload) -> None:
    text = formats.dumps(payload)
    if args.output and args.command != "geodesic":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_validate(args) -> int:
    path = Path(args.file)
    try:
        if args.pseudo:
            dist, labels = formats.load_matrix(path, args.format, args.points, args.metric)
            space = validate_pseudometric(dist, labels, args.tol)
        else:
            space = _load(args, path)
    except MetricError as e:
        _emit(args, {"valid": False, **e.to_dict()})
        return EXIT_INVALID
    _emit(args, {
        "valid": True,
        "kind": "pseudometric" if args.pseudo else "metric",
        "n": space.n,
        "diameter": diameter(space),
        "tolerance": args.tol,
    })
    return EXIT_OK


def _cmd_hausdorff(args) -> int:
    space = _load(args, args.file)
    _emit(args, {
        "A": sorted(set(args.A)),
        "B": sorted(set(args.B)),
        "one_sided_AB": one_sided(space, args.A, args.B),
        "one_sided_BA": one_sided(space, args.B, args.A),
        "hausdorff": hausdorff(space, args.A, args.B),
    })
    return EXIT_OK


def _cmd_gh(args) -> int:
    X, Y = _load(args, args.fileX), _load(args, args.fileY)
    result = gh_exact(X, Y, args.budget)
    _emit(args, result.to_json())
    if args.require_exact and not result.exact:
        return EXIT_NOT_EXACT
    return EXIT_OK


def _cmd_realize(args) -> int:
    X, Y = _load(args, args.fileX), _load(args, args.fileY)
    _emit(args, realize(X, Y, args.budget).to_json())
    return EXIT_OK


def _cmd_geodesic(args) -> int:
    X, Y = _load(args, args.fileX), _load(args, args.fileY)
    if args.ts is not None:
        ts = args.ts
    else:
        k = args.steps or 4
        ts = [i / k for i in range(k + 1)]
    curve = make_geodesic(X, Y, budget=args.budget)
    samples = [(t, formats.space_to_json(sample(curve, t))) for t in ts]
    manifest = {"gh": curve.gh, "witness": curve.R.to_json(), "ts": ts}
    if args.check:
        manifest["check"] = check_geodesic(curve, ts, budget=args.budget).to_json()
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for k, (t, space) in enumerate(samples):
            name = f"sample_{k:03d}.json"
            (out / name).write_text(formats.dumps(space))
            files.append({"t": t, "file": name})
        manifest["samples"] = files
        (out / "manifest.json").write_text(formats.dumps(manifest))
    else:
        manifest["samples"] = [{"t": t, **space} for t, space in samples]
    _emit(args, manifest)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    X, Y = _load(args, args.fileX), _load(args, args.fileY)
    dis, pairs = oracle_min_distortion(X, Y)
    _emit(args, {"value": dis / 2, "method": "enumeration",
                 "witness": {"pairs": [list(p) for p in pairs]}})
    return EXIT_OK


COMMANDS = {
    "validate": _cmd_validate,
    "hausdorff": _cmd_hausdorff,
    "gh": _cmd_gh,
    "realize": _cmd_realize,
    "geodesic": _cmd_geodesic,
    "oracle": _cmd_oracle,
}


def _fail(err, code: int) -> int:
    payload = err.to_dict() if hasattr(err, "to_dict") else {
        "error": type(err).__name__, "message": str(err)}
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (formats.ParseError, MetricError, DomainError, ValueError) as e:
        if isinstance(e, CapExceeded):
            return _fail(e, EXIT_CAP)
        return _fail(e, EXIT_INVALID)
    except NotExact as e:
        return _fail(e, EXIT_NOT_EXACT)


if __name__ == "__main__":
    sys.exit(main())
