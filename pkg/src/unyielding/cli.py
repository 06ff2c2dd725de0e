"""Command-line front end: ``unyielding {analyze,flex,search,figure}``.

Exit status: 0 on success, 2 for invalid input, 3 for degenerate
configurations, 1 for internal solver failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import DEFAULT_TOLERANCES, analyze
from .curved import conjecture_search
from .dependence import Flavor, affine_dependence, build_framework
from .errors import DegeneracyError, SolverFailure, ValidationError
from .figures import figure_csv, figure_rows, render_svg
from .flex import MotionPath, first_order_flex, global_rigidity_falsifier, inequality_sign_check
from .geometry import MetricSignature, Space
from .reports import (
    Document,
    csv_text,
    dumps,
    flatten,
    framework_dict,
    framework_from_spec,
    load_document,
    load_fixture,
    parse_document,
)
from .sampling import random_configuration

EXIT_OK, EXIT_SOLVER, EXIT_INVALID, EXIT_DEGENERATE = 0, 1, 2, 3


def _tolerances(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or name not in DEFAULT_TOLERANCES:
            raise ValidationError(f"--tol expects NAME=VALUE with NAME in {', '.join(DEFAULT_TOLERANCES)}")
        try:
            out[name] = float(value)
        except ValueError:
            raise ValidationError(f"--tol {name}: {value!r} is not a number") from None
    return out


def _document(args, required=True) -> Document | None:
    if args.input and args.fixture:
        raise ValidationError("give either --input or --fixture, not both")
    if args.input:
        return parse_document(load_document(args.input))
    if args.fixture:
        return parse_document(load_fixture(args.fixture))
    if required:
        raise ValidationError("an input configuration is required (--input PATH or --fixture NAME)")
    return None


def _framework_spec(args, doc):
    if args.k is not None:
        return {"k": args.k, "flavor": args.flavor or "G"}
    if doc is not None and doc.framework is not None:
        return doc.framework
    if args.flavor:
        raise ValidationError("--flavor needs --k")
    return None


def _emit(args, payload: dict) -> str:
    if args.format == "csv":
        return csv_text(flatten(payload), header=["key", "value"])
    return dumps(payload)


def _write_file(path, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot write {path}: {exc.strerror}") from None


def _write(args, text: str):
    if args.output:
        _write_file(args.output, text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    doc = _document(args)
    report = analyze(doc, seed=args.seed, tolerances=_tolerances(args.tol), framework_spec=_framework_spec(args, None))
    _write(args, _emit(args, report.to_dict()))
    return EXIT_OK


def _ambient(value, n) -> int:
    if value in (None, "n"):
        return n
    if value == "n+1":
        return n + 1
    try:
        return int(value)
    except ValueError:
        raise ValidationError("--ambient expects n, n+1 or an integer") from None


def cmd_flex(args) -> int:
    doc = _document(args)
    config = doc.config
    spec = _framework_spec(args, doc)
    if spec is None:
        raise ValidationError("flex needs a framework: --k/--flavor or a 'framework' field in the input")
    dep = None
    if "labels" not in spec or args.sign_check:
        dep = affine_dependence(config, doc.alpha)
    fw = framework_from_spec(spec, dep, config.m)
    tol = _tolerances(args.tol).get("unyielding", DEFAULT_TOLERANCES["unyielding"])
    ambient = _ambient(args.ambient, config.n)
    report = first_order_flex(fw, config, ambient, tol)
    payload = {"kind": "flex", "framework": framework_dict(fw), **report.to_dict()}
    if args.sign_check:
        path = MotionPath.lift(config, 0)
        payload["sign_check"] = inequality_sign_check(dep, config, path, fw.k).to_dict()
    _write(args, _emit(args, payload))
    return EXIT_OK


def cmd_search(args) -> int:
    if args.trials < 1:
        raise ValidationError("--trials must be at least 1")
    if args.kind == "global-rigidity":
        doc = _document(args, required=False)
        if doc is None:
            space = Space.parse(args.space or "euclidean")
            metric = MetricSignature(space, args.dim)
            rng = np.random.default_rng([args.seed, 2**32 - 1])
            config = random_configuration(metric, args.dim + 2, rng, scale=0.7)
        else:
            config = doc.config
        dep = affine_dependence(config)
        fw = build_framework(dep, 1, Flavor.G)
        report = global_rigidity_falsifier(fw, config, args.trials, args.seed)
        report.parameters["configuration"] = config.points
    else:
        space = Space.parse(args.space or "hyperbolic")
        report = conjecture_search(args.kind, args.trials, args.seed, args.dim, args.points, space)
    _write(args, _emit(args, report.to_dict()))
    return EXIT_OK


def cmd_figure(args) -> int:
    doc = _document(args)
    config = doc.config
    k = args.k or 1
    dep = affine_dependence(config, doc.alpha)
    fw = build_framework(dep, k, Flavor.parse(args.flavor or "G"))
    rows = figure_rows(config, fw)
    if args.format == "json":
        text = dumps({"kind": "figure", "columns": ["kind", "name", "x", "y", "value", "style"], "rows": rows})
    else:
        text = figure_csv(rows)
    _write(args, text)
    svg_path = args.svg or (Path(args.output).with_suffix(".svg") if args.output else None)
    if svg_path is not None:
        _write_file(svg_path, render_svg(config, fw, rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input document (JSON); a previous report is also accepted")
    common.add_argument("--fixture", help="built-in configuration: square, inside, outside, orthocentric, ...")
    common.add_argument("--output", help="write here instead of standard output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance (repeatable)")
    common.add_argument("--format", choices=("json", "csv"), help="json (default) or csv; figure defaults to csv")

    parser = argparse.ArgumentParser(prog="unyielding", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("analyze", parents=[common], help="dependence, frameworks, invariants, verdicts")
    p.add_argument("--k", type=int)
    p.add_argument("--flavor", choices=[f.value for f in Flavor if f is not Flavor.CUSTOM])
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("flex", parents=[common], help="first-order flex test for one framework")
    p.add_argument("--k", type=int)
    p.add_argument("--flavor", choices=[f.value for f in Flavor if f is not Flavor.CUSTOM])
    p.add_argument("--ambient", help="n (default), n+1, or an explicit dimension")
    p.add_argument("--sign-check", action="store_true", help="add the lifted-path sign table for A1")
    p.set_defaults(func=cmd_flex)

    p = sub.add_parser("search", parents=[common], help="randomized conjecture and rigidity searches")
    p.add_argument("kind", choices=("real-roots", "kernel-psd", "global-rigidity"))
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--points", type=int, default=4, help="kernel size for kernel-psd")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--space", help="e, s or h")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("figure", parents=[common], help="planar figure data (CSV) and SVG")
    p.add_argument("--k", type=int)
    p.add_argument("--flavor", choices=[f.value for f in Flavor if f is not Flavor.CUSTOM])
    p.add_argument("--svg", help="SVG destination (default: next to --output)")
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DegeneracyError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
