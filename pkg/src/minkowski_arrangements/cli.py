"""Command-line entry point.

Every run prints one JSON line (a run record) with a top-level
``schema_version``. Exit status is 0 when the report passes, 1 when a
predicate or inequality fails, and 2 on bad input.
"""
from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from fractions import Fraction

from . import bounds, equivalence, extremal_search, lifting, volumetrics
from .arrangement import Arrangement
from .bodies import PBall, body_from_dict, cube
from .errors import (
    ArrangementError,
    CertificateError,
    DegeneratePair,
    Eq1Violated,
    HellyEmpty,
    HullContainsOrigin,
    HypothesisViolated,
    PackingInvalid,
    SearchExhausted,
    ZeroWidthSlab,
)
from .numeric import FLOAT, RATIONAL, DEFAULT_TOLERANCE, numeric_mode, serialize, to_scalar
from .report import _jsonable

SCHEMA_VERSION = 1
EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# errors that mean "the mathematics says no" rather than "the input is malformed"
VERIFIED_FAILURES = (
    HypothesisViolated,
    HellyEmpty,
    DegeneratePair,
    CertificateError,
    Eq1Violated,
    ZeroWidthSlab,
    HullContainsOrigin,
    PackingInvalid,
    SearchExhausted,
)


class InputError(Exception):
    pass


def _load_json(text_or_path):
    if text_or_path is None:
        raise InputError("an input file is required")
    if text_or_path == "-":
        return json.load(sys.stdin)
    if os.path.exists(text_or_path):
        with open(text_or_path) as fh:
            return json.load(fh)
    return json.loads(text_or_path)


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("--grid must look like lo:hi:step")
    return tuple(Fraction(p) for p in parts)


def _parse_list(text):
    return [to_scalar(p) for p in text.split(",") if p.strip()]


def _parse_body(text, d):
    if text in (None, "cube"):
        if d is None:
            raise InputError("--d is required for the cube body")
        return cube(d)
    if text.startswith("pball:"):
        if d is None:
            raise InputError("--d is required for a p-ball")
        return PBall(text.split(":", 1)[1], d)
    return body_from_dict(_load_json(text))


# subcommands ---------------------------------------------------------------------

def _cmd_verify(args):
    arr = Arrangement.from_dict(_load_json(args.input))
    if args.theorem == 1:
        report = bounds.pipeline_theorem1(arr)
    else:
        N = args.N if args.N == "auto" else int(args.N)
        report = bounds.pipeline_theorem2(arr, N)
    return report.passed, report.to_dict()


def _cmd_lift(args):
    arr = Arrangement.from_dict(_load_json(args.input))
    cert = lifting.lift_arrangement(arr)
    return cert.report.passed, cert.to_dict()


def _functional_map(entries):
    out = {}
    for e in entries:
        if "coefficients" in e:
            coeffs = [to_scalar(c) for c in e["coefficients"]]
        else:
            coeffs = [to_scalar(c) for c in e["phi"]] + [-to_scalar(e["alpha"])]
        out[(int(e["i"]), int(e["j"]))] = tuple(coeffs)
    return out


def _cmd_equiv(args):
    data = _load_json(args.input)
    if args.direction == "points-to-packing":
        points = data["points"]
        if "indices" in data:
            points = dict(zip(data["indices"], points))
        lam = args.lam if args.lam is not None else data.get("lambda", 2)
        packing = equivalence.points_to_packing(points, _functional_map(data["functionals"]), lam)
        return packing.report.passed, packing.to_dict()
    packing = equivalence.TranslatePacking.from_dict(data)
    if args.lam is not None:
        packing.lam = to_scalar(args.lam)
    points, functionals, lam, report = equivalence.packing_to_points(packing)
    payload = {
        "points": [serialize(list(p)) for p in points],
        "functionals": [{"i": i, "j": j, "coefficients": f.to_list()} for (i, j), f in sorted(functionals.items())],
        "lambda": serialize(lam),
        "report": report.to_dict(),
    }
    return report.passed, payload


def _cmd_bound(args):
    if args.formula == "minkowski":
        result = bounds.bound_minkowski(_need(args.d, "--d"))
    elif args.formula == "halpha":
        result = bounds.bound_halpha(to_scalar(_need(args.alpha, "--alpha")), _need(args.D, "--D"))
    else:
        d = _need(args.d, "--d")
        N = bounds.auto_N(d) if args.N in (None, "auto") else int(args.N)
        result = bounds.bound_sequence(d, N)
    return True, result.to_dict()


def _need(value, flag):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def _cmd_volcheck(args):
    config = volumetrics.TranslateConfig.from_dict(_load_json(args.config or args.input))
    direction = _parse_list(_need(args.direction, "--direction"))
    report = volumetrics.check_volume_identities(config, direction, method=args.method, samples=args.samples, seed=args.seed)
    return report.passed, report.to_dict()


def _cmd_search(args):
    body = _parse_body(args.body, args.d)
    lo, hi, step = _parse_grid(args.grid)
    pool = extremal_search.CandidatePool(
        body, extremal_search.grid_points(body.dim, lo, hi, step), _parse_list(args.ratios), cap=args.cap
    )
    result = extremal_search.max_clique_arrangement(pool, exact_limit=args.exact_limit, strict=args.strict, seed=args.seed)
    payload = {"size": result.size, "exact": result.exact, "arrangement": result.arrangement.to_dict(), "report": result.report.to_dict()}
    return result.report.passed, payload


def _cmd_extremal(args):
    if args.config == "cube":
        d = _need(args.d, "--d")
        arr = extremal_search.cube_arrangement(d)
        bound = bounds.bound_minkowski(d).value
        payload = {"size": len(arr), "bound": bound, "arrangement": arr.to_dict()}
        return len(arr) <= bound, payload
    if args.config == "sharpness":
        config, report = extremal_search.sharpness_config(_need(args.D, "--D"))
        return report.passed, {"config": config.to_dict(), "report": report.to_dict()}
    if args.config == "interval":
        report = extremal_search.interval_pool_oracle()
        return report.passed, report.to_dict()
    delta = to_scalar(args.delta) if args.delta is not None else Fraction(1, 20)
    points, origin, report = extremal_search.pentagon_counterexample(delta)
    return report.passed, {"points": [list(p) for p in points], "origin": list(origin), "report": report.to_dict()}


COMMANDS = {
    "verify": _cmd_verify,
    "lift": _cmd_lift,
    "equiv": _cmd_equiv,
    "bound": _cmd_bound,
    "volcheck": _cmd_volcheck,
    "search": _cmd_search,
    "extremal": _cmd_extremal,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON file, inline JSON, or '-' for stdin")
    common.add_argument("--output", help="append the run record to this file instead of stdout")
    common.add_argument("--numeric", choices=[RATIONAL, FLOAT], default=RATIONAL)
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1, help="recorded; all work runs in one process")

    parser = argparse.ArgumentParser(prog="minkowski-arrangements", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run a bound pipeline (1: arrangement size, 2: boundary sequence)")
    p.add_argument("--theorem", type=int, choices=[1, 2], required=True)
    p.add_argument("--N", default="auto")

    sub.add_parser("lift", parents=[common], help="lift an arrangement and emit its certificate")

    p = sub.add_parser("equiv", parents=[common], help="points with slab certificates <-> translate packings")
    p.add_argument("--direction", choices=["points-to-packing", "packing-to-points"], required=True)
    p.add_argument("--lambda", dest="lam")

    p = sub.add_parser("bound", parents=[common], help="evaluate a closed-form bound")
    p.add_argument("--formula", choices=["minkowski", "halpha", "sequence"], required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--D", type=int)
    p.add_argument("--alpha")
    p.add_argument("--N")

    p = sub.add_parser("volcheck", parents=[common], help="check the volume identities on a translate configuration")
    p.add_argument("--config")
    p.add_argument("--direction", help="comma-separated vector")
    p.add_argument("--samples", type=int, default=volumetrics.DEFAULT_SAMPLES)
    p.add_argument("--method", choices=["auto", "exact", "mc"], default="auto")

    p = sub.add_parser("search", parents=[common], help="max-clique search over a candidate pool")
    p.add_argument("--body", default="cube", help="'cube', 'pball:p', a body JSON file or inline JSON")
    p.add_argument("--d", type=int)
    p.add_argument("--grid", default="-1:1:1/2", help="lo:hi:step")
    p.add_argument("--ratios", default="1")
    p.add_argument("--exact-limit", type=int, default=extremal_search.DEFAULT_EXACT_LIMIT)
    p.add_argument("--cap", type=int, default=extremal_search.DEFAULT_CAP)
    p.add_argument("--strict", action="store_true", help="require interior intersection")

    p = sub.add_parser("extremal", parents=[common], help="build an extremal configuration")
    p.add_argument("--config", choices=["cube", "sharpness", "pentagon", "interval"], required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--D", type=int)
    p.add_argument("--delta")
    return parser


def _parameters(args):
    skip = {"command", "output", "numeric", "tolerance", "seed", "workers"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_PASS

    record = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": args.command,
        "parameters": _parameters(args),
        "numeric": args.numeric,
        "tolerance": args.tolerance if args.numeric == FLOAT else 0,
        "seed": args.seed,
        "workers": args.workers,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    try:
        with numeric_mode(args.numeric, args.tolerance):
            passed, payload = COMMANDS[args.command](args)
        code = EXIT_PASS if passed else EXIT_FAIL
        record["status"] = "pass" if passed else "fail"
    except VERIFIED_FAILURES as exc:
        code = EXIT_FAIL
        record["status"] = "fail"
        payload = {"error": type(exc).__name__, "message": str(exc)}
        report = getattr(exc, "report", None)
        if report is not None:
            payload["report"] = report.to_dict()
    except (InputError, ArrangementError, KeyError, TypeError, ValueError, OSError, ZeroDivisionError) as exc:
        code = EXIT_INPUT
        record["status"] = "input_error"
        payload = {"error": type(exc).__name__, "message": str(exc)}
    record["payload"] = _jsonable(payload)
    line = json.dumps(record, sort_keys=True)
    if args.output:
        with open(args.output, "a") as fh:
            fh.write(line + "\n")
    else:
        stdout.write(line + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
