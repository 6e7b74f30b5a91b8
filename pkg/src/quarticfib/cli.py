"""Command-line front end.

Reports go to stdout as one JSON document (``generate`` streams JSON lines);
errors go to stderr as ``{"error": CODE, "detail": ...}`` with a nonzero exit.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import lattice, monodromy, pointgen
from .cubiclaw import CubicError
from .exactalg import AlgebraError, DeskLimitError, MPoly
from .fibration import (
    FibrationError,
    LineNotOnSurfaceError,
    QuarticSurfaceWithLine,
    SingularSurfaceError,
    branch_analysis,
    classify_fiber,
    residual_cubic,
    singular_fiber_scan,
    trisection_two_torsion,
)
from .projgeom import INF, GeometryError, LineInP3, ProjPoint, param_str, parse_param

FIXTURES = ("fermat", "synthetic", "threefold")

EXIT_CODES = {
    "BAD_SCHEMA": 2,
    "BAD_OPTION": 2,
    "IO_ERROR": 3,
    "LINE_NOT_ON_SURFACE": 4,
    "SINGULAR_SURFACE": 5,
    "TORSION_DETECTED": 6,
    "FIBER_SINGULAR": 7,
    "GEOMETRY_ERROR": 8,
    "DESK_LIMIT": 9,
    "LATTICE_ERROR": 10,
    "MONODROMY_ERROR": 11,
    "INTERNAL": 70,
}


class CliError(Exception):
    def __init__(self, code, detail):
        super().__init__(detail)
        self.code = code
        self.detail = detail


# ---------------------------------------------------------------------------
# input schema

_COEFF = {"type": "string", "pattern": r"^\s*[+-]?\d+(/\d+)?\s*$"}
_POINT = {"type": "array", "items": _COEFF, "minItems": 1}
_FORM = {
    "type": "object",
    "required": ["vars", "terms"],
    "properties": {
        "vars": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["exp", "coeff"],
                "properties": {
                    "exp": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "coeff": _COEFF,
                },
                "additionalProperties": False,
            },
        },
    },
}
_LINE = {
    "type": "object",
    "required": ["points"],
    "properties": {"points": {"type": "array", "items": _POINT, "minItems": 2, "maxItems": 2}},
}

SURFACE_SCHEMA = {
    "type": "object",
    "required": ["surface", "line"],
    "properties": {
        "surface": _FORM,
        "line": _LINE,
        "extra_lines": {"type": "array", "items": _LINE, "minItems": 2, "maxItems": 2},
        "sample_point": _POINT,
        "name": {"type": "string"},
    },
}

THREEFOLD_SCHEMA = {
    "type": "object",
    "required": ["threefold", "line", "hyperplane"],
    "properties": {
        "threefold": _FORM,
        "line": _LINE,
        "hyperplane": {
            "type": "object",
            "required": ["points"],
            "properties": {"points": {"type": "array", "items": _POINT, "minItems": 4, "maxItems": 4}},
        },
        "cone_point": _POINT,
        "name": {"type": "string"},
    },
}


def form_from_json(doc, nvars):
    vars = tuple(doc["vars"])
    if len(vars) != nvars:
        raise CliError("BAD_SCHEMA", f"expected {nvars} variables, got {len(vars)}")
    terms = {}
    for t in doc["terms"]:
        exp = tuple(t["exp"])
        if len(exp) != nvars:
            raise CliError("BAD_SCHEMA", f"exponent vector {list(exp)} has the wrong length")
        if sum(exp) != 4:
            raise CliError("BAD_SCHEMA", f"exponent vector {list(exp)} is not of degree 4")
        terms[exp] = terms.get(exp, 0) + Fraction(t["coeff"].strip())
    F = MPoly(vars, terms)
    if not F:
        raise CliError("BAD_SCHEMA", "the form is zero")
    return F


def form_to_json(F: MPoly):
    return {
        "vars": list(F.vars),
        "terms": [{"exp": list(e), "coeff": str(c)} for e, c in sorted(F.terms.items(), reverse=True)],
    }


def _point(coords, n):
    if len(coords) != n:
        raise CliError("BAD_SCHEMA", f"point {coords} needs {n} coordinates")
    vals = tuple(Fraction(c.strip()) for c in coords)
    if all(v == 0 for v in vals):
        raise CliError("BAD_SCHEMA", "the zero vector is not a point")
    return vals


def _line(doc, vars):
    p0, p1 = (_point(p, len(vars)) for p in doc["points"])
    try:
        return LineInP3(p0, p1, vars=vars)
    except GeometryError as exc:
        raise CliError("BAD_SCHEMA", str(exc)) from exc


def load_document(source):
    """Read a JSON file, or a bundled fixture by name."""
    path = Path(source)
    if not path.exists() and source in FIXTURES:
        text = resources.files("quarticfib").joinpath("data", f"{source}.json").read_text()
    else:
        try:
            text = path.read_text()
        except OSError as exc:
            raise CliError("IO_ERROR", f"cannot read {source}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError("BAD_SCHEMA", f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc


def _validate(doc, schema):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "document"
        raise CliError("BAD_SCHEMA", f"{where}: {exc.message}") from exc


def parse_input(doc, certify=True):
    """(QuarticSurfaceWithLine, document) from a surface document."""
    _validate(doc, SURFACE_SCHEMA)
    F = form_from_json(doc["surface"], 4)
    L = _line(doc["line"], F.vars)
    return QuarticSurfaceWithLine(F, L, certify=certify), doc


def parse_threefold(doc):
    _validate(doc, THREEFOLD_SCHEMA)
    X = form_from_json(doc["threefold"], 5)
    L = _line(doc["line"], X.vars)
    H3 = [_point(p, 5) for p in doc["hyperplane"]["points"]]
    cone = _point(doc["cone_point"], 5) if "cone_point" in doc else None
    return X, L, H3, cone


# ---------------------------------------------------------------------------
# commands


def _surface_header(SL):
    return {
        "surface": str(SL.quartic),
        "line": [p.to_json() for p in SL.line.span_points],
        "smoothness_certificate": SL.certificate,
    }


def cmd_analyze(args):
    SL, _ = parse_input(load_document(args.input))
    scan = singular_fiber_scan(SL, jobs=args.jobs)
    return _surface_header(SL) | {
        "residual_cubic": str(residual_cubic(SL)),
        "branch": branch_analysis(SL).to_json(),
        "fibers": scan.to_json(),
    }


def cmd_fibers(args):
    SL, _ = parse_input(load_document(args.input))
    if args.param is not None:
        t = _param(args.param)
        return {"fiber": classify_fiber(SL, t).to_json()}
    return singular_fiber_scan(SL, jobs=args.jobs).to_json()


def _param(text):
    try:
        return parse_param(text)
    except (ValueError, ZeroDivisionError, GeometryError) as exc:
        raise CliError("BAD_OPTION", f"cannot parse parameter {text!r}") from exc


def _three_lines_job(task):
    cfg, t, count, bound = task
    pts, verdict, order = pointgen.three_lines_sequence(cfg, t, count, bound)
    return t, [g.to_json() for g in pts], verdict, order


def cmd_generate(args):
    doc = load_document(args.input)
    SL, doc = parse_input(doc)
    lines = []
    if args.mode == "qr":
        if args.point is not None:
            p = _parse_point_option(args.point, 4)
        elif "sample_point" in doc:
            p = _point(doc["sample_point"], 4)
        else:
            raise CliError("BAD_OPTION", "qr mode needs --point or a sample_point in the input")
        pts = pointgen.qr_sequence(SL, p, args.count, args.bound)
        if not pointgen.verify_qr(SL, p, pts):
            raise CliError("INTERNAL", "divisor relations failed to re-verify")
        lines = [g.to_json() for g in pts]
    else:
        if "extra_lines" not in doc:
            raise CliError("BAD_OPTION", "three-lines mode needs extra_lines in the input")
        L1, L2 = (_line(d, SL.vars) for d in doc["extra_lines"])
        cfg = pointgen.ThreeLineConfig(SL.quartic, SL.line, L1, L2, certify=False)
        params = [_param(x) for x in (args.param or "1").split(",")]
        tasks = [(cfg, t, args.count, args.bound) for t in params]
        if args.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as ex:
                results = list(ex.map(_three_lines_job, tasks))
        else:
            results = [_three_lines_job(task) for task in tasks]
        for t, pts, verdict, order in results:
            if verdict == "skip":
                print(json.dumps({"note": "fiber skipped: q_H - r_H is torsion", "fiber_parameter": param_str(t), "order": order}),
                      file=sys.stderr)
            lines.extend(pts)
    return lines


def _parse_point_option(text, n):
    return _point([c for c in text.split(",")], n)


def cmd_fermat_demo(args):
    SL, _ = parse_input(load_document("fermat"))
    C = residual_cubic(SL)
    scan = singular_fiber_scan(SL, jobs=args.jobs)
    verdict, x, (p, q) = trisection_two_torsion(SL)
    checks = []
    for a in ("8", "27", "-1", "1/8"):
        v, y, _ = trisection_two_torsion(SL, Fraction(a))
        checks.append({"a": a, "two_torsion": v, "meeting_point": y.to_json()})
    pre = pointgen.torsion_precheck(SL, (1, 1, 2, 2), args.bound)
    return {
        "residual_cubic": str(C),
        "fibers": scan.to_json(),
        "euler_audit": {
            "total": scan.euler_total,
            "terms": [f"{f.count}*{f.euler}" for f in scan.fibers],
        },
        "two_torsion": {
            "points": [[str(c) for c in p.coords], [str(c) for c in q.coords]],
            "meeting_point": x.to_json(),
            "verdict": verdict,
            "on_curve": C(x.coords) == 0,
            "specializations": checks,
        },
        "torsion_precheck": pre.to_json(),
    }


def cmd_gram(args):
    if args.m is not None:
        if args.b is None or args.c is None:
            raise CliError("BAD_OPTION", "the general case needs --m, --b and --c")
        return lattice.general_gram(args.m, Fraction(args.b), Fraction(args.c)).to_json()
    if args.sigma_sq is None:
        raise CliError("BAD_OPTION", "gram needs --sigma-sq or --m/--b/--c")
    return lattice.quartic_gram(Fraction(args.sigma_sq)).to_json()


def cmd_schubert(args):
    cls = lattice.line_count_class(args.n, args.d)
    out = {"n": args.n, "d": args.d, "class": cls.to_json()}
    if 2 * (args.n - 1) - (args.d + 1) == 1:
        out["fano_curve_degree"] = lattice.fano_curve_degree(args.n, args.d)
    return out


def cmd_monodromy(args):
    if args.m < 2:
        raise CliError("BAD_OPTION", "--m must be at least 2")
    fixed = {k: monodromy.fixed_torsion(monodromy.kodaira_matrix(k), args.m).to_json()
             for k in ("I1", "I2", "I3", "II", "III", "IV")}
    return {"case": monodromy.case_analysis(args.m).to_json(), "fixed_torsion": fixed}


def cmd_slice(args):
    X, L, H3, cone = parse_threefold(load_document(args.input))
    SL = pointgen.slice_threefold(X, L, H3)
    out = {
        "slice": {"surface": form_to_json(SL.quartic),
                  "line": {"points": [[str(c) for c in p.coords] for p in SL.line.span_points]}},
        "smoothness_certificate": SL.certificate,
        "branch": branch_analysis(SL).to_json(),
    }
    if cone is not None:
        out["cone_test"] = pointgen.cone_test(X, cone).to_json()
    return out


COMMANDS = {
    "analyze": cmd_analyze,
    "fibers": cmd_fibers,
    "generate": cmd_generate,
    "fermat-demo": cmd_fermat_demo,
    "gram": cmd_gram,
    "schubert": cmd_schubert,
    "monodromy": cmd_monodromy,
    "slice": cmd_slice,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="quarticfib", description="Elliptic fibrations of quartic surfaces with a line.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--bound", type=int, default=12, help="torsion bound")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("analyze", "fibers", "generate", "slice"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="JSON file or a bundled fixture name (fermat, synthetic, threefold)")
        if name == "fibers":
            p.add_argument("--param", help="single fiber parameter (rational or inf)")
        if name == "generate":
            p.add_argument("--mode", choices=("qr", "three-lines"), default="qr")
            p.add_argument("--count", type=int, default=10)
            p.add_argument("--point", help="comma-separated base point on L (qr mode)")
            p.add_argument("--param", help="comma-separated fiber parameters (three-lines mode)")
    sub.add_parser("fermat-demo", parents=[common])
    p = sub.add_parser("gram", parents=[common])
    p.add_argument("--sigma-sq", dest="sigma_sq")
    p.add_argument("--m", type=int)
    p.add_argument("--b")
    p.add_argument("--c")
    p = sub.add_parser("schubert", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p = sub.add_parser("monodromy", parents=[common])
    p.add_argument("--m", type=int, required=True)
    return ap


def _validate_options(args):
    if args.jobs < 1:
        raise CliError("BAD_OPTION", "--jobs must be at least 1")
    if args.bound < 1:
        raise CliError("BAD_OPTION", "--bound must be at least 1")
    if getattr(args, "count", 1) < 1:
        raise CliError("BAD_OPTION", "--count must be at least 1")
    for name in ("sigma_sq", "b", "c"):
        val = getattr(args, name, None)
        if val is not None:
            try:
                Fraction(val)
            except (ValueError, ZeroDivisionError) as exc:
                raise CliError("BAD_OPTION", f"--{name.replace('_', '-')} must be a rational number") from exc


def _render_text(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            lines.extend(_render_text(v, f"{prefix}{k}."))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            lines.extend(_render_text(v, f"{prefix}{i}."))
    else:
        val = json.dumps(obj) if not isinstance(obj, str) else obj
        lines.append(f"{prefix[:-1]}: {val}")
    return lines


def _classify_error(exc):
    if isinstance(exc, CliError):
        return exc.code, exc.detail
    if isinstance(exc, LineNotOnSurfaceError):
        return "LINE_NOT_ON_SURFACE", str(exc)
    if isinstance(exc, SingularSurfaceError):
        return "SINGULAR_SURFACE", str(exc)
    if isinstance(exc, pointgen.TorsionDetected):
        return "TORSION_DETECTED", str(exc)
    if isinstance(exc, pointgen.PointGenError) and "singular" in str(exc):
        return "FIBER_SINGULAR", str(exc)
    if isinstance(exc, DeskLimitError):
        return "DESK_LIMIT", str(exc)
    if isinstance(exc, lattice.LatticeError):
        return "LATTICE_ERROR", str(exc)
    if isinstance(exc, monodromy.MonodromyError):
        return "MONODROMY_ERROR", str(exc)
    if isinstance(exc, (FibrationError, CubicError, GeometryError, AlgebraError)):
        return "GEOMETRY_ERROR", str(exc)
    return "INTERNAL", "unexpected internal error"


def run(argv=None, out=None):
    """Run one command; returns the exit status."""
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _validate_options(args)
        result = COMMANDS[args.command](args)
    except Exception as exc:  # every failure leaves with a stable code
        code, detail = _classify_error(exc)
        print(json.dumps({"error": code, "detail": detail}), file=sys.stderr)
        return EXIT_CODES[code]
    if args.command == "generate":
        for item in result:
            if args.format == "json":
                out.write(json.dumps(item) + "\n")
            else:
                out.write(" ".join(_render_text(item)) + "\n")
    elif args.format == "json":
        out.write(json.dumps(result, indent=2) + "\n")
    else:
        out.write("\n".join(_render_text(result)) + "\n")
    return 0


def main(argv=None):
    sys.exit(run(argv))
