"""
Command-line entry point ``cstar-ineq``.

Exit codes: 0 when everything checked holds (or a reproduction matches),
1 when an inequality violation or failed check was found, 2 for usage,
input or numerical errors.
"""

import argparse
from dataclasses import dataclass, field
import json
import math
import os
import sys

import numpy as np

from . import inequalities as ineq
from .convexity import catalog_function, supporting_line, verify_supporting_line
from .errors import CStarIneqError, UsageError
from .linalg import as_matrix
from .localization import build_localization, verify_transport
from .states import make_state
from .suites import run_all

TOL_ENV = "CSTAR_INEQ_TOL"

CHECK_FAMILIES = {
    "hilbert-mccarty": "hilbert-mccarty",
    "state-mccarty": "state-mccarty",
    "norm-mccarty": "norm-mccarty",
    "mond-pecaric-state": "mond-pecaric-state",
    "loewner": "loewner-mccarty",
    "loewner-mccarty": "loewner-mccarty",
    "commutative-loewner": "commutative-loewner",
}


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)
    exit_code: int = 0
    error: str = ""
    table_view: str = ""
    out: str = "text"

    def as_dict(self):
        out = {"command": self.command, "inputs": _plain(self.inputs),
               "reports": _plain(self.reports), "exit_code": self.exit_code}
        if self.error:
            out["error"] = self.error
        return out


# -- matrix files ----------------------------------------------------------------------


def _entry(v, where):
    if isinstance(v, bool):
        raise UsageError(f"{where}: booleans are not matrix entries")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in v
    ):
        return complex(v[0], v[1])
    raise UsageError(f"{where}: entry {v!r} is neither a number nor [re, im]")


def parse_matrix(doc, source="<matrix>"):
    """Build a complex matrix from a decoded MatrixFile document."""
    if not isinstance(doc, dict) or not {"rows", "cols", "entries"} <= doc.keys():
        raise UsageError(f"{source}: expected an object with rows, cols and entries")
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise UsageError(f"{source}: rows and cols must be positive integers")
    if not isinstance(entries, list) or len(entries) != rows:
        raise UsageError(f"{source}: expected {rows} rows of entries")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise UsageError(f"{source}: row {i + 1} does not have {cols} entries")
        for j, v in enumerate(row):
            out[i, j] = _entry(v, f"{source}[{i + 1},{j + 1}]")
    return as_matrix(out)


def read_matrix(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from None
    return parse_matrix(doc, path)


def matrix_document(m):
    m = np.asarray(m)
    return {"rows": m.shape[0], "cols": m.shape[1], "entries": _plain(m)}


# -- number formatting -----------------------------------------------------------------


def _g(x):
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _plain(obj):
    """Convert results into JSON-ready values rounded to 12 significant digits."""
    if isinstance(obj, ineq.InequalityReport):
        return {
            "family": obj.family,
            "parameter": _plain(obj.parameter),
            "lhs": _plain(obj.lhs),
            "rhs": _plain(obj.rhs),
            "difference": _plain(obj.difference),
            "holds": bool(obj.holds),
            "tolerance": _g(obj.tolerance),
            "min_eigenvalue": _g(obj.min_eigenvalue),
            "degenerate": bool(obj.degenerate),
        }
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return _g(z.real) if z.imag == 0 else [_g(z.real), _g(z.imag)]
    if isinstance(obj, (float, np.floating)):
        return _g(obj)
    return obj


def _text_value(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    return str(v)


def _text_lines(obj, indent=""):
    lines = []
    for key, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text_lines(v, indent + "  "))
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            for i, item in enumerate(v, 1):
                lines.append(f"{indent}{key} #{i}:")
                lines.extend(_text_lines(item, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {_text_value(v)}")
    return lines


def render(report, fmt):
    doc = report.as_dict()
    if fmt == "json":
        return json.dumps(doc, indent=2)
    text = "\n".join(_text_lines(doc))
    if report.table_view:
        text = report.table_view + "\n\n" + text
    return text


def _layout(name, mats):
    out = [f"instance {name}"]
    for label, m in mats:
        m = np.asarray(m).real
        out.append(f"  {label} =")
        for row in m:
            out.append("    " + "  ".join(f"{v:12.4f}" for v in row))
    return "\n".join(out)


# -- tolerance -------------------------------------------------------------------------


def _tolerance(arg):
    if arg is not None:
        return arg
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a decimal number") from None
    if not (math.isfinite(tol) and tol >= 0):
        raise UsageError(f"{TOL_ENV} must be a non-negative finite number")
    return tol


# -- commands --------------------------------------------------------------------------


def cmd_verify_paper(args):
    reps = ineq.reproduce_paper_counterexamples(strict=False)
    views, problems = [], []
    for rep in reps:
        views.append(_layout(rep.extras["name"], [("A", rep.lhs), ("B", rep.rhs), ("C", rep.difference)]))
        problems.extend(rep.extras["mismatches"])
    out = []
    for rep in reps:
        d = _plain(rep)
        d["instance"] = rep.extras["name"]
        d["x"] = _plain(rep.extras["x"])
        d["t"] = _plain(rep.extras["t"])
        d["det_C"] = _g(rep.extras["det_C"])
        d["mismatches"] = list(rep.extras["mismatches"])
        out.append(d)
    report = RunReport("verify-paper", {}, out, 2 if problems else 0,
                       table_view="\n\n".join(views))
    if problems:
        report.error = f"published values not reproduced: {problems[0]}"
    return report


def cmd_check(args):
    family = CHECK_FAMILIES.get(args.family)
    if family is None:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(CHECK_FAMILIES)}")
    tol = _tolerance(args.tol)
    t = read_matrix(args.t)
    x = read_matrix(args.x)
    inputs = {"family": family, "t": args.t, "x": args.x, "r": args.r, "rho": args.rho,
              "f": args.f, "tol": tol}
    needs_r = family != "mond-pecaric-state"
    if needs_r and args.r is None:
        raise UsageError(f"family {family} needs --r")
    rho = None
    if family in ("state-mccarty", "mond-pecaric-state"):
        if args.rho is None:
            raise UsageError(f"family {family} needs --rho")
        rho = make_state(read_matrix(args.rho))
    if family == "mond-pecaric-state" and args.f is None:
        raise UsageError("family mond-pecaric-state needs --f")

    if family == "hilbert-mccarty":
        rep = ineq.check_hilbert_mccarty(t, x, args.r, tol)
    elif family == "state-mccarty":
        rep = ineq.check_state_mccarty(t, rho, x, args.r, tol)
    elif family == "norm-mccarty":
        rep = ineq.check_norm_mccarty(t, x, args.r, tol)
    elif family == "mond-pecaric-state":
        rep = ineq.check_mond_pecaric_state(t, rho, x, args.f, tol)
    elif family == "loewner-mccarty":
        rep = ineq.check_loewner_mccarty(t, x, args.r, tol)
    else:
        rep = ineq.check_commutative_loewner(t, x, args.r, tol)
    return RunReport("check", inputs, [rep], 0 if rep.holds else 1)


def cmd_search(args):
    cfg = ineq.SearchConfig(args.dim, (args.r_min, args.r_max), args.trials, args.seed, args.dist)
    findings = ineq.search_counterexamples(cfg, args.family)
    inputs = {"dim": args.dim, "r_min": args.r_min, "r_max": args.r_max, "trials": args.trials,
              "seed": args.seed, "dist": args.dist, "family": args.family}
    out = {
        "findings": len(findings),
        "top": [
            {"index": f.index, "r": f.r, "min_eigenvalue": f.min_eigenvalue,
             "tolerance": f.tolerance, "t": f.t, "x": f.x}
            for f in findings[: args.top]
        ],
    }
    return RunReport("search", inputs, [out], 1 if findings else 0)


def cmd_gns(args):
    rho = make_state(read_matrix(args.rho))
    t = read_matrix(args.t)
    if t.shape != (args.m, args.m):
        raise UsageError(f"t has shape {t.shape}, expected ({args.m}, {args.m})")
    if args.samples < 0:
        raise UsageError("--samples must be non-negative")
    f = ineq.resolve_function(args.f, t, positive=False)
    loc = build_localization(args.m, args.n, rho)
    rep = verify_transport(loc, t, f, args.samples, args.seed)
    inputs = {"m": args.m, "n": args.n, "rho": args.rho, "t": args.t, "f": args.f,
              "samples": args.samples, "seed": args.seed}
    out = {
        "dim_quotient": loc.dim_quotient,
        "residual_operator": rep.residual_operator,
        "residual_function": rep.residual_function,
        "residual_inner": rep.residual_inner,
        "tolerance": rep.tolerance,
        "norm_t": rep.norm_t,
        "norm_T": rep.norm_T,
        "passed": rep.passed,
    }
    return RunReport("gns", inputs, [out], 0 if rep.passed else 1)


def cmd_supporting_line(args):
    f = catalog_function(args.f, args.a, args.b)
    line = supporting_line(f, args.x0, args.eps)
    minorant_ok, touches_ok, worst = verify_supporting_line(f, line, args.x0, args.eps)
    inputs = {"f": args.f, "a": args.a, "b": args.b, "x0": args.x0, "eps": args.eps}
    out = {"c": line.c, "d": line.d, "case": line.case, "minorant_ok": minorant_ok,
           "touches_ok": touches_ok, "worst_gap": worst}
    return RunReport("supporting-line", inputs, [out], 0 if minorant_ok and touches_ok else 1)


def cmd_suite(args):
    results = run_all()
    out = [{"name": r.name, "passed": r.passed, "trials": r.trials, "failures": r.failures,
            "elapsed": r.elapsed, "detail": r.detail} for r in results]
    return RunReport("suite", {}, out, 0 if all(r.passed for r in results) else 1)


# -- parser ------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="cstar-ineq", description="Convex operator inequalities on matrix algebras.")
    p.add_argument("--out", choices=("text", "json"), default="text", help="output format")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify-paper", help="reproduce the two published M_2 witnesses")
    s.set_defaults(run=cmd_verify_paper)

    s = sub.add_parser("check", help="check one inequality instance")
    s.add_argument("--family", required=True)
    s.add_argument("--t", required=True, metavar="FILE")
    s.add_argument("--x", required=True, metavar="FILE")
    s.add_argument("--r", type=float)
    s.add_argument("--rho", metavar="FILE")
    s.add_argument("--f", metavar="LABEL")
    s.add_argument("--tol", type=float)
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("search", help="seeded random search for Loewner-order violations")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--r-min", type=float, required=True)
    s.add_argument("--r-max", type=float, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dist", choices=ineq.DISTRIBUTIONS, default="real-gaussian")
    s.add_argument("--family", choices=ineq.SEARCH_FAMILIES, required=True)
    s.add_argument("--top", type=int, default=5, help="number of witnesses to print")
    s.set_defaults(run=cmd_search)

    s = sub.add_parser("gns", help="localize at a state and check operator transport")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--rho", required=True, metavar="FILE")
    s.add_argument("--t", required=True, metavar="FILE")
    s.add_argument("--f", required=True, metavar="LABEL")
    s.add_argument("--samples", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(run=cmd_gns)

    s = sub.add_parser("supporting-line", help="supporting line of a catalog function")
    s.add_argument("--f", required=True, metavar="LABEL")
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--b", type=float, required=True)
    s.add_argument("--x0", type=float, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.set_defaults(run=cmd_supporting_line)

    s = sub.add_parser("suite", help="run every property suite")
    s.set_defaults(run=cmd_suite)
    return p


def run(argv=None):
    """Parse ``argv`` and execute; errors become a report with exit code 2."""
    argv = list(sys.argv[1:] if argv is None else argv)
    command = next((a for a in argv if not a.startswith("-")), "")
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return RunReport(command, exit_code=2, error=str(exc))
    try:
        report = args.run(args)
    except (CStarIneqError, ValueError, ArithmeticError) as exc:
        report = RunReport(args.command, exit_code=2, error=str(exc).splitlines()[0])
    report.out = args.out
    return report


def main(argv=None):
    report = run(argv)
    if report.exit_code == 2 and not report.reports:
        print(f"cstar-ineq: error: {report.error}", file=sys.stderr)
        return 2
    print(render(report, report.out))
    if report.error:
        print(f"cstar-ineq: {report.error}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
