"""``involut``: grids, coefficient tables, identity suites, integrals and reports.

Exit status is 0 when every requested check passes, 1 when a check fails,
2 for bad arguments or parameters, and 3 when output cannot be written.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import enum
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__, _series, lambert
from .analysis import FunctionHandle, integral_table, report_row, transfer_identity_check
from .errors import AccuracyError, ContractViolation, ConvergenceError
from .identities import (
    CoefficientFamily,
    Family,
    convolution_check,
    rothe_hagen_check,
    rothe_hagen_specialization,
    verify_lagrange_oracle,
    verify_lambert_log_identity_formal,
    verify_log_identity_formal,
    verify_logg_coeff_via_bernoulli,
)
from .involution import (
    PhiParams,
    defining_equation_check,
    f_eval,
    g_eval,
    hypergeom_agreement_check,
    involution_law_check,
    log_consistency_check,
    monotonicity_check,
    neg_log_g_eval,
    phi,
    piecewise_check,
    prudnikov_linear_check,
    scaling_check,
    unit_grid,
)
from .report import IdentityReport, jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUITES = ("log_identity", "rothe_hagen", "involution", "integrals", "lambert")
GENERAL_SUITES = SUITES[:-1]


class Command(enum.Enum):
    EVAL = "eval"
    COEFFS = "coeffs"
    VERIFY = "verify"
    INTEGRATE = "integrate"
    REPORT = "report"


class OutputFormat(enum.Enum):
    JSON = "json"
    CSV = "csv"


class UsageError(Exception):
    """Bad arguments or parameters (exit status 2)."""


@dataclass(frozen=True)
class RunConfig:
    command: Command
    a: Fraction | float | None
    b: Fraction | float | None
    lambert: bool
    grid: int
    tol: float
    order: int
    n_max: int
    output_format: OutputFormat
    output_path: str | None
    float_mode: bool = False
    suites: tuple[str, ...] = ()

    @property
    def params(self) -> PhiParams:
        return PhiParams(self.a, self.b)

    @property
    def rational(self) -> bool:
        return isinstance(self.a, Fraction) and isinstance(self.b, Fraction)

    def params_dict(self) -> dict:
        if self.lambert and self.command is not Command.VERIFY:
            base = {"case": "lambert"}
        else:
            base = {"case": "power", "a": self.a, "b": self.b}
        base.update({"tol": self.tol, "order": self.order, "grid": self.grid, "n_max": self.n_max})
        return base


_SQRT = re.compile(r"^sqrt\((.+)\)$")


def parse_real(text: str) -> Fraction | float:
    """A rational literal (``3``, ``1/2``, ``0.25``), or ``pi``, ``e``, ``sqrt(r)``.

    Anything that is not a rational literal comes back as a float and is
    treated as irrational.
    """
    t = text.strip()
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        pass
    if t == "pi":
        return math.pi
    if t == "e":
        return math.e
    m = _SQRT.match(t)
    if m:
        inner = parse_real(m.group(1))
        if inner < 0:
            raise argparse.ArgumentTypeError(f"sqrt of a negative number: {text!r}")
        root = math.isqrt(inner.numerator) if isinstance(inner, Fraction) else None
        if isinstance(inner, Fraction) and root * root == inner.numerator:
            droot = math.isqrt(inner.denominator)
            if droot * droot == inner.denominator:
                return Fraction(root, droot)
        return math.sqrt(float(inner))
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


def _int_at_least(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}")
        return v

    return parse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=parse_real, help="lower exponent a > 0")
    common.add_argument("--b", type=parse_real, help="upper exponent b > a (default a + 1)")
    common.add_argument("--grid", type=_int_at_least(2), default=101, help="grid points (default 101)")
    common.add_argument("--tol", type=_positive_float, default=1e-9, help="tolerance (default 1e-9)")
    common.add_argument("--order", type=_int_at_least(2), default=24, help="series truncation N (default 24)")
    common.add_argument("--n-max", type=_int_at_least(1), default=None,
                        help="largest coefficient index or Rothe-Hagen order (default N)")
    common.add_argument("--output-format", choices=[f.value for f in OutputFormat], default="json")
    common.add_argument("--output", metavar="PATH", help="write to PATH instead of stdout")
    common.add_argument("--float", dest="float_mode", action="store_true",
                        help="allow irrational parameters by printing floats")

    parser = _Parser(prog="involut", description="Involutions of x^a - x^b and their identities.")
    parser.add_argument("--version", action="version", version=f"involut {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "eval": "tabulate x, phi, f, g, -log g on a grid",
        "coeffs": "exact coefficient families",
        "verify": "run identity suites",
        "integrate": "closed-form integrals against quadrature",
        "report": "bundle coefficients, suites and integrals into one JSON document",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        if name == "verify":
            p.add_argument("--log-identity", action="store_true")
            p.add_argument("--rothe-hagen", action="store_true")
            p.add_argument("--involution", action="store_true")
            p.add_argument("--integrals", action="store_true")
            p.add_argument("--lambert", action="store_true", help="the -x log x limit-case suite")
            p.add_argument("--all", action="store_true")
        else:
            p.add_argument("--lambert", action="store_true", help="use phi(x) = -x log x")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    command = Command(ns.command)
    fmt = OutputFormat(ns.output_format)
    if command is Command.REPORT and fmt is OutputFormat.CSV:
        raise UsageError("report output is JSON only")
    a, b = ns.a, ns.b
    suites: tuple[str, ...] = ()
    if command is Command.VERIFY:
        chosen = [s for s in SUITES if getattr(ns, s)]
        if ns.all or not chosen:
            chosen = list(SUITES)
        suites = tuple(chosen)
        use_lambert = "lambert" in suites
        need_ab = any(s in GENERAL_SUITES for s in suites)
    else:
        use_lambert = ns.lambert
        if use_lambert and (a is not None or b is not None):
            raise UsageError("--lambert cannot be combined with --a/--b")
        need_ab = not use_lambert
    if need_ab or a is not None:
        if a is None:
            if b is not None:
                raise UsageError("--b needs --a")
            a = Fraction(1)
        if not a > 0:
            raise UsageError(f"a must be > 0, got {a}")
        if b is None:
            b = a + 1
        if not b > a:
            raise UsageError(f"need b > a, got a={a}, b={b}")
    n_max = ns.order if ns.n_max is None else ns.n_max
    if command is Command.COEFFS and n_max > ns.order:
        raise UsageError(f"--n-max {n_max} exceeds the truncation order {ns.order}")
    return RunConfig(
        command=command, a=a, b=b, lambert=use_lambert, grid=ns.grid, tol=ns.tol, order=ns.order,
        n_max=n_max, output_format=fmt, output_path=ns.output, float_mode=ns.float_mode, suites=suites,
    )


# --- commands; each returns (payload, all_passed) ---

def _grid(n: int) -> list[float]:
    return [k / (n - 1) for k in range(n)]


def cmd_eval(cfg: RunConfig):
    rows = []
    inner = cfg.tol * 1e-2
    if cfg.lambert:
        for x in _grid(cfg.grid):
            rows.append({
                "x": x,
                "phi": lambert.lambert_phi(x),
                "f": lambert.lambert_f(x),
                "g": lambert.g_lambert(x, inner),
                "neg_log_g": 0.0 - lambert.log_g_lambert(x),
            })
    else:
        params = cfg.params
        for x in _grid(cfg.grid):
            rows.append({
                "x": x,
                "phi": phi(params, x),
                "f": f_eval(params, x, inner).value,
                "g": g_eval(params, x, inner).value,
                "neg_log_g": neg_log_g_eval(params, x, inner),
            })
    return {"columns": ["x", "phi", "f", "g", "neg_log_g"], "rows": rows}, True


def cmd_coeffs(cfg: RunConfig):
    ns = range(1, cfg.n_max + 1)
    if cfg.lambert:
        cols = ["n", "LAMBERT_G", "LAMBERT_LOGG"]
        fams = (CoefficientFamily(Family.LAMBERT_G), CoefficientFamily(Family.LAMBERT_LOGG))
        rows = [{"n": n, cols[1]: fams[0](n), cols[2]: fams[1](n)} for n in ns]
        if cfg.float_mode:
            rows = [{k: (float(v) if k != "n" else v) for k, v in r.items()} for r in rows]
        return {"columns": cols, "family_parameter": None, "rows": rows}, True
    cols = ["n", "G_COEFF", "LOGG_COEFF"]
    if cfg.rational:
        ap = cfg.a / (cfg.b - cfg.a)
        g, lg = CoefficientFamily(Family.G_COEFF, ap), CoefficientFamily(Family.LOGG_COEFF, ap)
        rows = [{"n": n, "G_COEFF": g(n), "LOGG_COEFF": lg(n)} for n in ns]
        if cfg.float_mode:
            rows = [{"n": r["n"], "G_COEFF": float(r["G_COEFF"]), "LOGG_COEFF": float(r["LOGG_COEFF"])}
                    for r in rows]
        return {"columns": cols, "family_parameter": ap, "rows": rows}, True
    if not cfg.float_mode:
        raise UsageError("exact coefficients need rational a and b; pass --float for floating-point values")
    ap = float(cfg.a) / (float(cfg.b) - float(cfg.a))
    n = np.arange(1, cfg.n_max + 1, dtype=float)
    gv = np.exp(_series.log_poch(ap * n, n - 1) - _series.gammaln(n + 1))
    lv = np.exp(_series.log_poch(ap * n + 1, n - 1) - _series.gammaln(n + 1))
    rows = [{"n": int(k), "G_COEFF": float(x), "LOGG_COEFF": float(y)} for k, x, y in zip(n, gv, lv)]
    return {"columns": cols, "family_parameter": ap, "rows": rows}, True


def _require_rational(cfg: RunConfig, suite: str):
    if not cfg.rational:
        raise UsageError(f"the {suite} suite is exact and needs rational a and b")


def suite_log_identity(cfg: RunConfig) -> list[IdentityReport]:
    _require_rational(cfg, "log-identity")
    ap = cfg.a / (cfg.b - cfg.a)
    out = [verify_log_identity_formal(ap, cfg.order)]
    out += [verify_logg_coeff_via_bernoulli(ap, n) for n in range(1, min(cfg.order, 10) + 1)]
    if cfg.b - cfg.a == 1:
        out.append(verify_lagrange_oracle(cfg.a, min(cfg.order, 12)))
    return out


def suite_rothe_hagen(cfg: RunConfig) -> list[IdentityReport]:
    _require_rational(cfg, "rothe-hagen")
    out = []
    for n in range(1, cfg.n_max + 1):
        out.append(rothe_hagen_check(*rothe_hagen_specialization(cfg.a, n), n))
        out.append(convolution_check(cfg.a, n))
    return out


def suite_involution(cfg: RunConfig) -> list[IdentityReport]:
    params = cfg.params
    grid = unit_grid(max(cfg.grid - 2, 1))
    tol = cfg.tol
    out = [
        involution_law_check(params, tol, grid),
        defining_equation_check(params, tol, grid),
        piecewise_check(params, tol, grid),
        monotonicity_check(params, grid),
        log_consistency_check(params, tol, grid),
    ]
    out += [scaling_check(params, 2, x, tol) for x in (0.1, 0.3, 0.6)]
    if params.c == 1.0:
        out += [prudnikov_linear_check(params.af + 1, x, tol)
                for x in (params.x0 + 0.5 * (1 - params.x0), 0.999) if x >= params.x0 + 1e-3]
        if float(params.a) == int(params.af) and params.af >= 2:
            out.append(hypergeom_agreement_check(int(params.af), tol))
    return out


def suite_integrals(cfg: RunConfig) -> list[IdentityReport]:
    return integral_table(cfg.params, max(cfg.tol, 1e-10))


def suite_lambert(cfg: RunConfig) -> list[IdentityReport]:
    tol = max(cfg.tol, 1e-10)
    case = lambert.LambertCase()
    out = [verify_lambert_log_identity_formal(cfg.order)]
    residuals = []
    for t in (-lambert.INV_E, -0.3, -0.1, 0.0, 0.5, math.e, 10.0, 1e3):
        r = lambert.w0(t)
        residuals.append((t, r.residual / max(1.0, abs(t))))
    out.append(IdentityReport.numeric("w0_residual", residuals, 1e-14))
    out += [
        lambert.involution_check_lambert(1e-9),
        lambert.linear_regime_check(1e-10),
        lambert.identity_chain_check(1e-10),
        lambert.moment_check(8, 1e-10),
        lambert.limit_order_check(),
    ]
    out += list(lambert.lambert_integrals(max(tol, 1e-9)).reports)
    hx = FunctionHandle(lambda x: 0.0 if x == 0.0 else -x * math.log(x), "-x log x")
    dhx = FunctionHandle(lambda x: -math.log(x) - 1.0, "-log x - 1")
    ident = FunctionHandle(lambda x: x, "x")
    one = FunctionHandle(lambda x: 1.0, "1")
    out.append(transfer_identity_check(case, ident, one, 1e-7))
    out.append(transfer_identity_check(case, hx, dhx, 1e-7))
    return out


_SUITE_FUNCS = {
    "log_identity": suite_log_identity,
    "rothe_hagen": suite_rothe_hagen,
    "involution": suite_involution,
    "integrals": suite_integrals,
    "lambert": suite_lambert,
}


def run_suites(cfg: RunConfig) -> list[IdentityReport]:
    out = []
    for s in cfg.suites:
        out += _SUITE_FUNCS[s](cfg)
    return out


def cmd_verify(cfg: RunConfig):
    reports = run_suites(cfg)
    ok = all(r.passed for r in reports)
    if cfg.output_format is OutputFormat.CSV:
        rows = [{"identity_name": r.identity_name, "passed": r.passed,
                 "max_residual": r.max_residual, "tolerance": r.tolerance} for r in reports]
        return {"columns": ["identity_name", "passed", "max_residual", "tolerance"], "rows": rows}, ok
    return [r.to_dict() for r in reports], ok


def lambert_rows(tol: float) -> list[dict]:
    L = lambert.lambert_integrals(tol)
    d = L.to_dict()
    pub = lambert.PUBLISHED_FIGURES
    notes = {
        "int_g": f"published figures {pub['int_g_first']!r} and {pub['int_g_second']!r}",
        "int_f": f"published figure {pub['int_f']!r}; 2 int g - 1 = {2 * L.int_g - 1!r}",
        "int_neg_log_g_over_w": "",
        "int_neg_log_f_over_x": "",
    }
    status = {r.identity_name: r for r in L.reports}
    which = {"int_g": "lambert_int_g", "int_f": "lambert_int_f",
             "int_neg_log_g_over_w": "lambert_int_neg_log_g", "int_neg_log_f_over_x": "lambert_int_neg_log_f"}
    rows = []
    for key in ("int_g", "int_f", "int_neg_log_g_over_w", "int_neg_log_f_over_x"):
        closed, numeric = d["closed"][key], d["quadrature"][key]
        r = status[which[key]]
        rows.append({"integral": key, "closed": closed, "numeric": numeric, "difference": abs(closed - numeric),
                     "tolerance": r.tolerance, "passed": r.passed, "annotation": notes[key]})
    rows.append({"integral": "series_sum_S", "closed": L.series_sum, "numeric": L.series_sum,
                 "difference": 0.0, "tolerance": L.series_sum_bound, "passed": True,
                 "annotation": "direct sum to n = 10000 plus trigamma tail; tolerance is the error bound"})
    return rows


INTEGRAL_COLUMNS = ["integral", "closed", "numeric", "difference", "tolerance", "passed", "annotation"]


def integral_rows(cfg: RunConfig) -> list[dict]:
    tol = max(cfg.tol, 1e-10)
    if cfg.lambert:
        try:
            return lambert_rows(max(tol, 1e-9))
        except AccuracyError as exc:
            return [{"integral": "lambert", "closed": None, "numeric": exc.estimate, "difference": None,
                     "tolerance": tol, "passed": False, "annotation": str(exc)}]
    return [report_row(r) for r in integral_table(cfg.params, tol)]


def cmd_integrate(cfg: RunConfig):
    rows = integral_rows(cfg)
    return {"columns": INTEGRAL_COLUMNS, "rows": rows}, all(r["passed"] for r in rows)


def cmd_report(cfg: RunConfig):
    coeff_cfg = cfg
    if not cfg.lambert and not cfg.rational:
        coeff_cfg = RunConfig(**{**cfg.__dict__, "float_mode": True})
    coeffs, _ = cmd_coeffs(coeff_cfg)
    if cfg.lambert:
        suite_cfg = RunConfig(**{**cfg.__dict__, "suites": ("lambert",)})
    else:
        names = SUITES[:-1] if cfg.rational else ("involution", "integrals")
        suite_cfg = RunConfig(**{**cfg.__dict__, "suites": names})
    reports = run_suites(suite_cfg)
    rows = integral_rows(cfg)
    ok = all(r.passed for r in reports) and all(r["passed"] for r in rows)
    doc = {
        "params": cfg.params_dict(),
        "coefficients": coeffs,
        "identities": [r.to_dict() for r in reports],
        "integrals": {"columns": INTEGRAL_COLUMNS, "rows": rows},
        "meta": {
            "tool": "involut",
            "version": __version__,
            "all_passed": ok,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        },
    }
    return doc, ok


_COMMANDS = {
    Command.EVAL: cmd_eval,
    Command.COEFFS: cmd_coeffs,
    Command.VERIFY: cmd_verify,
    Command.INTEGRATE: cmd_integrate,
    Command.REPORT: cmd_report,
}


# --- output ---

def _cell(v) -> str:
    v = jsonable(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(table: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(table["columns"])
    for row in table["rows"]:
        w.writerow([_cell(row.get(c)) for c in table["columns"]])
    return buf.getvalue()


def to_json(payload) -> str:
    return json.dumps(jsonable(payload), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def render(cfg: RunConfig, payload) -> str:
    if cfg.output_format is OutputFormat.CSV:
        return to_csv(payload)
    return to_json(payload)


def emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = config_from_args(ns)
        payload, ok = _COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"involut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractViolation as exc:
        print(f"involut: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, ConvergenceError) as exc:
        print(f"involut: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        emit(render(cfg, payload), cfg.output_path)
    except OSError as exc:
        print(f"involut: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
