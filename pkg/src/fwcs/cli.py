"""Command-line front end (``fwcs``).

Exit codes: 0 success, 2 usage or schema error, 3 numeric-domain failure,
4 verification failures present.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

import jsonschema

from .errors import (
    DivergenceError,
    DomainError,
    ParameterError,
    QuadratureError,
    SingularDeformationError,
    TruncationError,
    UnsupportedContourError,
)
from .foxwright import DEFAULT_MAX_TERMS, DEFAULT_TOL, FWParams, fw_eval
from .measure import measure_spec, radial_integrate, unity_constant, weight_g_eval, weight_moment_closed
from .states import bg_coefficients, kp_coefficients, overlap
from .statistics import excitation_probability, mandel_q
from .thermal import ThermalSpec, husimi_q, partition_function
from .verify import SUITES, report_to_json, run_suite

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4
MAX_ROWS = 1_000_000

_PAIR_LIST = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
}

PARAMETER_FILE_SCHEMA = {
    "type": "object",
    "properties": {
        "upper": _PAIR_LIST,
        "lower": _PAIR_LIST,
        "convention": {"enum": ["gamma", "product"]},
        "thermal": {
            "type": "object",
            "properties": {
                "e0": {"type": "number"},
                "hbar_omega": {"type": "number", "exclusiveMinimum": 0},
                "beta": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["beta"],
            "additionalProperties": False,
        },
    },
    "required": ["upper", "lower"],
    "additionalProperties": False,
}

NUMERIC_ERRORS = (
    DivergenceError,
    TruncationError,
    DomainError,
    SingularDeformationError,
    UnsupportedContourError,
    QuadratureError,
)


class UsageError(Exception):
    pass


# ------------------------------------------------------------ parsing


def parse_pairs(text: str) -> list[tuple[float, float]]:
    """``"a:A,b:B"`` -> ``[(a, A), (b, B)]``; the empty string is the empty list."""
    text = text.strip()
    if not text:
        return []
    out = []
    for item in text.split(","):
        parts = item.split(":")
        if len(parts) != 2:
            raise UsageError(f"bad pair {item!r}; expected value:step")
        try:
            out.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise UsageError(f"bad pair {item!r}; expected numbers") from None
    return out


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def load_parameter_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read parameter file {path}: {exc}") from None
    try:
        jsonschema.validate(doc, PARAMETER_FILE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"parameter file {path}: {exc.message}") from None
    return doc


def parameter_document(params: FWParams, convention: str, thermal: ThermalSpec | None) -> dict:
    doc: dict[str, Any] = {
        "upper": [list(p) for p in params.upper],
        "lower": [list(p) for p in params.lower],
        "convention": convention,
    }
    if thermal is not None:
        doc["thermal"] = {"e0": thermal.e0, "hbar_omega": thermal.hbar_omega, "beta": thermal.beta}
    return doc


class Context:
    """Resolved global options shared by every subcommand."""

    def __init__(self, args: argparse.Namespace):
        doc = load_parameter_file(args.params) if args.params else {}
        upper = parse_pairs(args.upper) if args.upper is not None else [tuple(p) for p in doc.get("upper", [])]
        lower = parse_pairs(args.lower) if args.lower is not None else [tuple(p) for p in doc.get("lower", [])]
        self.params = FWParams(upper, lower)
        self.convention = args.convention or doc.get("convention", "gamma")
        self.tol = args.tol
        self.max_terms = args.max_terms
        self.format = args.format
        th = doc.get("thermal")
        beta = getattr(args, "beta", None)
        if beta is not None:
            self.thermal = ThermalSpec(beta, args.e0 if args.e0 is not None else 0.0,
                                       args.hbar_omega if args.hbar_omega is not None else 1.0)
        elif th is not None:
            self.thermal = ThermalSpec(th["beta"], th.get("e0", 0.0), th.get("hbar_omega", 1.0))
        else:
            self.thermal = None
        if args.dump_params:
            text = json.dumps(parameter_document(self.params, self.convention, self.thermal), indent=2) + "\n"
            write_atomic(args.dump_params, text)

    def require_thermal(self) -> ThermalSpec:
        if self.thermal is None:
            raise UsageError("thermal data needed: pass --beta or a parameter file with a thermal block")
        return self.thermal


# ------------------------------------------------------------ output


def _num(v):
    if isinstance(v, complex):
        return {"re": _num(v.real), "im": _num(v.imag)}
    if isinstance(v, float):
        v = float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _num(obj)


def _cell(v) -> str:
    if isinstance(v, float):
        v = float(v)
        return repr(v) if math.isfinite(v) else _num(v)
    return str(v)


def render(rows: list[dict], fmt: str, single: bool = False) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(list(rows[0].keys()))
            for r in rows:
                writer.writerow([_cell(v) for v in r.values()])
        return buf.getvalue()
    payload = rows[0] if single else rows
    return json.dumps(_clean(payload), indent=2, allow_nan=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fwcs-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------ commands


def cmd_eval(ctx: Context, args) -> tuple[list[dict], bool]:
    z = parse_complex(args.z)
    v = fw_eval(ctx.params, z, ctx.tol, ctx.max_terms)
    rec = {
        "re": v.value.real,
        "im": v.value.imag,
        "terms_used": v.terms_used,
        "truncation_error": v.truncation_error,
        "convergence_index": ctx.params.delta,
    }
    return [rec], True


def cmd_state(ctx: Context, args):
    z = parse_complex(args.z)
    fn = bg_coefficients if args.kind == "BG" else kp_coefficients
    sc = fn(ctx.params, z, ctx.tol, ctx.convention, ctx.max_terms)
    vals = sc.values()
    probs = sc.probabilities()
    return [{"n": n, "re": float(c.real), "im": float(c.imag), "probability": float(p)} for n, (c, p) in
            enumerate(zip(vals, probs))], False


def cmd_overlap(ctx: Context, args):
    z1, z2 = parse_complex(args.z1), parse_complex(args.z2)
    v = overlap(ctx.params, z1, z2, args.kind, ctx.convention, ctx.tol)
    return [{"re": v.real, "im": v.imag, "abs": abs(v)}], True


def cmd_mandel(ctx: Context, args):
    r = mandel_q(ctx.params, args.x, ctx.convention, ctx.tol)
    return [{
        "x": args.x,
        "mean_n": r.mean_n,
        "second_moment": r.second_moment,
        "q": r.mandel_q,
        "classification": r.classification,
        "q_route2": r.mandel_q_route2,
        "route_discrepancy": r.route_discrepancy,
    }], True


def cmd_pn(ctx: Context, args):
    return [{"x": args.x, "n": args.n, "p_n": excitation_probability(ctx.params, args.x, args.n, ctx.convention,
                                                                     ctx.tol)}], True


def cmd_husimi(ctx: Context, args):
    spec = ctx.require_thermal()
    q = husimi_q(ctx.params, spec, args.x, ctx.convention, ctx.tol, args.route)
    return [{"x": args.x, "q_husimi": q, "partition_function": partition_function(spec)}], True


def cmd_measure(ctx: Context, args):
    ms = measure_spec(ctx.params, ctx.convention)
    k = unity_constant(ctx.params, ctx.convention)
    rec: dict[str, Any] = {
        "omega": ms.scale,
        "g_order": [ms.g_order.m, ms.g_order.n, ms.g_order.p_order, ms.g_order.q_order],
        "c_constant": ms.c_const.value,
        "unity_constant": k.value,
    }
    if args.x is not None:
        rec["weight"] = weight_g_eval(ms, args.x)
    moments = []
    for n in range(args.moments):
        closed = weight_moment_closed(ctx.params, n).value
        row = {"n": n, "closed": closed}
        if args.numeric:
            numeric = radial_integrate(ms, lambda x, n=n: x**n, 1e-10)
            row["numeric"] = numeric
            row["relative_residual"] = abs(numeric - closed) / closed
        moments.append(row)
    rec["moments"] = moments
    if ctx.format == "csv":
        return moments, False
    return [rec], True


def table_row(quantity: str, params: FWParams, convention: str, tol: float, fixed: dict, x: float) -> dict:
    if quantity == "mandel":
        r = mandel_q(params, x, convention, tol)
        return {"x": x, "q": r.mandel_q, "classification": r.classification}
    if quantity == "pn":
        return {"x": x, "n": fixed["n"], "p_n": excitation_probability(params, x, fixed["n"], convention, tol)}
    if quantity == "husimi":
        spec = ThermalSpec(**fixed["thermal"])
        return {"x": x, "q_husimi": husimi_q(params, spec, x, convention, tol)}
    if quantity == "eval":
        v = fw_eval(params, x, tol).value
        return {"x": x, "re": v.real, "im": v.imag}
    if quantity == "overlap":
        v = overlap(params, complex(math.sqrt(x)), fixed["z2"], fixed["kind"], convention, tol)
        return {"x": x, "re": v.real, "im": v.imag}
    raise UsageError(f"unknown table quantity {quantity!r}")


def _table_row_star(job):
    return table_row(*job)


def grid(start: float, stop: float, step: float) -> list[float]:
    if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
        raise UsageError("grid bounds must be finite")
    if step <= 0:
        raise UsageError("grid step must be positive")
    if start > stop:
        raise UsageError("grid start must not exceed stop")
    count = int(math.floor((stop - start) / step * (1 + 1e-12))) + 1
    if count > MAX_ROWS:
        raise UsageError(f"grid has {count} rows; the limit is {MAX_ROWS}")
    return [start + k * step for k in range(count)]


def cmd_table(ctx: Context, args):
    xs = grid(args.start, args.stop, args.step)
    fixed: dict[str, Any] = {"n": args.n, "kind": args.kind, "z2": parse_complex(args.z2)}
    if args.quantity == "husimi":
        t = ctx.require_thermal()
        fixed["thermal"] = {"beta": t.beta, "e0": t.e0, "hbar_omega": t.hbar_omega}
    jobs = [(args.quantity, ctx.params, ctx.convention, ctx.tol, fixed, x) for x in xs]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_table_row_star, jobs, chunksize=max(1, len(jobs) // (4 * args.workers))))
    else:
        rows = [_table_row_star(j) for j in jobs]
    return rows, False


# ------------------------------------------------------------ argparse


def _default_seed() -> int:
    raw = os.environ.get("FWCS_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"FWCS_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters and output")
    g.add_argument("--upper", help='upper pairs "a:A,a:A" (empty string for none)')
    g.add_argument("--lower", help='lower pairs "b:B,b:B" (empty string for none)')
    g.add_argument("--params", help="JSON parameter file")
    g.add_argument("--dump-params", metavar="PATH", help="write the resolved parameter file")
    g.add_argument("--convention", choices=["gamma", "product"])
    g.add_argument("--tol", type=float, default=DEFAULT_TOL)
    g.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS)
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("--out", metavar="PATH")
    g.add_argument("--seed", type=int, default=None, help="defaults to $FWCS_SEED, else 0")
    g.add_argument("--cases", type=int, default=2, help="randomized cases per suite")
    g.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="fwcs", description="Fox-Wright coherent states toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate the Fox-Wright function")
    p.add_argument("--z", required=True)

    p = sub.add_parser("state", parents=[common], help="coherent-state coefficients")
    p.add_argument("--z", required=True)
    p.add_argument("--kind", choices=["BG", "KP"], default="BG")

    p = sub.add_parser("overlap", parents=[common], help="overlap of two coherent states")
    p.add_argument("--z1", required=True)
    p.add_argument("--z2", required=True)
    p.add_argument("--kind", choices=["BG", "KP"], default="BG")

    p = sub.add_parser("mandel", parents=[common], help="Mandel Q at x = |z|^2")
    p.add_argument("--x", type=float, required=True)

    p = sub.add_parser("pn", parents=[common], help="excitation probability")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--n", type=int, required=True)

    thermal = argparse.ArgumentParser(add_help=False)
    thermal.add_argument("--beta", type=float)
    thermal.add_argument("--e0", type=float)
    thermal.add_argument("--hbar-omega", type=float)

    p = sub.add_parser("husimi", parents=[common, thermal], help="thermal Husimi distribution")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--route", choices=["closed", "series"], default="closed")

    p = sub.add_parser("measure", parents=[common], help="measure constants, weight and moments")
    p.add_argument("--x", type=float)
    p.add_argument("--moments", type=int, default=4)
    p.add_argument("--numeric", action="store_true", help="also integrate the moments numerically")

    p = sub.add_parser("verify", parents=[common], help="run identity verification suites")
    p.add_argument("--suite", required=True)

    p = sub.add_parser("table", parents=[common, thermal], help="grid table for plotting")
    p.add_argument("--quantity", required=True, choices=["mandel", "pn", "husimi", "eval", "overlap"])
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--n", type=int, default=0, help="level for pn")
    p.add_argument("--z2", default="0", help="second label for overlap")
    p.add_argument("--kind", choices=["BG", "KP"], default="BG")
    return parser


COMMANDS = {
    "eval": cmd_eval,
    "state": cmd_state,
    "overlap": cmd_overlap,
    "mandel": cmd_mandel,
    "pn": cmd_pn,
    "husimi": cmd_husimi,
    "measure": cmd_measure,
    "table": cmd_table,
}


def _run_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    seed = args.seed if args.seed is not None else _default_seed()
    report = run_suite(args.suite, seed=seed, cases=args.cases, workers=args.workers)
    emit(report_to_json(report), args.out)
    return EXIT_VERIFY if report["failed"] else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return _run_verify(args)
        ctx = Context(args)
        rows, single = COMMANDS[args.command](ctx, args)
        emit(render(rows, args.format, single), args.out)
        return EXIT_OK
    except (UsageError, ParameterError) as exc:
        print(f"fwcs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERIC_ERRORS as exc:
        print(f"fwcs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
