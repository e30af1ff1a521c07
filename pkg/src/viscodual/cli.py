"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input or validation error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import duality, numerics
from .errors import NumericalError, PrecisionLoss, ValidationError
from .materials import (
    MaterialFile,
    dual_name,
    fmt,
    material_for,
    read_material,
    write_material,
)
from .models import (
    INF,
    RelaxationModel,
    bernstein_check,
    cm_check,
    eval_creep,
    eval_relaxation,
    limits_report,
    sample,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

RESIDUAL_TOL = 1e-10
CONVOLUTION_TOL = 1e-6
ROUNDTRIP_TOL = 1e-8
CHECK_GRID = (0.01, 10.0, 64)
CONVOLUTION_SPAN = 10.0


class UsageError(ValidationError):
    pass


def _render(value) -> str:
    return "inf" if value is INF else fmt(value)


def _pair(material: MaterialFile):
    """(relaxation, creep) with the missing side computed exactly."""
    model = material.model
    if isinstance(model, RelaxationModel):
        return model, duality.relaxation_to_creep(model)
    return duality.creep_to_relaxation(model), model


def _print_limits(relax, creep, out):
    report = limits_report(relax, creep)
    print("limits:", file=out)
    for key, value in report.as_dict().items():
        print(f"  {key:<16} {_render(value)}", file=out)
    if report.h0_reason:
        print(f"  h_at_zero vanishes because: {report.h0_reason}", file=out)


def _parse_range(text, what):
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"{what} must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"{what} must be lo:hi:n, got {text!r}") from exc
    if n < 1:
        raise UsageError(f"{what}: count must be >= 1, got {n}")
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo or (n > 1 and hi == lo):
        raise UsageError(f"{what}: need finite lo < hi, got {lo}:{hi}")
    return lo, hi, n


def cmd_convert(args, out=None) -> int:
    out = out or sys.stdout
    material = read_material(args.input)
    with warnings.catch_warnings():
        warnings.simplefilter("error", PrecisionLoss)
        relax, creep = _pair(material)
    dual = creep if material.kind == "relaxation" else relax
    write_material(args.output, material_for(dual, dual_name(material.name)))
    _print_limits(relax, creep, out)
    ok, order = duality.interlacing_summary(relax, creep)
    print(f"interlacing: {'ok' if ok else 'VIOLATED'} ({order})", file=out)
    return EXIT_OK


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    material = read_material(args.input)
    if args.dual is None:
        relax, creep = _pair(material)
    else:
        other = read_material(args.dual)
        if other.kind == material.kind:
            raise UsageError("--dual must be of the opposite kind")
        relax, creep = (
            (material.model, other.model) if material.kind == "relaxation" else (other.model, material.model)
        )
    lo, hi, n = _parse_range(args.pgrid, "--pgrid")
    if lo <= 0.0:
        raise UsageError("--pgrid bounds must be > 0")
    if not args.step > 0.0:
        raise UsageError("--step must be > 0")
    p_grid = np.geomspace(lo, hi, n)
    n_steps = int(round(CONVOLUTION_SPAN / args.step))
    t_grid = args.step * np.arange(n_steps + 1)
    check_t = np.linspace(*CHECK_GRID)

    rows = []
    rows.append(("duality_residual", numerics.duality_residual(relax, creep, p_grid), RESIDUAL_TOL))
    rows.append(("convolution", numerics.convolution_oracle(relax, creep, t_grid), CONVOLUTION_TOL))
    if relax.is_zero:
        rows.append(("roundtrip", float("inf"), ROUNDTRIP_TOL))
    else:
        rows.append(("roundtrip", duality.roundtrip_check(relax).discrepancy, ROUNDTRIP_TOL))
    cm = cm_check(sample(lambda t: eval_relaxation(relax, t), check_t))
    rows.append(("cm_check", cm.worst_violation, cm.tolerance))
    bern = bernstein_check(sample(lambda t: eval_creep(creep, t), check_t))
    rows.append(("bernstein_check", bern.worst_violation, bern.tolerance))

    failed = False
    print(f"{'check':<18} {'value':<24} {'threshold':<24} status", file=out)
    for name, value, tol in rows:
        ok = value <= tol
        failed |= not ok
        print(f"{name:<18} {fmt(value):<24} {tol:<24.3g} {'pass' if ok else 'FAIL'}", file=out)
    ok, order = duality.interlacing_summary(relax, creep)
    failed |= not ok
    print(f"{'interlacing':<18} {order:<49} {'pass' if ok else 'FAIL'}", file=out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_sample(args, out=None) -> int:
    out = out or sys.stdout
    material = read_material(args.input)
    lo, hi, n = _parse_range(args.t, "--t")
    model = material.model
    if isinstance(model, RelaxationModel) and lo <= 0.0:
        raise UsageError("relaxation samples need t > 0")
    if lo < 0.0:
        raise UsageError("creep samples need t >= 0")
    if args.log:
        if lo <= 0.0:
            raise UsageError("--log needs t > 0")
        t = np.geomspace(lo, hi, n)
    else:
        t = np.linspace(lo, hi, n)
    values = eval_relaxation(model, t) if isinstance(model, RelaxationModel) else eval_creep(model, t)
    text = "t,value\n" + "".join(f"{fmt(a)},{fmt(b)}\n" for a, b in zip(t, values))
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_limits(args, out=None) -> int:
    out = out or sys.stdout
    material = read_material(args.input)
    relax, creep = _pair(material)
    _print_limits(relax, creep, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="viscodual",
        description="Interconvert relaxation moduli and creep functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="write the dual model of a material file")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("verify", help="check a relaxation/creep pair")
    p.add_argument("input")
    p.add_argument("--dual", help="dual material file; computed if omitted")
    p.add_argument("--pgrid", default="1e-4:1e4:64", help="log-spaced Laplace grid lo:hi:n")
    p.add_argument("--step", type=float, default=1e-3, help="convolution step on [0, 10]")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="tabulate the model as CSV")
    p.add_argument("input")
    p.add_argument("--t", required=True, help="time grid lo:hi:n")
    p.add_argument("--log", action="store_true", help="log-spaced grid")
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("limits", help="print boundary values of the model and its dual")
    p.add_argument("input")
    p.set_defaults(func=cmd_limits)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, PrecisionLoss) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
