# SPDX-License-Identifier: MIT
"""
Command-line front end.

Every subcommand prints one JSON document (``schema: 1``) to standard output or
to ``--out``. Exit code 0 means every check passed, 2 a failed check or an
analysis error reported in the document, 1 a usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

import numpy as np
import sympy
from fastlib.logging import logger

from src.main.app.config import get_log_config, load_config, override_config
from src.main.app.core.expr import symbol
from src.main.app.core.jet import parse_generator, render_generator
from src.main.app.core.parser import parse, render
from src.main.app.enums.enum import ExitCodeEnum, FamilyTag, Method
from src.main.app.exception import (
    AnalysisException,
    ExprParseException,
    NumericException,
    ParseErrorCode,
)
from src.main.app.model.closedform_model import QuadratureSolution
from src.main.app.model.equation_model import FSpec
from src.main.app.schema.analysis_schema import (
    ClassificationDocument,
    DeterminingSystemDocument,
    GeneratorEntry,
    ReductionDocument,
    SolveDocument,
)
from src.main.app.schema.report_schema import CheckRow, ErrorDocument, Report
from src.main.app.service.impl.classify_service_impl import ClassifyServiceImpl
from src.main.app.service.impl.closedform_service_impl import ClosedFormServiceImpl
from src.main.app.service.impl.determining_service_impl import DeterminingServiceImpl
from src.main.app.service.impl.numverify_service_impl import NumverifyServiceImpl
from src.main.app.service.impl.reduce_service_impl import ReduceServiceImpl
from src.main.app.utils.log_util import setup_logging

FAMILY_PARAMETERS = ("n", "a", "b", "c", "d", "k")
REDUCED_EQUATION_INDEX = {FamilyTag.POWER: 1, FamilyTag.LOG: 2, FamilyTag.EXP: 3}
GRID_SIZE = 21


class UsageError(ExprParseException):
    def __init__(self, message: str):
        super().__init__(ParseErrorCode.USAGE_ERROR, message)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _span(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'lo,hi', got {text!r}") from exc
    if not hi > lo:
        raise argparse.ArgumentTypeError(f"empty span {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="boussym",
        description="Symmetry analysis of u_tt - u_xx + (f(u) + u_xx)_xx = 0",
    )
    parser.add_argument(
        "-e",
        "--env",
        choices=["dev", "test", "prod"],
        default="dev",
        help="Runtime environment selecting config-{env}.yml",
    )
    parser.add_argument("-c", "--config-file", default=None, help="Extra configuration file")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed for sampling")
    parser.add_argument("--tol", type=float, default=None, help="Verdict tolerance")
    parser.add_argument("--out", default=None, help="Write the JSON document here")
    parser.add_argument("--threads", type=int, default=None, help="Parallel residual workers")

    common = _ArgumentParser(add_help=False)
    common.add_argument("--f", dest="f", default="f(u)", help="Nonlinearity in the expr grammar")
    for name in FAMILY_PARAMETERS:
        common.add_argument(f"--{name}", default=None, help=f"Value bound to {name} in f")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    classify = sub.add_parser("classify", parents=[common], help="Family and generators of f")
    classify.add_argument("--no-ansatz", action="store_true", help="Skip the ansatz solve")

    determine = sub.add_parser("determine", parents=[common], help="Emit a determining system")
    determine.add_argument("--method", choices=[m.value for m in Method], default="classical")

    verify = sub.add_parser("verify-generator", parents=[common], help="Check one generator")
    verify.add_argument("--gen", required=True, help="e.g. 'x*dx + 2*t*dt - u*du'")
    verify.add_argument("--method", choices=[m.value for m in Method], default="classical")

    reduce = sub.add_parser("reduce", parents=[common], help="Similarity reduction of f")
    reduce.add_argument("--lambda", dest="speed", default=None, help="Travelling-wave speed")

    solve = sub.add_parser("solve", parents=[common], help="Time profile or quadrature")
    for name in ("k2", "k3", "k4"):
        solve.add_argument(f"--{name}", type=float, default=0.0)
    solve.add_argument("--h0", type=float, default=1.0, help="h at the start (reference)")
    solve.add_argument("--h1", type=float, default=None, help="End value of the quadrature")
    solve.add_argument("--t0", type=float, default=1.0)
    solve.add_argument("--t1", type=float, default=2.0)
    solve.add_argument("--branch", type=int, choices=[1, -1], default=1)
    solve.add_argument("--table", default=None, help="Write the sampled profile here")

    residual = sub.add_parser("residual", parents=[common], help="Travelling-wave PDE residual")
    residual.add_argument("--lambda", dest="speed", default="1")
    for name in ("k1", "k2"):
        residual.add_argument(f"--{name}", type=float, default=0.0)
    residual.add_argument("--h0", type=float, default=0.5)
    residual.add_argument("--dh0", type=float, default=0.0)
    residual.add_argument("--span", type=_span, default=(-2.0, 2.0))
    return parser


def _f_spec(args: argparse.Namespace) -> FSpec:
    expr = parse(args.f)
    bound = {
        symbol(name): parse(getattr(args, name))
        for name in FAMILY_PARAMETERS
        if getattr(args, name, None) is not None
    }
    return FSpec(expr.xreplace(bound))


def _classify(args: argparse.Namespace):
    f = _f_spec(args)
    result = ClassifyServiceImpl().classify(f, with_ansatz=not args.no_ansatz)
    ansatz = result.ansatz
    return ClassificationDocument(
        f=f.render(),
        family=result.family.tag.value,
        params={name: render(value) for name, value in result.family.params.items()},
        generators=[
            GeneratorEntry(name=name, text=render_generator(v)) for name, v in result.generators
        ],
        ansatz_generators=[
            GeneratorEntry(name=f"A{i + 1}", text=render_generator(v))
            for i, v in enumerate(ansatz.fields if ansatz else [])
        ],
        spans_agree=result.spans_agree,
        notes=ansatz.notes if ansatz else [],
        passed=result.spans_agree is not False,
    )


def _determine(args: argparse.Namespace):
    f = _f_spec(args)
    service = DeterminingServiceImpl()
    if args.method == Method.NONCLASSICAL.value:
        system = service.build_nonclassical(f)
    else:
        system = service.build_classical(f)
    return DeterminingSystemDocument(
        method=system.method.value,
        f=f.render(),
        equation_count=len(system),
        equations=[render(e) for e in system.equations],
        basis=[render(b) for b in system.basis],
        metadata=system.metadata,
    )


def _verify_generator(args: argparse.Namespace):
    f = _f_spec(args)
    field = parse_generator(args.gen)
    service = DeterminingServiceImpl()
    if args.method == Method.NONCLASSICAL.value:
        return service.residuals(
            service.build_nonclassical(f),
            service.normalize_generator(field),
            seed=args.seed,
            max_workers=args.threads,
        )
    return service.verify_generator(f, field, seed=args.seed)


def _reduce(args: argparse.Namespace):
    f = _f_spec(args)
    service = ReduceServiceImpl()
    if args.speed is not None:
        reduction = service.travelling_wave(parse(args.speed), f)
        return ReductionDocument(
            kind=reduction.kind.value,
            family=ClassifyServiceImpl().detect_family(f).tag.value,
            invariant=render(reduction.invariant),
            ansatz=render(reduction.ansatz),
            ode=render(reduction.ode),
            integrated=render(reduction.integrated),
            separation_factor=render(reduction.separation_factor),
        )
    family = ClassifyServiceImpl().detect_family(f)
    reduction = service.scaling(family)
    power = family.as_power()
    report = service.check_table3(
        REDUCED_EQUATION_INDEX[power.tag],
        {name: value for name, value in power.params.items() if not value.free_symbols},
        seed=args.seed,
    )
    return ReductionDocument(
        kind=reduction.kind.value,
        family=family.tag.value,
        invariant=render(reduction.invariant),
        ansatz=render(reduction.ansatz),
        ode=render(reduction.ode),
        separation_factor=render(reduction.separation_factor),
        report=report,
        passed=report.passed,
    )


def _profile_report(h, k3: float, k4: float) -> Report:
    values, slopes = h.values[:, 0], h.values[:, 1]
    scale = 1 + np.abs(k3 * values**3) + abs(k4)
    first = float(np.max(np.abs(slopes**2 - k3 * values**3 - k4) / scale))
    second = float(np.max(np.abs(h.derivatives[:, 1] - 1.5 * k3 * values**2) / scale))
    tol = 1e-8
    rows = [
        CheckRow(index=0, label="h'^2 - k3 h^3 - k4", status="numeric", residual=first),
        CheckRow(index=1, label="h'' - (3/2) k3 h^2", status="numeric", residual=second),
    ]
    for row in rows:
        if row.residual > tol:
            row.status = "failed"
    return Report.from_rows("time profile", rows, tol)


def _solve(args: argparse.Namespace):
    service = ClosedFormServiceImpl()
    if args.n is not None:
        defaults = {"n": args.n, "a": "1", "b": "0", "d": "1"}
        values = {
            name: float(parse(getattr(args, name) or default))
            for name, default in defaults.items()
        }
        qs = QuadratureSolution(
            k2=args.k2, k3=args.k3, k4=args.k4, sign=args.branch, h_ref=args.h0, **values
        )
        h_end = args.h1 if args.h1 is not None else args.h0 + 0.5
        report = service.check_quadrature(qs, h_end)
        return SolveDocument(
            what="quadrature",
            parameters={**values, "k2": args.k2, "k3": args.k3, "k4": args.k4, "h0": args.h0},
            points=len(report.rows),
            report=report,
            passed=report.passed,
        )
    h = service.solve_h(args.k3, args.k4, (args.t0, args.t1), args.h0, branch=args.branch)
    if args.table:
        h.write(args.table)
    report = _profile_report(h, args.k3, args.k4)
    return SolveDocument(
        what="time_profile",
        parameters={"k3": args.k3, "k4": args.k4, "h0": args.h0, "t0": args.t0, "t1": args.t1},
        output=args.table,
        points=len(h.grid),
        report=report,
        passed=report.passed,
    )


def _residual(args: argparse.Namespace):
    f = _f_spec(args)
    speed = parse(args.speed)
    reducer = ReduceServiceImpl()
    reduction = reducer.travelling_wave(speed, f)
    system = reducer.ode_system(reduction, {"k1": args.k1, "k2": args.k2}, integrated=True)
    numverify = NumverifyServiceImpl()
    h = numverify.integrate_ode(system, [args.h0, args.dh0], args.span)
    lo, hi = args.span
    margin = 0.05 * (hi - lo)
    grid = [
        (float(z + speed * s), float(s))
        for z in np.linspace(lo + margin, hi - margin, GRID_SIZE)
        for s in np.linspace(0.0, 1.0, GRID_SIZE)
    ]
    return numverify.verify_reduction(reduction, h, grid, max_workers=args.threads)


COMMANDS: dict[str, Callable[[argparse.Namespace], object]] = {
    "classify": _classify,
    "determine": _determine,
    "verify-generator": _verify_generator,
    "reduce": _reduce,
    "solve": _solve,
    "residual": _residual,
}


def _emit(text: str, out: str | None) -> None:
    if out:
        target = Path(out)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def run(args: argparse.Namespace) -> int:
    load_config(args.env, args.config_file)
    setup_logging(get_log_config())
    if args.seed is not None:
        override_config("expr", seed=args.seed)
    if args.tol is not None:
        override_config("expr", equiv_tol=args.tol)
        override_config("numeric", residual_tol=args.tol)

    try:
        document = COMMANDS[args.command](args)
    except (AnalysisException, NumericException) as exc:
        logger.error(f"{args.command}: [{exc.code.code}] {exc.message}")
        _emit(ErrorDocument.from_exception(args.command, exc).to_json(), args.out)
        return ExitCodeEnum.CHECK_FAILED.code
    _emit(document.to_json(), args.out)
    return ExitCodeEnum.from_verdict(document.passed).code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return run(args)
    except ExprParseException as exc:
        sys.stderr.write(f"boussym: error: {exc.message}\n")
        return ExitCodeEnum.USAGE_ERROR.code
    except sympy.SympifyError as exc:
        sys.stderr.write(f"boussym: error: {exc}\n")
        return ExitCodeEnum.USAGE_ERROR.code
