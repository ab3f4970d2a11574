"""
Command-line front end: python -m app <command> ...

    classify --rho a/b [--expand-max-order N] [--groups] [--json out.json]
    lambda   --group "Z2 x Z4" | --spec "M(7,3) * V(x^2+x+1@2)" [--affine]
    oracle   --max-order N
    poly     irreducible|order|primitive|factor|companion "x^4+x+1@2"
    poly     enumerate p d
    bounds   --certify rho0|rho1|anlem|gaps|all
    prng     lcg m a c seed --count N [--certify] [--period CAP]
    prng     vec p "poly" seed --count N [--certify] [--period CAP]

Numbers are exact rationals unless --decimal k is given. Exit status: 0 on
success, 1 when an oracle or certification check fails, 2 for usage and
domain errors, 3 when a capacity limit is exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

from pydantic import BaseModel

from app.algebra.bounds import RationalInterval, decimal_digits
from app.algebra.oracle import run_oracle
from app.algebra.prng import certified_period, certify_full_period, lcg, measured_period, stream, vecgen
from app.config import get_settings
from app.errors import CapacityError, LambdaError
from app.services.reports import (
    CERTIFY_CHOICES,
    certification_out,
    classification_out,
    frac,
    group_classification_out,
    lambda_out,
    poly_out,
)
from models.poly import PolyRequest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3


def _number(text: str, decimal: int | None) -> str:
    if decimal is None:
        return text
    return decimal_digits(RationalInterval.point(Fraction(text)), decimal) or text


def _write_json(model: BaseModel | dict, path: str | None) -> None:
    if path is None:
        return
    body = model.model_dump_json(indent=2) if isinstance(model, BaseModel) else json.dumps(model, indent=2)
    Path(path).write_text(body + "\n", encoding="utf-8")


def _cmd_classify(args, out: TextIO) -> int:
    if args.groups:
        result = group_classification_out(args.rho)
        print(f"rho = {result.rho}", file=out)
        if not result.groups:
            print("no group has this λ-value", file=out)
        for g in result.groups:
            extra = f"  [{'; '.join(g.side_conditions)}]" if g.side_conditions else ""
            print(f"{g.group}{' (family)' if g.infinite else ''}  via {g.template}{extra}", file=out)
        _write_json(result, args.json)
        return EXIT_OK
    result = classification_out(args.rho, args.expand_max_order)
    print(f"rho = {result.rho}", file=out)
    if not result.descriptors:
        print(f"empty: {result.empty_reason}", file=out)
    for d in result.descriptors:
        count = "inf" if d.witness_count is None else str(d.witness_count)
        maximal = "maximal" if d.lambda_maximal else "-"
        print(f"{d.kind:<7} {_number(d.lam, args.decimal):<12} {maximal:<8} {count:>6}  {d.template}", file=out)
        for cond in d.side_conditions:
            print(f"{'':<36}{cond}", file=out)
        for inst in d.instances or []:
            print(f"{'':<36}= {inst}", file=out)
    for flag in result.flags:
        print(f"flag: {flag}", file=out)
    _write_json(result, args.json)
    return EXIT_OK


def _cmd_lambda(args, out: TextIO) -> int:
    result = lambda_out(group=args.group, spec=args.spec, affine=args.affine)
    label = "lambda_aff" if args.affine else "lambda"
    print(f"{result.target}: {label} = {_number(result.lam, args.decimal)}", file=out)
    if result.Lambda is not None:
        print(f"Lambda = {result.Lambda}", file=out)
        print(f"cycles = {result.cycle_structure}", file=out)
    _write_json(result, args.json)
    return EXIT_OK


def _cmd_oracle(args, out: TextIO) -> int:
    report = run_oracle(args.max_order)
    print(f"groups checked: {report.groups_checked}", file=out)
    print(f"classes with λ >= 1/2: {report.classes_seen}", file=out)
    print(f"λ-values observed: {len(report.values)}", file=out)
    for name, items in (("skipped", report.skipped), ("unmatched", report.unmatched),
                        ("duplicated", report.duplicated), ("missing", report.missing)):
        print(f"{name}: {len(items)}", file=out)
        for item in items:
            print(f"  {item}", file=out)
    print("PASS" if report.ok else "FAIL", file=out)
    _write_json(
        {
            "version": 1,
            "max_order": report.max_order,
            "groups_checked": report.groups_checked,
            "classes_seen": report.classes_seen,
            "values": [frac(v) for v in report.values],
            "skipped": report.skipped,
            "unmatched": report.unmatched,
            "duplicated": report.duplicated,
            "missing": report.missing,
            "passed": report.ok,
        },
        args.json,
    )
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def _cmd_poly(args, out: TextIO) -> int:
    if args.query == "enumerate":
        if len(args.operands) != 2:
            raise LambdaError("enumerate takes p and d")
        req = PolyRequest(query="enumerate", p=int(args.operands[0]), degree=int(args.operands[1]))
    else:
        if len(args.operands) != 1:
            raise LambdaError(f"{args.query} takes one polynomial")
        req = PolyRequest(query=args.query, poly=args.operands[0])
    result = poly_out(req)
    for key, value in result.model_dump(exclude_none=True).items():
        if key == "polys":
            for P in value:
                print(P, file=out)
        elif key != "query":
            print(f"{key}: {value}", file=out)
    _write_json(result, args.json)
    return EXIT_OK


def _cmd_bounds(args, out: TextIO) -> int:
    result = certification_out(args.certify, args.decimal)
    for row in result.rows:
        verdict = "pass" if row.passed else "FAIL"
        print(f"{row.check:<18} {verdict}  {row.detail}", file=out)
        if row.lo is not None:
            print(f"{'':<18} lo = {row.lo}", file=out)
            print(f"{'':<18} hi = {row.hi}", file=out)
        if row.digits is not None:
            print(f"{'':<18} digits = {row.digits}", file=out)
    _write_json(result, args.json)
    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


def _cmd_prng(args, out: TextIO) -> int:
    if args.kind == "lcg":
        if len(args.operands) != 4:
            raise LambdaError("prng lcg takes m a c seed")
        m, a, c, seed = (int(v) for v in args.operands)
        spec = lcg(m, a, c, seed)
    else:
        if len(args.operands) != 3:
            raise LambdaError("prng vec takes p poly seed")
        spec = vecgen(int(args.operands[0]), args.operands[1], int(args.operands[2]))
    print(spec.render(), file=out)
    for word in stream(spec, args.count):
        print(word, file=out)
    status = EXIT_OK
    if args.certify:
        full = certify_full_period(spec)
        period = certified_period(spec)
        print(f"full period: {'yes' if full else 'no'}", file=out)
        print(f"certified period: {period if period is not None else 'unknown'}", file=out)
    if args.period is not None:
        found = measured_period(spec, args.period)
        print(f"measured period: {found if found is not None else f'exceeds cap {args.period}'}", file=out)
        if args.certify and found is not None and certified_period(spec) not in (None, found):
            status = EXIT_CHECK_FAILED
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")
    common.add_argument("--json", metavar="PATH", help="also write the structured result to PATH")
    common.add_argument("--decimal", type=int, metavar="K", help="render K certified decimal digits")

    parser = argparse.ArgumentParser(prog="lambda-fdg", description="Largest-cycle statistics of finite dynamical groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="all periodic FDGs with λ = ρ")
    p.add_argument("--rho", required=True, help="a/b with 1/2 <= a/b <= 1")
    p.add_argument("--expand-max-order", type=int, metavar="N", help="instantiate descriptors up to |G| <= N")
    p.add_argument("--groups", action="store_true", help="report groups G with λ(G) = ρ instead")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("lambda", parents=[common], help="λ of a group or spec")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--group", help='abelian group, e.g. "Z2 x Z4"')
    target.add_argument("--spec", help='FDG spec, e.g. "M(9,2) * V(x^3+x+1@2)"')
    p.add_argument("--affine", action="store_true", help="λ_aff of the group")
    p.set_defaults(handler=_cmd_lambda)

    p = sub.add_parser("oracle", parents=[common], help="completeness sweep over abelian groups")
    p.add_argument("--max-order", type=int, default=200, metavar="N")
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("poly", parents=[common], help="polynomial queries over F_p")
    p.add_argument("query", choices=["irreducible", "order", "primitive", "factor", "companion", "enumerate"])
    p.add_argument("operands", nargs="+")
    p.set_defaults(handler=_cmd_poly)

    p = sub.add_parser("bounds", parents=[common], help="certify the gap constants")
    p.add_argument("--certify", choices=CERTIFY_CHOICES, default="all")
    p.set_defaults(handler=_cmd_bounds)

    p = sub.add_parser("prng", parents=[common], help="congruential and vector generators")
    p.add_argument("kind", choices=["lcg", "vec"])
    p.add_argument("operands", nargs="+")
    p.add_argument("--count", type=int, default=16)
    p.add_argument("--certify", action="store_true", help="print the period certificate")
    p.add_argument("--period", type=int, metavar="CAP", help="measure the period up to CAP steps")
    p.set_defaults(handler=_cmd_prng)
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    level = "INFO" if args.verbose else get_settings().log_level
    logging.basicConfig(level=level, stream=err)
    try:
        return args.handler(args, out)
    except CapacityError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CAPACITY
    except (LambdaError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
