"""
Builds the structured outputs (pydantic models) for every query surface.

The CLI prints these, the routes return them; both therefore produce the
same fields in the same canonical order.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from app.algebra.abelian import as_group_type, lambda_aff_group, lambda_group
from app.algebra.bounds import anlem_certify, decimal_digits, gap_scan, rho0, rho1, RationalInterval
from app.algebra.classify import IsoClassDescriptor, classify_group_lambda, classify_rho
from app.algebra.fdg import parse_spec, spec_structure
from app.algebra.ffpoly import companion, enum_primitive, factor_poly, is_irreducible, is_primitive, parse_poly, poly_order
from app.algebra.prng import certified_period, certify_full_period, lcg, stream, vecgen
from app.errors import DomainError
from models.bounds import CertificationOut, CertificationRow
from models.classify import ClassificationOut, DescriptorOut, GroupClassificationOut, GroupDescriptorOut
from models.fdg import LambdaOut
from models.poly import PolyOut, PolyRequest
from models.prng import StreamOut, StreamRequest

logger = logging.getLogger(__name__)

GAP_SCAN_ORDER = 2**60
CERTIFY_CHOICES = ("rho0", "rho1", "anlem", "gaps", "all")


def frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def descriptor_out(desc: IsoClassDescriptor, expand_max_order: int | None = None) -> DescriptorOut:
    instances = None
    if expand_max_order is not None:
        instances = [spec.render() for spec in desc.instances(expand_max_order)]
    return DescriptorOut(
        kind=desc.kind,
        template=desc.template,
        side_conditions=list(desc.side_conditions),
        group=desc.group_label,
        lam=frac(desc.lam),
        lambda_maximal=desc.lambda_maximal,
        witness_count=desc.witness_count,
        instances=instances,
    )


def classification_out(rho: str | Fraction, expand_max_order: int | None = None) -> ClassificationOut:
    result = classify_rho(rho)
    return ClassificationOut(
        rho=str(result.rho),
        descriptors=[descriptor_out(d, expand_max_order) for d in result.descriptors],
        empty_reason=result.empty_reason,
        flags=list(result.flags),
    )


def group_classification_out(rho: str | Fraction) -> GroupClassificationOut:
    result = classify_rho(rho)
    groups = [
        GroupDescriptorOut(group=g.group, infinite=g.infinite, template=g.template, side_conditions=list(g.side_conditions))
        for g in classify_group_lambda(rho)
    ]
    return GroupClassificationOut(rho=str(result.rho), groups=groups)


def lambda_out(group: str | None = None, spec: str | None = None, affine: bool = False) -> LambdaOut:
    if (group is None) == (spec is None):
        raise DomainError("give exactly one of group or spec")
    if group is not None:
        G = as_group_type(group)
        lam = lambda_aff_group(G) if affine else lambda_group(G)
        return LambdaOut(target=G.label, lam=frac(lam), order=G.order)
    parsed = parse_spec(spec)
    cs = spec_structure(parsed)
    return LambdaOut(
        target=parsed.render(),
        lam=frac(cs.lam),
        Lambda=cs.Lambda,
        cycle_structure=str(cs),
        order=parsed.order,
    )


def poly_out(req: PolyRequest) -> PolyOut:
    if req.query == "enumerate":
        if req.p is None or req.degree is None:
            raise DomainError("enumerate needs p and degree")
        return PolyOut(query=req.query, polys=[P.label() for P in enum_primitive(req.p, req.degree)])
    if req.poly is None:
        raise DomainError(f"{req.query} needs a polynomial")
    P = parse_poly(req.poly)
    out = PolyOut(query=req.query, poly=P.label())
    if req.query == "irreducible":
        out.irreducible = is_irreducible(P)
    elif req.query == "order":
        out.order = poly_order(P)
    elif req.query == "primitive":
        out.irreducible = is_irreducible(P)
        out.primitive = out.irreducible and is_primitive(P)
    elif req.query == "factor":
        out.factors = [Q.label() if k == 1 else f"({Q.label()})^{k}" for Q, k in factor_poly(P)]
    elif req.query == "companion":
        out.companion = [list(row) for row in companion(P).rows]
    return out


def _interval_row(check: str, interval: RationalInterval, passed: bool, decimal: int | None, detail: str = "") -> CertificationRow:
    return CertificationRow(
        check=check,
        lo=frac(interval.lo),
        hi=frac(interval.hi),
        digits=decimal_digits(interval, decimal) if decimal else None,
        passed=passed,
        detail=detail,
    )


def certification_out(which: str, decimal: int | None = None) -> CertificationOut:
    if which not in CERTIFY_CHOICES:
        raise DomainError(f"unknown certification {which!r}; choose from {', '.join(CERTIFY_CHOICES)}")
    rows: list[CertificationRow] = []
    r0, r1 = rho0(), rho1()
    if which in ("rho0", "all"):
        ok = r0.width < Fraction(1, 10**9) and r0.lo >= Fraction("0.504307524") and r0.hi < Fraction("0.504307525")
        rows.append(_interval_row("rho0", r0, ok, decimal, "digits 0.504307524"))
    if which in ("rho1", "all"):
        ok = r1.width < Fraction(1, 10**9) and r1.lo >= Fraction("0.750063685") and r1.hi < Fraction("0.750063686")
        rows.append(_interval_row("rho1", r1, ok, decimal, "digits 0.750063685"))
    if which in ("anlem", "all"):
        for v in anlem_certify():
            rows.append(
                _interval_row(
                    f"anlem{v.bound_id}",
                    v.interval,
                    v.verified,
                    decimal,
                    f"{frac(v.multiplier)} * lo > {v.threshold.numerator / v.threshold.denominator}",
                )
            )
    if which in ("gaps", "all"):
        for label, lo, hi in (("gap (1/2, rho0]", Fraction(1, 2), r0.hi), ("gap (3/4, rho1]", Fraction(3, 4), r1.hi)):
            found = gap_scan(lo, hi, GAP_SCAN_ORDER)
            detail = "no classified shape inside" if not found else "; ".join(f"{v.shape} = {frac(v.lam)}" for v in found)
            rows.append(CertificationRow(check=label, passed=not found, detail=detail))
    return CertificationOut(which=which, passed=all(r.passed for r in rows), rows=rows)


def stream_out(req: StreamRequest) -> StreamOut:
    if req.kind == "lcg":
        if req.m is None or req.a is None or req.c is None:
            raise DomainError("lcg needs m, a and c")
        spec = lcg(req.m, req.a, req.c, req.seed)
    else:
        if req.p is None or req.poly is None:
            raise DomainError("vec needs p and poly")
        spec = vecgen(req.p, req.poly, req.seed)
    return StreamOut(
        spec=spec.render(),
        states=spec.states,
        words=stream(spec, req.count),
        full_period=certify_full_period(spec),
        certified_period=certified_period(spec),
    )
