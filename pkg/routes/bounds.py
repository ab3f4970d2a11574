"""Certification tables for the gap constants."""

from __future__ import annotations

from typing import Literal

from fastapi import APIRouter, HTTPException, Query

from app.errors import LambdaError, status_code_for
from app.services.reports import certification_out
from models.bounds import CertificationOut

router = APIRouter(prefix="/bounds", tags=["bounds"])


@router.get("/{which}", response_model=CertificationOut)
def certify(
    which: Literal["rho0", "rho1", "anlem", "gaps", "all"],
    decimal: int | None = Query(None, ge=1, le=15, description="Render this many certified digits"),
) -> CertificationOut:
    try:
        return certification_out(which, decimal)
    except LambdaError as exc:
        raise HTTPException(status_code=status_code_for(exc), detail=str(exc))
