"""λ-values of abelian groups (automorphisms or affine maps) and of FDG specs."""

from __future__ import annotations

from fastapi import APIRouter, HTTPException

from app.errors import LambdaError, status_code_for
from app.services.reports import lambda_out
from models.fdg import LambdaOut, LambdaRequest

router = APIRouter(tags=["lambda"])


@router.post("/lambda", response_model=LambdaOut)
def compute_lambda(body: LambdaRequest) -> LambdaOut:
    try:
        return lambda_out(group=body.group, spec=body.spec, affine=body.affine)
    except LambdaError as exc:
        raise HTTPException(status_code=status_code_for(exc), detail=str(exc))
