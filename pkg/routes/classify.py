"""
Classification API.

POST /api/v1/classify returns every periodic FDG class with λ = ρ;
GET /api/v1/classify/groups returns the groups G with λ(G) = ρ.
"""

from __future__ import annotations

from fastapi import APIRouter, HTTPException, Query

from app.errors import LambdaError, status_code_for
from app.services.reports import classification_out, group_classification_out
from models.classify import ClassificationOut, ClassifyRequest, GroupClassificationOut

router = APIRouter(prefix="/classify", tags=["classify"])


@router.post("", response_model=ClassificationOut)
def classify(body: ClassifyRequest) -> ClassificationOut:
    try:
        return classification_out(body.rho, body.expand_max_order)
    except LambdaError as exc:
        raise HTTPException(status_code=status_code_for(exc), detail=str(exc))


@router.get("/groups", response_model=GroupClassificationOut)
def classify_groups(rho: str = Query(..., description="λ-value a/b in [1/2, 1]")) -> GroupClassificationOut:
    try:
        return group_classification_out(rho)
    except LambdaError as exc:
        raise HTTPException(status_code=status_code_for(exc), detail=str(exc))
