"""Polynomial queries over prime fields."""

from __future__ import annotations

from fastapi import APIRouter, HTTPException

from app.errors import LambdaError, status_code_for
from app.services.reports import poly_out
from models.poly import PolyOut, PolyRequest

router = APIRouter(tags=["poly"])


@router.post("/poly", response_model=PolyOut)
def poly_query(body: PolyRequest) -> PolyOut:
    try:
        return poly_out(body)
    except LambdaError as exc:
        raise HTTPException(status_code=status_code_for(exc), detail=str(exc))
