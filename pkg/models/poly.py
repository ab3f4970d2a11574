"""Schemas for polynomial queries over prime fields."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class PolyRequest(BaseModel):
    poly: str | None = Field(None, description='Polynomial with modulus, e.g. "x^4+x+1@2"')
    query: Literal["irreducible", "order", "primitive", "factor", "companion", "enumerate"] = "primitive"
    p: int | None = Field(None, description="Field characteristic for enumerate")
    degree: int | None = Field(None, ge=1, description="Degree for enumerate")


class PolyOut(BaseModel):
    query: str
    poly: str | None = None
    irreducible: bool | None = None
    primitive: bool | None = None
    order: int | None = None
    factors: list[str] | None = None
    companion: list[list[int]] | None = None
    polys: list[str] | None = None
