"""Schemas for certification tables."""

from __future__ import annotations

from pydantic import BaseModel, Field


class CertificationRow(BaseModel):
    check: str
    lo: str | None = Field(None, description="Exact lower endpoint")
    hi: str | None = Field(None, description="Exact upper endpoint")
    digits: str | None = Field(None, description="Certified decimal digits when requested")
    passed: bool
    detail: str = ""


class CertificationOut(BaseModel):
    version: int = 1
    which: str
    passed: bool
    rows: list[CertificationRow] = Field(default_factory=list)
