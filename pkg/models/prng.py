"""Schemas for generator streams."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class StreamRequest(BaseModel):
    kind: Literal["lcg", "vec"]
    m: int | None = Field(None, ge=1, description="LCG modulus")
    a: int | None = Field(None, description="LCG multiplier")
    c: int | None = Field(None, description="LCG increment")
    p: int | None = Field(None, description="Vector generator field characteristic")
    poly: str | None = Field(None, description='Vector generator polynomial, e.g. "x^5+x^2+1"')
    seed: int = Field(0, ge=0, description="Seed; vector seeds are little-endian base-p integers")
    count: int = Field(16, ge=0, le=1_000_000)


class StreamOut(BaseModel):
    spec: str
    states: str = Field(..., description="State group, e.g. Z16 or Z2^5")
    words: list[int]
    full_period: bool = Field(..., description="Congruence/primitivity certificate")
    certified_period: int | None = None
