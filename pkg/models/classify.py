"""Schemas for the classification API and the structured result file."""

from __future__ import annotations

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class ClassifyRequest(BaseModel):
    """Body for POST /classify."""

    rho: str = Field(..., description="λ-value as a reduced or unreduced fraction a/b in [1/2, 1]", examples=["3/4"])
    expand_max_order: int | None = Field(
        None, ge=1, description="Instantiate every descriptor up to this group order"
    )


class DescriptorOut(BaseModel):
    kind: str = Field(..., description="finite or family")
    template: str = Field(..., description="Spec template, e.g. V(P3@2) * M(7,g)")
    side_conditions: list[str] = Field(default_factory=list)
    group: str = Field(..., description="Underlying group (family parameters symbolic)")
    lam: str = Field(..., description="Exact λ-value a/b")
    lambda_maximal: bool
    witness_count: int | None = Field(None, description="Number of instances; null for infinite families")
    instances: list[str] | None = Field(None, description="Rendered instances when expansion was requested")


class ClassificationOut(BaseModel):
    version: int = Field(SCHEMA_VERSION, description="Structured output schema version")
    rho: str
    descriptors: list[DescriptorOut] = Field(default_factory=list)
    empty_reason: str | None = None
    flags: list[str] = Field(default_factory=list)


class GroupDescriptorOut(BaseModel):
    group: str
    infinite: bool
    template: str
    side_conditions: list[str] = Field(default_factory=list)


class GroupClassificationOut(BaseModel):
    version: int = SCHEMA_VERSION
    rho: str
    groups: list[GroupDescriptorOut] = Field(default_factory=list)
