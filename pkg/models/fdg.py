"""Schemas for λ-value queries on groups and FDG specs."""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator


class LambdaRequest(BaseModel):
    """Exactly one of `group` or `spec`."""

    group: str | None = Field(None, description='Abelian group, e.g. "Z2 x Z4"', examples=["Z2 x Z4"])
    spec: str | None = Field(None, description='FDG spec, e.g. "V(x^2+x+1@2) * M(3,2)"')
    affine: bool = Field(False, description="Maximize over periodic affine maps instead of automorphisms")

    @model_validator(mode="after")
    def one_target(self) -> LambdaRequest:
        if (self.group is None) == (self.spec is None):
            raise ValueError("give exactly one of group or spec")
        if self.affine and self.group is None:
            raise ValueError("affine applies to group queries only")
        return self


class LambdaOut(BaseModel):
    target: str
    lam: str = Field(..., description="Exact λ-value")
    Lambda: int | None = Field(None, description="Largest cycle length (spec queries)")
    cycle_structure: str | None = Field(None, description='Cycle type as "length^count" terms')
    order: int
