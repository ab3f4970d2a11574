"""Generator streams with period certificates."""

from __future__ import annotations

from fastapi import APIRouter, HTTPException

from app.errors import LambdaError, status_code_for
from app.services.reports import stream_out
from models.prng import StreamOut, StreamRequest

router = APIRouter(prefix="/prng", tags=["prng"])


@router.post("/stream", response_model=StreamOut)
def prng_stream(body: StreamRequest) -> StreamOut:
    try:
        return stream_out(body)
    except LambdaError as exc:
        raise HTTPException(status_code=status_code_for(exc), detail=str(exc))
