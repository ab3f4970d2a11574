import logging

from dotenv import load_dotenv
from fastapi import FastAPI

from app.config import get_settings
from routes.bounds import router as bounds_router
from routes.classify import router as classify_router
from routes.fdg import router as lambda_router
from routes.poly import router as poly_router
from routes.prng import router as prng_router

load_dotenv()
logging.basicConfig(level=get_settings().log_level)

app = FastAPI(
    title="lambda-fdg",
    docs_url="/api/v1/docs",
    redoc_url="/api/v1/redoc",
    openapi_url="/api/v1/openapi.json",
)

app.include_router(classify_router, prefix="/api/v1")
app.include_router(lambda_router, prefix="/api/v1")
app.include_router(poly_router, prefix="/api/v1")
app.include_router(bounds_router, prefix="/api/v1")
app.include_router(prng_router, prefix="/api/v1")


@app.get("/health")
async def health():
    return {"status": "ok"}
