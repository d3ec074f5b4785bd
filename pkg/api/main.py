"""
learnlab API — FastAPI backend running rule-table learner experiments.

Route modules:
  api/routes/experiments.py — /api/v1/* (health, rules, schema, run, enumerate, compare, evolve)
"""

from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from starlette.middleware.base import BaseHTTPMiddleware

from api.config import CORS_ORIGINS, HTTPS_ONLY, RULES_DIR, VERSION, configure_logging, logger


# ---------------------------------------------------------------------------
# Lifespan
# ---------------------------------------------------------------------------
@asynccontextmanager
async def lifespan(app: FastAPI):
    configure_logging()
    logger.info("learnlab API %s started (rules from %s)", VERSION, RULES_DIR)
    yield
    logger.info("learnlab API stopped")


# ---------------------------------------------------------------------------
# App factory
# ---------------------------------------------------------------------------
app = FastAPI(title="learnlab API", version=VERSION, lifespan=lifespan)

app.add_middleware(
    CORSMiddleware,
    allow_origins=CORS_ORIGINS,
    allow_methods=["GET", "POST"],
    allow_headers=["*"],
)


class ReportHeadersMiddleware(BaseHTTPMiddleware):
    """Stamps every response with the API version; experiment reports are never cached."""

    async def dispatch(self, request, call_next):
        response = await call_next(request)
        response.headers["X-Content-Type-Options"] = "nosniff"
        response.headers["X-Learnlab-Version"] = VERSION
        if request.method == "POST":
            response.headers["Cache-Control"] = "no-store"
        if HTTPS_ONLY:
            response.headers["Strict-Transport-Security"] = "max-age=31536000"
        return response


app.add_middleware(ReportHeadersMiddleware)


# ---------------------------------------------------------------------------
# Mount route modules
# ---------------------------------------------------------------------------
from api.routes.experiments import router as experiments_router  # noqa: E402

app.include_router(experiments_router)
