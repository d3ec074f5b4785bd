"""Experiments API v1: the CLI experiments over HTTP, same engines, same report models."""

from contextlib import contextmanager
from pathlib import Path
from typing import Literal

from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from api.config import GENERATION_LIMIT, MAX_LEN_LIMIT, MEASURES_DIR, RULES_DIR, STEP_LIMIT, VERSION, logger

from experiment_cli import (
    compare_experiment,
    enumerate_experiment,
    evolve_experiment,
    list_rules,
    resolve_rule,
    run_experiment,
)
from learner_engine import DEFAULT_BUDGET, InvariantViolation
from oracle_engine import DEFAULT_GUARD, OracleUnknownError
from reports import (
    DEFAULT_MAX_LEN,
    CompareReport,
    EnumerateReport,
    EvolveReport,
    ExperimentConfig,
    RunReport,
    report_schemas,
)

router = APIRouter(prefix="/api/v1", tags=["experiments"])


# ---------------------------------------------------------------------------
# Pydantic models
# ---------------------------------------------------------------------------
class ExperimentRequest(BaseModel):
    rules: list[str] = Field(..., min_length=1, description="Rule stems (RA) or table names (R_A)")
    order: list[str] | None = Field(None, description="Sequential order, a permutation of rules")
    alphabet: list[str] | None = None
    max_len: int = Field(min(DEFAULT_MAX_LEN, MAX_LEN_LIMIT), ge=0, le=MAX_LEN_LIMIT)
    budget: int = Field(min(DEFAULT_BUDGET, STEP_LIMIT), ge=1, le=STEP_LIMIT)
    guard: int = Field(min(DEFAULT_GUARD, STEP_LIMIT), ge=1, le=STEP_LIMIT)
    measure: str = Field("counting", description="counting, or a weights file stem under data/measures")
    engine: Literal["lockstep", "threads"] = "lockstep"


class RunRequest(ExperimentRequest):
    mode: str = "par"
    input: str = ""


class EnumerateRequest(ExperimentRequest):
    mode: str = "par"


class EvolveRequest(ExperimentRequest):
    modes: list[str] = Field(default_factory=lambda: ["par", "seq"], min_length=1)
    shares: list[float] | None = None
    generations: int = Field(200, ge=0, le=GENERATION_LIMIT)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------
def _resolve(item: str) -> str:
    """Only tables shipped in the rules directory are reachable over HTTP."""
    if "/" in item or "\\" in item or item.startswith("."):
        raise HTTPException(status_code=422, detail={
            "error": "invalid_rule_name",
            "message": f"'{item}' is not a rule name; use a stem such as RA or a table name such as R_A",
        })
    return str(resolve_rule(item, RULES_DIR))


def _measure(name: str) -> str:
    if name == "counting":
        return name
    path = MEASURES_DIR / f"{Path(name).name}.json"
    if not path.is_file():
        raise HTTPException(status_code=404, detail={
            "error": "measure_not_found",
            "message": f"No weights file '{name}' in {MEASURES_DIR.name}",
        })
    return str(path)


@contextmanager
def _experiment_errors():
    """Engine errors → HTTP errors with an {error, message} detail."""
    try:
        yield
    except HTTPException:
        raise
    except OracleUnknownError as e:
        raise HTTPException(status_code=409, detail={
            "error": "oracle_unknown", "message": str(e), "table": e.table, "string": e.string,
        })
    except InvariantViolation as e:
        logger.error("Invariant violation: %s", e)
        raise HTTPException(status_code=409, detail={"error": "invariant_violation", "message": str(e)})
    except FileNotFoundError as e:
        raise HTTPException(status_code=404, detail={"error": "rule_not_found", "message": str(e)})
    except (ValueError, OSError) as e:
        raise HTTPException(status_code=422, detail={"error": "invalid_experiment", "message": str(e)})


def _config(req: ExperimentRequest, modes: list[str] | None = None) -> ExperimentConfig:
    values = dict(
        rules=[_resolve(r) for r in req.rules],
        order=[_resolve(r) for r in req.order] if req.order else None,
        alphabet=req.alphabet,
        max_len=req.max_len,
        budget=req.budget,
        guard=req.guard,
        measure=_measure(req.measure),
        engine=req.engine,
        workers=1,
    )
    if modes:
        values["modes"] = modes
    return ExperimentConfig(**values)


# ---------------------------------------------------------------------------
# Endpoints
# ---------------------------------------------------------------------------
@router.post("/run", response_model=RunReport)
def v1_run(req: RunRequest):
    with _experiment_errors():
        return run_experiment(_config(req, [req.mode]), req.input)


@router.post("/enumerate", response_model=EnumerateReport)
def v1_enumerate(req: EnumerateRequest):
    with _experiment_errors():
        return enumerate_experiment(_config(req, [req.mode]))


@router.post("/compare", response_model=CompareReport)
def v1_compare(req: ExperimentRequest):
    with _experiment_errors():
        return compare_experiment(_config(req))


@router.post("/evolve", response_model=EvolveReport)
def v1_evolve(req: EvolveRequest):
    with _experiment_errors():
        return evolve_experiment(_config(req, req.modes), req.shares, req.generations)


@router.get("/rules")
def v1_rules():
    with _experiment_errors():
        return {"rules_dir": RULES_DIR.name, "rules": list_rules(RULES_DIR)}


@router.get("/schema")
def v1_schema():
    return report_schemas()


@router.get("/health")
def v1_health():
    checks = {"status": "ok", "version": VERSION, "rules_loaded": False, "rule_count": 0}
    try:
        count = len(list_rules(RULES_DIR))
        checks["rules_loaded"] = count > 0
        checks["rule_count"] = count
    except (ValueError, OSError) as e:
        logger.warning("Health check could not read rules: %s", e)
        checks["status"] = "degraded"
    return checks
