"""
learnlab — report schema

Pydantic models for experiment configuration and for every report the
CLI and the HTTP API emit. Reports carry no timestamps or host data, so
two runs with the same configuration serialise to identical bytes.
"""

import os
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, field_validator, model_validator

from game_engine import PayoffMatrix, Population, trajectory_frame
from learner_engine import DEFAULT_BUDGET
from oracle_engine import DEFAULT_GUARD, DEFAULT_WORKERS

DEFAULT_MAX_LEN = int(os.environ.get("LEARNLAB_MAX_LEN", "3"))

MODE_NAMES = {
    "seq": "sequential", "sequential": "sequential",
    "par": "parallel", "parallel": "parallel",
    "hyb": "hybrid", "hybrid": "hybrid",
}


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------
class ExperimentConfig(BaseModel):
    """Validated experiment inputs. `rules` and `order` hold resolved file paths."""

    rules: list[str] = Field(..., min_length=1)
    modes: list[str] = Field(default_factory=lambda: ["parallel"], min_length=1)
    order: list[str] | None = None
    alphabet: list[str] | None = None
    max_len: int = Field(DEFAULT_MAX_LEN, ge=0)
    budget: int = Field(DEFAULT_BUDGET, ge=1)
    guard: int = Field(DEFAULT_GUARD, ge=1)
    measure: str = "counting"
    out: str | None = None
    format: Literal["json", "csv"] = "json"
    seed: int = 0
    engine: Literal["lockstep", "threads"] = "lockstep"
    workers: int = Field(DEFAULT_WORKERS, ge=1)

    @field_validator("modes")
    @classmethod
    def _known_modes(cls, v: list[str]) -> list[str]:
        out = []
        for m in v:
            key = m.strip().lower()
            if key not in MODE_NAMES:
                raise ValueError(f"unknown mode '{m}' (seq, par or hybrid)")
            out.append(MODE_NAMES[key])
        return out

    @field_validator("measure")
    @classmethod
    def _measure_exists(cls, v: str) -> str:
        if v != "counting" and not Path(v).is_file():
            raise ValueError(f"measure must be 'counting' or an existing weights file (got '{v}')")
        return v

    @model_validator(mode="after")
    def _order_is_permutation(self) -> "ExperimentConfig":
        if self.order is not None and sorted(self.order) != sorted(self.rules):
            raise ValueError("order must be a permutation of the rule list")
        return self

    @property
    def mode(self) -> str:
        return self.modes[0]

    @property
    def ordered_rules(self) -> list[str]:
        return self.order if self.order is not None else self.rules


# ---------------------------------------------------------------------------
# Shared pieces
# ---------------------------------------------------------------------------
class UniverseInfo(BaseModel):
    alphabet: list[str]
    max_len: int
    size: int


class TableRunEntry(BaseModel):
    table: str
    outcome: str
    steps: int
    space: int
    lane: int | None = None


class ClassEntry(BaseModel):
    name: str
    size: int
    members: list[str]


class _Tabular(BaseModel):
    """Reports that also have a CSV form."""

    def to_frame(self) -> pd.DataFrame:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------
class RunReport(_Tabular):
    command: Literal["run"] = "run"
    learner: str
    mode: str
    input: str
    budget: int
    outcome: str
    accepted_by: str | None
    time: int
    space: int
    storage: int
    per_table: list[TableRunEntry]
    plan: dict | None = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.model_dump() for r in self.per_table],
                            columns=["table", "outcome", "steps", "space", "lane"])


class EnumerateReport(_Tabular):
    command: Literal["enumerate"] = "enumerate"
    learner: str
    mode: str
    universe: UniverseInfo
    tables: list[ClassEntry]
    hang_sets: list[ClassEntry]
    union: ClassEntry
    learner_class: ClassEntry
    complete: bool
    paper_sequential_class: ClassEntry | None = None
    plan: dict | None = None

    def to_frame(self) -> pd.DataFrame:
        columns = [t.name for t in self.tables]
        members = {t.name: set(t.members) for t in self.tables}
        learned = set(self.learner_class.members)
        rows = [
            {"string": s, **{c: s in members[c] for c in columns}, "union": True, "learner": s in learned}
            for s in self.union.members
        ]
        return pd.DataFrame(rows, columns=["string", *columns, "union", "learner"])


class CompareRow(BaseModel):
    input: str
    accepted_by_seq: str
    accepted_by_par: str
    t_s: int
    t_p: int
    t_rejects: int
    t_a: int
    s_s: int
    s_p: int
    sigma_s: int
    sigma_p: int
    s_bound_applies: bool
    violations: list[str] = Field(default_factory=list)


class CompareReport(_Tabular):
    command: Literal["compare"] = "compare"
    sequential: str
    parallel: str
    universe: UniverseInfo
    budget: int
    rows: list[CompareRow]
    violations: int
    ok: bool

    def to_frame(self) -> pd.DataFrame:
        rows = [{**r.model_dump(exclude={"violations"}), "violations": ";".join(r.violations)} for r in self.rows]
        return pd.DataFrame(rows, columns=list(CompareRow.model_fields))


class EvolveReport(_Tabular):
    command: Literal["evolve"] = "evolve"
    strategies: list[str]
    universe: UniverseInfo
    measure: str
    matrix: list[list[float]]
    verdicts: dict[str, str]
    generations: int
    shares0: dict[str, float]
    final: dict[str, float]
    trajectory: list[dict[str, float | int]]

    def populations(self) -> list[Population]:
        return [
            Population({s: row[s] for s in self.strategies}, int(row["generation"]))
            for row in self.trajectory
        ]

    def payoff_matrix(self) -> PayoffMatrix:
        return PayoffMatrix(tuple(self.strategies), np.array(self.matrix, dtype=float))

    def to_frame(self) -> pd.DataFrame:
        return trajectory_frame(self.populations(), self.strategies)

    def matrix_frame(self) -> pd.DataFrame:
        """Payoff matrix with a leading `strategy` column (row player)."""
        return self.payoff_matrix().to_frame().rename_axis("strategy").reset_index()


class TheoremCheck(BaseModel):
    check: str
    table_set: str
    ok: bool
    detail: dict = Field(default_factory=dict)


class TheoremReport(_Tabular):
    command: Literal["report"] = "report"
    seed: int
    random_sets: int
    universe: UniverseInfo
    checks: list[TheoremCheck]
    violations: int
    ok: bool

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([c.model_dump(exclude={"detail"}) for c in self.checks],
                            columns=["check", "table_set", "ok"])


REPORT_MODELS: dict[str, type[_Tabular]] = {
    "run": RunReport,
    "enumerate": EnumerateReport,
    "compare": CompareReport,
    "evolve": EvolveReport,
    "report": TheoremReport,
}


def report_schemas(commands: list[str] | None = None) -> dict[str, dict]:
    """JSON Schema of each command's report, keyed by command."""
    commands = commands or list(REPORT_MODELS)
    unknown = [c for c in commands if c not in REPORT_MODELS]
    if unknown:
        raise ValueError(f"no report schema for {unknown} (choose from {list(REPORT_MODELS)})")
    return {c: REPORT_MODELS[c].model_json_schema() for c in commands}
