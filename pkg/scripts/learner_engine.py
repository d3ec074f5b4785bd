#!/usr/bin/env python3
"""
learnlab — Learner Dispatch Engine

Runs a set of rule tables as one learner under three dispatch strategies:

  1. seq_accept(spec, w)      — tandem: tables in list order, stuck on the first divergence
  2. par_accept(spec, w)      — one worker per table in lockstep; first accept writes the
                                 sentinel on the shared tape and the monitor halts the learner
  3. hybrid_accept(spec, w)   — one lockstep worker per lane of a HybridPlan; a lane runs its
                                 tables sequentially
  4. build_hybrid(tables, universe, guard) — hang relation + greedy antichain lanes
  5. learner_class / is_complete / storage_size — class and metric accounting

Metric accounting:
  sequential  time = Σ rejecting steps + accepting steps, space = sup of per-table spaces
  parallel    time = steps of the accepting worker,       space = accepting space + Σ others
              (others measured at the halting macro-step; the monitor costs nothing)
  storage     σ = INTERPRETER_STORAGE + Σ table sizes, identical for every mode
"""

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache

import networkx as nx

from oracle_engine import (
    DEFAULT_GUARD,
    DEFAULT_WORKERS,
    LanguageClass,
    StringUniverse,
    hang_set,
    language_of,
    paper_sequential_class,
    strict_profile,
    union_class,
)
from tm_engine import Outcome, RuleTable, RunResult, Simulation, TapeInputError, check_input, run

log = logging.getLogger(__name__)

DEFAULT_BUDGET = int(os.environ.get("LEARNLAB_BUDGET", "1000"))
INTERPRETER_STORAGE = 1  # σ_t, one unit for the single interpreter description
ENGINES = ("lockstep", "threads")


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------
class AlphabetMismatchError(ValueError):
    """Tables of one learner (or history) disagree on alphabet or blank."""


class InvariantViolation(RuntimeError):
    """A property that must hold by construction failed."""


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------
class Mode(str, Enum):
    SEQUENTIAL = "sequential"
    PARALLEL = "parallel"
    HYBRID = "hybrid"

    @classmethod
    def parse(cls, value: "str | Mode") -> "Mode":
        if isinstance(value, Mode):
            return value
        aliases = {"seq": cls.SEQUENTIAL, "par": cls.PARALLEL, "hyb": cls.HYBRID}
        v = value.strip().lower()
        if v in aliases:
            return aliases[v]
        return cls(v)

    @property
    def short(self) -> str:
        return {"sequential": "seq", "parallel": "par", "hybrid": "hybrid"}[self.value]


class LearnerOutcome(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    STUCK = "stuck"


@dataclass(frozen=True)
class HybridPlan:
    """Lanes are antichains of the hang relation.

    `hang_order` holds (r_i, r_j) name pairs meaning some string of C(r_j)
    hangs r_i; `witnesses` maps each pair to the first such string.
    """

    lanes: tuple[tuple[RuleTable, ...], ...]
    hang_order: frozenset[tuple[str, str]] = frozenset()
    witnesses: tuple[tuple[str, str, str], ...] = ()
    acyclic: bool = True

    @property
    def tables(self) -> tuple[RuleTable, ...]:
        return tuple(t for lane in self.lanes for t in lane)

    def lane_names(self) -> list[list[str]]:
        return [[t.name for t in lane] for lane in self.lanes]

    def to_dict(self) -> dict:
        return {
            "lanes": self.lane_names(),
            "hang_order": [list(p) for p in sorted(self.hang_order)],
            "witnesses": [{"lower": i, "upper": j, "string": w} for i, j, w in self.witnesses],
            "acyclic": self.acyclic,
        }


@dataclass(frozen=True)
class LearnerSpec:
    tables: tuple[RuleTable, ...]
    mode: Mode = Mode.PARALLEL
    budget: int = DEFAULT_BUDGET
    plan: HybridPlan | None = None
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "tables", tuple(self.tables))
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        if not self.tables:
            raise ValueError("a learner needs at least one rule table")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1 (got {self.budget})")
        names = [t.name for t in self.tables]
        if len(set(names)) != len(names):
            raise ValueError(f"rule table names must be unique: {names}")
        check_alphabets(self.tables)
        if self.mode is Mode.HYBRID:
            if self.plan is None:
                raise ValueError("hybrid learner needs a plan (see build_hybrid)")
            if sorted(t.name for t in self.plan.tables) != sorted(names):
                raise ValueError("hybrid plan lanes must cover exactly the learner's tables")
        if self.name is None:
            object.__setattr__(self, "name", self.label())

    def label(self) -> str:
        names = ",".join(t.name for t in self.tables)
        if self.mode is Mode.SEQUENTIAL:
            return f"seq[{names}]"
        return f"{self.mode.short}{{{names}}}"

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.tables[0].alphabet


@dataclass(frozen=True)
class TableRun:
    table: str
    result: RunResult
    lane: int | None = None

    def to_dict(self) -> dict:
        d = {"table": self.table, **self.result.to_dict()}
        if self.lane is not None:
            d["lane"] = self.lane
        return d


@dataclass(frozen=True)
class LearnerResult:
    outcome: LearnerOutcome
    time: int
    space: int
    per_table: tuple[TableRun, ...] = ()
    accepted_by: str | None = None

    @property
    def accepted(self) -> bool:
        return self.outcome is LearnerOutcome.ACCEPTED

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "accepted_by": self.accepted_by,
            "time": self.time,
            "space": self.space,
            "per_table": [r.to_dict() for r in self.per_table],
        }


def check_alphabets(tables) -> None:
    first = tables[0]
    for t in tables[1:]:
        if set(t.alphabet) != set(first.alphabet) or t.blank != first.blank:
            raise AlphabetMismatchError(
                f"{t.name} uses alphabet {t.alphabet}/blank {t.blank!r}, "
                f"{first.name} uses {first.alphabet}/{first.blank!r}"
            )


def _check_word(spec: LearnerSpec, w: str) -> None:
    try:
        check_input(spec.tables[0], w)
    except TapeInputError as e:
        raise AlphabetMismatchError(str(e)) from e


def _require_mode(spec: LearnerSpec, mode: Mode) -> None:
    if spec.mode is not mode:
        raise ValueError(f"{spec.name} is a {spec.mode.value} learner, not {mode.value}")


# ---------------------------------------------------------------------------
# Sequential (tandem) learner
# ---------------------------------------------------------------------------

def seq_accept(spec: LearnerSpec, w: str) -> LearnerResult:
    """Try tables in order; a table that exhausts its budget blocks the learner."""
    _require_mode(spec, Mode.SEQUENTIAL)
    _check_word(spec, w)
    runs: list[TableRun] = []
    for table in spec.tables:
        result = run(table, w, spec.budget)
        runs.append(TableRun(table.name, result))
        if result.outcome is Outcome.ACCEPTED:
            return _sequential_result(LearnerOutcome.ACCEPTED, runs, table.name)
        if result.outcome is Outcome.BUDGET_EXHAUSTED:
            return _sequential_result(LearnerOutcome.STUCK, runs)
    return _sequential_result(LearnerOutcome.REJECTED, runs)


def _sequential_result(outcome: LearnerOutcome, runs: list[TableRun], accepted_by: str | None = None) -> LearnerResult:
    return LearnerResult(
        outcome=outcome,
        time=sum(r.result.steps for r in runs),
        space=max(r.result.space for r in runs),
        per_table=tuple(runs),
        accepted_by=accepted_by,
    )


# ---------------------------------------------------------------------------
# Lockstep workers (parallel and hybrid)
# ---------------------------------------------------------------------------
class _LaneStatus(str, Enum):
    RUNNING = "running"
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    STUCK = "stuck"


@dataclass
class _LaneView:
    index: int
    status: _LaneStatus
    steps: int
    space: int
    runs: list[TableRun] = field(default_factory=list)


class _SharedTape:
    """Shared tape: the input, plus the sentinel written to its leftmost cell."""

    SENTINEL = "V"

    def __init__(self, word: str):
        self.cells = dict(enumerate(word))
        self.writer: int | None = None

    def signal(self, worker: int) -> None:
        if self.writer is None:
            self.cells[0] = self.SENTINEL
            self.writer = worker

    def poll(self) -> int | None:
        return self.writer if self.cells.get(0) == self.SENTINEL else None


class _LaneWorker:
    """A worker machine running its tables one after another on its own tape.

    Keeps per-step traces so a view at any earlier macro-step can be
    reconstructed; that is what lets the threaded engine reproduce the
    lockstep result exactly.
    """

    def __init__(self, index: int, tables: tuple[RuleTable, ...], word: str, budget: int):
        self.index = index
        self.tables = tables
        self.word = word
        self.budget = budget
        self.position = 0
        self.sim = Simulation(tables[0], dict(enumerate(word)))
        self.steps = 0
        self.best = 0
        self.space_trace: list[int] = []
        self.run_trace: list[int] = []
        self.runs: list[tuple[int, TableRun]] = []
        self.status = _LaneStatus.RUNNING

    @property
    def running(self) -> bool:
        return self.status is _LaneStatus.RUNNING

    def advance(self) -> None:
        sim = self.sim
        sim.advance()
        self.steps += 1
        self.run_trace.append(sim.visited)
        self.space_trace.append(max(self.best, sim.visited))
        if not sim.halted and sim.steps < self.budget:
            return
        result = sim.result()
        self.runs.append((self.steps, TableRun(sim.table.name, result, self.index)))
        self.best = max(self.best, result.space)
        if result.outcome is Outcome.ACCEPTED:
            self.status = _LaneStatus.ACCEPTED
        elif result.outcome is Outcome.BUDGET_EXHAUSTED:
            self.status = _LaneStatus.STUCK
        elif self.position + 1 < len(self.tables):
            self.position += 1
            self.sim = Simulation(self.tables[self.position], dict(enumerate(self.word)))
        else:
            self.status = _LaneStatus.REJECTED

    def run_to_end(self) -> "_LaneWorker":
        while self.running:
            self.advance()
        return self

    def view(self, t: int) -> _LaneView:
        """State of this worker as seen by the monitor after macro-step t."""
        if not self.running and self.steps <= t:
            return _LaneView(self.index, self.status, self.steps, self.space_trace[-1],
                             [run for _, run in self.runs])
        finished = [(end, run) for end, run in self.runs if end <= t]
        start = finished[-1][0] if finished else 0
        runs = [run for _, run in finished]
        if t > start:
            table = self.tables[len(finished)]
            runs.append(TableRun(table.name, RunResult(Outcome.WORKING, t - start, self.run_trace[t - 1]), self.index))
        return _LaneView(self.index, _LaneStatus.RUNNING, t, self.space_trace[t - 1], runs)


def _run_lockstep(workers: list[_LaneWorker], word: str) -> tuple[int, int | None]:
    shared = _SharedTape(word)
    t = 0
    while shared.poll() is None and any(w.running for w in workers):
        t += 1
        for w in workers:
            if w.running:
                w.advance()
                if w.status is _LaneStatus.ACCEPTED:
                    shared.signal(w.index)
    return t, shared.poll()


def _run_threads(workers: list[_LaneWorker]) -> tuple[int, int | None]:
    with ThreadPoolExecutor(max_workers=len(workers)) as pool:
        list(pool.map(_LaneWorker.run_to_end, workers))
    accepts = [(w.steps, w.index) for w in workers if w.status is _LaneStatus.ACCEPTED]
    if accepts:
        return min(accepts)
    return max(w.steps for w in workers), None


def _dispatch(lanes: tuple[tuple[RuleTable, ...], ...], w: str, budget: int, engine: str) -> LearnerResult:
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES} (got {engine!r})")
    workers = [_LaneWorker(i, lane, w, budget) for i, lane in enumerate(lanes)]
    if engine == "threads":
        t, winner = _run_threads(workers)
    else:
        t, winner = _run_lockstep(workers, w)

    views = [worker.view(t) for worker in workers]
    per_table = tuple(run for v in views for run in v.runs)
    if winner is not None:
        win = views[winner]
        return LearnerResult(
            outcome=LearnerOutcome.ACCEPTED,
            time=win.steps,
            space=win.space + sum(v.space for v in views if v.index != winner),
            per_table=per_table,
            accepted_by=win.runs[-1].table,
        )
    stuck = any(v.status is _LaneStatus.STUCK for v in views)
    return LearnerResult(
        outcome=LearnerOutcome.STUCK if stuck else LearnerOutcome.REJECTED,
        time=t,
        space=sum(v.space for v in views),
        per_table=per_table,
    )


def par_accept(spec: LearnerSpec, w: str, engine: str = "lockstep") -> LearnerResult:
    """One worker per table; ties at the same macro-step go to the lowest table index."""
    _require_mode(spec, Mode.PARALLEL)
    _check_word(spec, w)
    return _dispatch(tuple((t,) for t in spec.tables), w, spec.budget, engine)


def hybrid_accept(spec: LearnerSpec, w: str, engine: str = "lockstep") -> LearnerResult:
    _require_mode(spec, Mode.HYBRID)
    _check_word(spec, w)
    return _dispatch(spec.plan.lanes, w, spec.budget, engine)


def accept(spec: LearnerSpec, w: str, engine: str = "lockstep") -> LearnerResult:
    if spec.mode is Mode.SEQUENTIAL:
        return seq_accept(spec, w)
    if spec.mode is Mode.PARALLEL:
        return par_accept(spec, w, engine)
    return hybrid_accept(spec, w, engine)


# ---------------------------------------------------------------------------
# Hybrid plan
# ---------------------------------------------------------------------------

def hang_graph(tables, universe: StringUniverse, guard: int = DEFAULT_GUARD,
               workers: int = DEFAULT_WORKERS) -> nx.DiGraph:
    """Edge r_i → r_j iff some string of C(r_j) hangs r_i (within the universe)."""
    tables = list(tables)
    langs = {t.name: language_of(t, universe, guard, workers) for t in tables}
    hangs = {t.name: hang_set(t, universe, guard, workers) for t in tables}
    graph = nx.DiGraph()
    graph.add_nodes_from(t.name for t in tables)
    for ri in tables:
        for rj in tables:
            if ri.name == rj.name:
                continue
            blocked = hangs[ri.name] & langs[rj.name]
            if blocked:
                graph.add_edge(ri.name, rj.name, witness=next(iter(blocked)))
    return graph


def build_hybrid(tables, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                 workers: int = DEFAULT_WORKERS) -> HybridPlan:
    """Greedy antichain lanes over the hang relation, scanning tables in input order."""
    tables = list(tables)
    check_alphabets(tables)
    graph = hang_graph(tables, universe, guard, workers)

    lanes: list[list[RuleTable]] = []
    for table in tables:
        for lane in lanes:
            if not any(graph.has_edge(table.name, o.name) or graph.has_edge(o.name, table.name) for o in lane):
                lane.append(table)
                break
        else:
            lanes.append([table])

    plan = HybridPlan(
        lanes=tuple(tuple(lane) for lane in lanes),
        hang_order=frozenset(graph.edges),
        witnesses=tuple(sorted((i, j, d["witness"]) for i, j, d in graph.edges(data=True))),
        acyclic=nx.is_directed_acyclic_graph(graph),
    )
    log.info("Hybrid plan: %d lane(s) %s, %d hang pair(s)", len(plan.lanes), plan.lane_names(), len(plan.hang_order))
    return plan


def verify_plan(plan: HybridPlan, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                workers: int = DEFAULT_WORKERS) -> None:
    """Re-derive the hang relation and check that every lane is an antichain."""
    graph = hang_graph(plan.tables, universe, guard, workers)
    if frozenset(graph.edges) != plan.hang_order:
        raise InvariantViolation("plan hang order disagrees with the oracle")
    for k, lane in enumerate(plan.lanes):
        for a, b in itertools.combinations(lane, 2):
            if graph.has_edge(a.name, b.name) or graph.has_edge(b.name, a.name):
                raise InvariantViolation(f"lane {k} holds related tables {a.name} and {b.name}")


def hybrid_spec(tables, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                budget: int | None = None, workers: int = DEFAULT_WORKERS) -> LearnerSpec:
    tables = tuple(tables)
    plan = build_hybrid(tables, universe, guard, workers)
    return LearnerSpec(tables, Mode.HYBRID, budget or guard, plan)


# ---------------------------------------------------------------------------
# Classes and metrics
# ---------------------------------------------------------------------------

def learner_class(spec: LearnerSpec, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                  workers: int = DEFAULT_WORKERS, engine: str = "lockstep") -> LanguageClass:
    """Strings of the universe the learner accepts, each run with budget = guard."""
    return _learner_class(replace(spec, budget=guard), universe, guard, max(1, workers), engine)


@lru_cache(maxsize=1024)
def _learner_class(spec: LearnerSpec, universe: StringUniverse, guard: int, workers: int,
                   engine: str) -> LanguageClass:
    for table in spec.tables:
        strict_profile(table, universe, guard, workers)

    def accepted(s: str) -> bool:
        return accept(spec, s, engine).accepted

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flags = list(pool.map(accepted, universe.strings))
    else:
        flags = [accepted(s) for s in universe.strings]
    result = LanguageClass(universe, frozenset(s for s, ok in zip(universe.strings, flags) if ok))

    if spec.mode is Mode.SEQUENTIAL:
        core = paper_sequential_class(spec.tables, universe, guard, workers)
        if not core <= result:
            missing = (core - result).to_list()
            raise InvariantViolation(f"{spec.name} misses all-halt strings {missing[:5]}")
    log.debug("learner_class(%s) = %d of %d strings", spec.name, len(result), len(universe))
    return result


def adversarial_sequential_class(tables, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                                 workers: int = DEFAULT_WORKERS) -> LanguageClass:
    """Strings every ordering of the tandem learner accepts (intersection over orders)."""
    tables = tuple(tables)
    result = LanguageClass(universe, frozenset(universe.strings))
    for order in itertools.permutations(tables):
        result = result & learner_class(LearnerSpec(order, Mode.SEQUENTIAL, guard), universe, guard, workers)
    return result


def completion_obstruction(tables, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                           workers: int = DEFAULT_WORKERS) -> dict:
    """Per ordering: is the tandem learner complete, and which strings does it miss.

    The answer needs the hang relation, i.e. halting verdicts from outside
    the learner; nothing here builds a completed learner.
    """
    tables = tuple(tables)
    union = union_class(tables, universe, guard, workers)
    orders = []
    for order in itertools.permutations(tables):
        cls = learner_class(LearnerSpec(order, Mode.SEQUENTIAL, guard), universe, guard, workers)
        orders.append({
            "order": [t.name for t in order],
            "complete": cls == union,
            "missing": (union - cls).to_list(),
        })
    graph = hang_graph(tables, universe, guard, workers)
    return {
        "union_size": len(union),
        "orders": orders,
        "complete_order_exists": any(o["complete"] for o in orders),
        "hang_witnesses": [
            {"hangs": i, "accepted_by": j, "string": d["witness"]}
            for i, j, d in sorted(graph.edges(data=True))
        ],
    }


def storage_size(spec: LearnerSpec) -> int:
    """σ = σ_t + Σ σ_r(k): one interpreter description plus every table, whatever the mode."""
    return INTERPRETER_STORAGE + sum(t.size for t in spec.tables)


def is_complete(spec: LearnerSpec, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                workers: int = DEFAULT_WORKERS) -> bool:
    return learner_class(spec, universe, guard, workers) == union_class(spec.tables, universe, guard, workers)


# ---------------------------------------------------------------------------
# CLI interface
# ---------------------------------------------------------------------------

if __name__ == "__main__":
    import argparse
    import json

    from tm_engine import load_rule_table

    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")

    parser = argparse.ArgumentParser(description="Run a learner on one input")
    parser.add_argument("mode", choices=["seq", "par", "hybrid"])
    parser.add_argument("rule_files", nargs="+")
    parser.add_argument("--input", default="")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--max-len", type=int, default=3)
    args = parser.parse_args()

    tables = tuple(load_rule_table(p) for p in args.rule_files)
    if args.mode == "hybrid":
        universe = StringUniverse(tables[0].alphabet, max(args.max_len, len(args.input)))
        spec = hybrid_spec(tables, universe, args.budget, args.budget)
    else:
        spec = LearnerSpec(tables, Mode.parse(args.mode), args.budget)
    print(json.dumps(accept(spec, args.input).to_dict(), indent=2))
