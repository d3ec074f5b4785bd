#!/usr/bin/env python3
"""
learnlab — Experiment Harness

Loads rule tables, builds learners and runs the five experiments. Reports
go to stdout (or --out) as JSON or CSV; diagnostics go to stderr.

Usage:
    python scripts/experiment_cli.py run --mode par --rules RA,RB --input aa --budget 100
    python scripts/experiment_cli.py run --mode seq --order RB,RA --input aa
    python scripts/experiment_cli.py enumerate --mode hybrid --rules RA,RB,REPS --max-len 3
    python scripts/experiment_cli.py compare --order RA,RB
    python scripts/experiment_cli.py evolve --mode par,seq --order RB,RA --shares 0.1,0.9 --generations 200
    python scripts/experiment_cli.py evolve --order RB,RA --format csv --out evolve.csv   # + evolve_matrix.csv
    python scripts/experiment_cli.py report --rules RA,RB,REPS --random-sets 100 --seed 7
    python scripts/experiment_cli.py schema --report run,evolve

Rule items are file paths, file stems under LEARNLAB_RULES_DIR (RA), or
table names (R_A). --order alone also sets the rule list.

Exit status:
    0 accepted / ok, 1 rejected, 2 stuck, 64 usage, file or parse error,
    65 oracle Unknown, 70 invariant violation.
"""

import argparse
import itertools
import json
import logging
import os
import random
import sys
from pathlib import Path

from game_engine import (
    Population,
    UtilityMeasure,
    ess_verdict,
    parallel_dominance,
    payoff_matrix,
    replicate,
    superset_implies_ess,
)
from learner_engine import (
    InvariantViolation,
    LearnerOutcome,
    LearnerSpec,
    Mode,
    accept,
    adversarial_sequential_class,
    hybrid_spec,
    learner_class,
    par_accept,
    seq_accept,
    storage_size,
    verify_plan,
)
from learning_engine import (
    SystemHistory,
    add_rule,
    is_filtration,
    learned_set,
    learning_condition,
    learning_occurred,
    load_history,
)
from oracle_engine import (
    LanguageClass,
    OracleUnknownError,
    StringUniverse,
    Verdict,
    hang_set,
    language_of,
    oracle_profile,
    paper_sequential_class,
    union_class,
)
from reports import (
    ClassEntry,
    CompareReport,
    CompareRow,
    EnumerateReport,
    EvolveReport,
    ExperimentConfig,
    RunReport,
    TableRunEntry,
    TheoremCheck,
    TheoremReport,
    UniverseInfo,
    report_schemas,
)
from table_generator import random_table_set
from tm_engine import Outcome, RuleTable, load_rule_table, run

log = logging.getLogger(__name__)

RULES_DIR = Path(os.environ.get("LEARNLAB_RULES_DIR", str(Path(__file__).parent.parent / "data" / "rules")))
LOG_LEVEL = os.environ.get("LEARNLAB_LOG_LEVEL", "INFO")

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_STUCK = 2
EXIT_USAGE = 64
EXIT_UNKNOWN = 65
EXIT_VIOLATION = 70

DIVERGENCE_FACTOR = 10


class UsageError(ValueError):
    """Bad command line."""


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _normalise(name: str) -> str:
    return name.replace("_", "").replace("-", "").lower()


def list_rules(rules_dir: Path = RULES_DIR) -> list[dict]:
    """Every rule table under `rules_dir`, sorted by file name."""
    out = []
    for path in sorted(Path(rules_dir).glob("*.tm")):
        table = load_rule_table(path)
        out.append({"file": path.name, "name": table.name, "size": table.size, "alphabet": list(table.alphabet)})
    return out


def resolve_rule(item: str, rules_dir: Path = RULES_DIR) -> Path:
    """Path, stem under rules_dir, or table name → rule file path."""
    item = item.strip()
    if not item:
        raise UsageError("empty rule name")
    path = Path(item)
    if path.is_file():
        return path.resolve()
    rules_dir = Path(rules_dir)
    candidate = rules_dir / f"{item}.tm"
    if candidate.is_file():
        return candidate.resolve()
    for path in sorted(rules_dir.glob("*.tm")):
        if _normalise(load_rule_table(path).name) == _normalise(item):
            return path.resolve()
    raise FileNotFoundError(f"no rule table '{item}' (looked for a file, {candidate}, and table names in {rules_dir})")


def load_tables(paths: list[str]) -> tuple[RuleTable, ...]:
    return tuple(load_rule_table(p) for p in paths)


def make_universe(config: ExperimentConfig, tables: tuple[RuleTable, ...], min_len: int = 0) -> StringUniverse:
    alphabet = tuple(config.alphabet) if config.alphabet else tables[0].alphabet
    return StringUniverse(alphabet, max(config.max_len, min_len))


def make_measure(config: ExperimentConfig, universe: StringUniverse) -> UtilityMeasure:
    if config.measure == "counting":
        return UtilityMeasure.counting(universe)
    return UtilityMeasure.from_file(config.measure, universe)


def build_learner(config: ExperimentConfig, tables: tuple[RuleTable, ...], mode: Mode,
                  universe: StringUniverse) -> LearnerSpec:
    if mode is Mode.HYBRID:
        return hybrid_spec(tables, universe, config.guard, config.budget, config.workers)
    return LearnerSpec(tables, mode, config.budget)


def _universe_info(universe: StringUniverse) -> UniverseInfo:
    return UniverseInfo(alphabet=list(universe.alphabet), max_len=universe.max_len, size=len(universe))


def _class_entry(name: str, cls: LanguageClass) -> ClassEntry:
    return ClassEntry(name=name, size=len(cls), members=cls.to_list())


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def run_experiment(config: ExperimentConfig, word: str) -> RunReport:
    tables = load_tables(config.ordered_rules)
    mode = Mode.parse(config.mode)
    universe = make_universe(config, tables, min_len=len(word))
    spec = build_learner(config, tables, mode, universe)
    result = accept(spec, word, config.engine)
    log.info("%s on %r: %s in %d step(s)", spec.name, word, result.outcome.value, result.time)
    return RunReport(
        learner=spec.name,
        mode=mode.value,
        input=word,
        budget=config.budget,
        outcome=result.outcome.value,
        accepted_by=result.accepted_by,
        time=result.time,
        space=result.space,
        storage=storage_size(spec),
        per_table=[TableRunEntry(**r.to_dict()) for r in result.per_table],
        plan=spec.plan.to_dict() if spec.plan else None,
    )


def enumerate_experiment(config: ExperimentConfig) -> EnumerateReport:
    tables = load_tables(config.ordered_rules)
    mode = Mode.parse(config.mode)
    universe = make_universe(config, tables)
    spec = build_learner(config, tables, mode, universe)
    g, n = config.guard, config.workers

    union = union_class(tables, universe, g, n)
    cls = learner_class(spec, universe, g, n, config.engine)
    core = paper_sequential_class(tables, universe, g, n) if mode is Mode.SEQUENTIAL else None
    log.info("Enumerated %s over Σ^≤%d: %d of %d strings", spec.name, universe.max_len, len(cls), len(universe))
    return EnumerateReport(
        learner=spec.name,
        mode=mode.value,
        universe=_universe_info(universe),
        tables=[_class_entry(t.name, language_of(t, universe, g, n)) for t in tables],
        hang_sets=[_class_entry(t.name, hang_set(t, universe, g, n)) for t in tables],
        union=_class_entry("union", union),
        learner_class=_class_entry(spec.name, cls),
        complete=cls == union,
        paper_sequential_class=_class_entry("sequential_core", core) if core is not None else None,
        plan=spec.plan.to_dict() if spec.plan else None,
    )


def compare_rows(tables: tuple[RuleTable, ...], universe: StringUniverse, budget: int,
                 engine: str = "lockstep") -> tuple[LearnerSpec, LearnerSpec, list[CompareRow]]:
    """Sequential vs parallel over the same ordered tables, one row per string both accept."""
    seq = LearnerSpec(tables, Mode.SEQUENTIAL, budget)
    par = LearnerSpec(tables, Mode.PARALLEL, budget)
    sigma_s, sigma_p = storage_size(seq), storage_size(par)
    rows = []
    for w in universe.strings:
        rs, rp = seq_accept(seq, w), par_accept(par, w, engine)
        if not (rs.accepted and rp.accepted):
            continue
        before, last = rs.per_table[:-1], rs.per_table[-1]
        t_rejects = sum(r.result.steps for r in before)
        t_a = last.result.steps
        applies = all(r.result.steps <= rp.time for r in rs.per_table)

        violations = []
        if rs.time != t_rejects + t_a:
            violations.append("t_s != sum(t_r) + t_a")
        if not rp.time <= t_a <= rs.time:
            violations.append("t_p <= t_a <= t_s fails")
        if rp.accepted_by == rs.accepted_by and rp.time != t_a:
            violations.append("t_p != t_a")
        if rs.space != max(r.result.space for r in rs.per_table):
            violations.append("s_s != sup of per-table space")
        if rp.space != sum(r.result.space for r in rp.per_table):
            violations.append("s_p != sum of per-table space")
        if rs.space > rp.space:
            violations.append("s_s > s_p")
        if sigma_s != sigma_p:
            violations.append("sigma_s != sigma_p")

        rows.append(CompareRow(
            input=w,
            accepted_by_seq=rs.accepted_by,
            accepted_by_par=rp.accepted_by,
            t_s=rs.time,
            t_p=rp.time,
            t_rejects=t_rejects,
            t_a=t_a,
            s_s=rs.space,
            s_p=rp.space,
            sigma_s=sigma_s,
            sigma_p=sigma_p,
            s_bound_applies=applies,
            violations=violations,
        ))
    return seq, par, rows


def compare_experiment(config: ExperimentConfig) -> CompareReport:
    tables = load_tables(config.ordered_rules)
    universe = make_universe(config, tables)
    seq, par, rows = compare_rows(tables, universe, config.budget, config.engine)
    bad = sum(1 for r in rows if r.violations)
    if bad:
        log.warning("compare: %d row(s) with violations", bad)
    return CompareReport(
        sequential=seq.name,
        parallel=par.name,
        universe=_universe_info(universe),
        budget=config.budget,
        rows=rows,
        violations=bad,
        ok=bad == 0,
    )


def evolve_experiment(config: ExperimentConfig, shares: list[float] | None, generations: int) -> EvolveReport:
    tables = load_tables(config.ordered_rules)
    universe = make_universe(config, tables)
    measure = make_measure(config, universe)
    strategies = [build_learner(config, tables, Mode.parse(m), universe) for m in config.modes]
    names = [s.name for s in strategies]
    if shares is None:
        shares = [1.0 / len(names)] * len(names)
    if len(shares) != len(names):
        raise UsageError(f"{len(shares)} share(s) given for {len(names)} strateg(ies)")

    matrix = payoff_matrix(strategies, universe, measure, config.guard, config.workers)
    pop0 = Population(dict(zip(names, shares)))
    trajectory = replicate(matrix, pop0, generations)
    return EvolveReport(
        strategies=names,
        universe=_universe_info(universe),
        measure=measure.name,
        matrix=matrix.to_list(),
        verdicts={name: ess_verdict(matrix, i).value for i, name in enumerate(names)},
        generations=generations,
        shares0=dict(pop0.shares),
        final=dict(trajectory[-1].shares),
        trajectory=[{"generation": p.generation, **dict(p.shares)} for p in trajectory],
    )


# ---------------------------------------------------------------------------
# Theorem battery
# ---------------------------------------------------------------------------

def _check(name: str, label: str, fn) -> TheoremCheck:
    """Run one check; an InvariantViolation raised inside becomes a failed row."""
    try:
        ok, detail = fn()
    except InvariantViolation as e:
        ok, detail = False, {"error": str(e)}
    if not ok:
        log.warning("Check %s failed on %s: %s", name, label, detail)
    return TheoremCheck(check=name, table_set=label, ok=ok, detail=detail)


def theorem_checks(tables: tuple[RuleTable, ...], universe: StringUniverse, guard: int,
                   workers: int = 1, engine: str = "lockstep") -> list[TheoremCheck]:
    label = ",".join(t.name for t in tables)
    union = union_class(tables, universe, guard, workers)
    par = LearnerSpec(tables, Mode.PARALLEL, guard)
    checks = []

    def oracle_agreement():
        mismatches = []
        for t in tables:
            for s, d in oracle_profile(t, universe, guard, workers).items():
                if d.halts:
                    r = run(t, s, d.steps)
                    want = Outcome.ACCEPTED if d.verdict is Verdict.HALTS_ACCEPT else Outcome.REJECTED
                    if r.outcome is not want or r.steps != d.steps:
                        mismatches.append([t.name, s])
                elif d.verdict is Verdict.DIVERGES:
                    if run(t, s, DIVERGENCE_FACTOR * guard).outcome is not Outcome.BUDGET_EXHAUSTED:
                        mismatches.append([t.name, s])
        return not mismatches, {"mismatches": mismatches}

    def union_theorem():
        cls = learner_class(par, universe, guard, workers, engine)
        return cls == union, {"parallel": len(cls), "union": len(union)}

    def non_union():
        core = paper_sequential_class(tables, universe, guard, workers)
        robust = adversarial_sequential_class(tables, universe, guard, workers)
        return core <= union and robust == core, {
            "sequential_core": len(core), "order_robust": len(robust), "union": len(union), "strict": core < union,
        }

    _, _, rows = compare_rows(tables, universe, guard, engine)

    def t_complexity():
        bad = [r.input for r in rows if any(v.startswith("t_") for v in r.violations)]
        return not bad, {"rows": len(rows), "failing": bad}

    def s_complexity():
        bad = [r.input for r in rows if any(v.startswith("s_") for v in r.violations) and r.s_bound_applies]
        return not bad, {"rows": len(rows), "in_scope": sum(r.s_bound_applies for r in rows), "failing": bad}

    def st_space():
        specs = [par, LearnerSpec(tables, Mode.SEQUENTIAL, guard)]
        sizes = {storage_size(s) for s in specs}
        return len(sizes) == 1, {"storage": sorted(sizes)}

    def hybrid():
        spec = hybrid_spec(tables, universe, guard, guard, workers)
        verify_plan(spec.plan, universe, guard, workers)
        cls = learner_class(spec, universe, guard, workers, engine)
        return cls == union, {"lanes": spec.plan.lane_names(), "acyclic": spec.plan.acyclic, "hybrid": len(cls)}

    def filtration():
        history = SystemHistory.start(tables[:1], universe, Mode.PARALLEL)
        for t in tables[1:]:
            history = add_rule(history, t)
        steps = []
        for n in range(len(history) - 1):
            occurred = learning_occurred(history, n, n + 1, guard, workers)
            steps.append(
                occurred == learning_condition(history, n, guard, workers)
                and occurred == bool(learned_set(history, n, n + 1, guard, workers))
            )
        return is_filtration(history, guard, workers) and all(steps), {"snapshots": len(history), "sound": steps}

    def ess():
        dominance = parallel_dominance(tables, universe, UtilityMeasure.counting(universe), guard, workers)
        ok = dominance["complete_tandem_exists"] or dominance["parallel_verdict"] == "strict_nash"
        if not dominance["complete_tandem_exists"]:
            seqs = [LearnerSpec(o, Mode.SEQUENTIAL, guard) for o in itertools.permutations(tables)]
            ok = ok and superset_implies_ess([par, *seqs], 0, universe, UtilityMeasure.counting(universe),
                                             guard, workers)
        return ok, {k: dominance[k] for k in ("complete_tandem_exists", "parallel_verdict")}

    for name, fn in [
        ("oracle_agreement", oracle_agreement),
        ("union", union_theorem),
        ("non_union", non_union),
        ("t_complexity", t_complexity),
        ("s_complexity", s_complexity),
        ("st_space", st_space),
        ("hybrid_completeness", hybrid),
        ("filtration", filtration),
        ("ess", ess),
    ]:
        checks.append(_check(name, label, fn))
    return checks


def history_checks(history: SystemHistory, label: str, guard: int, workers: int = 1) -> list[TheoremCheck]:
    """Filtration is required only when every snapshot runs in parallel mode."""
    parallel = all(s.mode is Mode.PARALLEL for s in history.snapshots)

    def filtration():
        holds = is_filtration(history, guard, workers)
        return holds or not parallel, {"parallel": parallel, "is_filtration": holds}

    def soundness():
        steps = []
        for n in range(len(history) - 1):
            occurred = learning_occurred(history, n, n + 1, guard, workers)
            learned = learned_set(history, n, n + 1, guard, workers)
            # outside parallel mode a class may gain strings while losing others
            ok = bool(learned) or not occurred
            if parallel:
                ok = ok and occurred == bool(learned) and occurred == learning_condition(history, n, guard, workers)
            steps.append({"step": n, "learned": learned.to_list(), "ok": ok})
        return all(s["ok"] for s in steps), {"steps": steps}

    return [_check("history_filtration", label, filtration), _check("learning_soundness", label, soundness)]


def report_experiment(config: ExperimentConfig, random_sets: int = 0,
                      histories: list[str] | None = None) -> TheoremReport:
    tables = load_tables(config.ordered_rules)
    universe = make_universe(config, tables)
    checks = theorem_checks(tables, universe, config.guard, config.workers, config.engine)

    for path in histories or []:
        history = load_history(path, universe)
        checks.extend(history_checks(history, Path(path).name, config.guard, config.workers))

    rng = random.Random(config.seed)
    for i in range(random_sets):
        drawn = random_table_set(rng, universe, config.guard, prefix=f"S{i}_")
        checks.extend(theorem_checks(drawn, universe, config.guard, config.workers, config.engine))

    bad = sum(1 for c in checks if not c.ok)
    log.info("Theorem battery: %d check(s), %d violation(s)", len(checks), bad)
    return TheoremReport(
        seed=config.seed,
        random_sets=random_sets,
        universe=_universe_info(universe),
        checks=checks,
        violations=bad,
        ok=bad == 0,
    )


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def _sibling(out: str, suffix: str) -> Path:
    path = Path(out)
    return path.with_name(f"{path.stem}_{suffix}{path.suffix or '.csv'}")


def emit(report, config: ExperimentConfig, matrix_out: str | None = None) -> None:
    if config.format == "csv":
        text = report.to_frame().to_csv(index=False)
    else:
        text = json.dumps(report.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
        log.info("Wrote %s report to %s", report.command, config.out)
    else:
        sys.stdout.write(text)

    if isinstance(report, EvolveReport):
        if matrix_out is None and config.format == "csv" and config.out:
            matrix_out = str(_sibling(config.out, "matrix"))
        if matrix_out:
            report.matrix_frame().to_csv(matrix_out, index=False)
            log.info("Wrote payoff matrix to %s", matrix_out)
        elif config.format == "csv":
            log.warning("Payoff matrix CSV not written: give --out or --matrix-out")


def write_schemas(commands: list[str] | None, out: str | None) -> None:
    text = json.dumps(report_schemas(commands), indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        log.info("Wrote report schemas to %s", out)
    else:
        sys.stdout.write(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _split(value: str | None) -> list[str] | None:
    if value is None:
        return None
    return [v for v in value.replace(",", " ").split() if v]


def _alphabet(value: str | None) -> list[str] | None:
    """"a,b" or "a b" name symbols; "ab" is read one character per symbol."""
    if not value:
        return None
    if "," in value or " " in value:
        return _split(value)
    return list(value)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--rules", help="comma-separated rule files, stems or table names")
    common.add_argument("--order", help="sequential order (a permutation of --rules)")
    common.add_argument("--alphabet", help="universe alphabet, default the first table's")
    common.add_argument("--max-len", type=int, default=None)
    common.add_argument("--budget", type=int, default=None)
    common.add_argument("--guard", type=int, default=None)
    common.add_argument("--measure", default="counting", help="counting or a JSON weights file")
    common.add_argument("--out")
    common.add_argument("--format", default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--engine", default="lockstep", help="lockstep or threads")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--rules-dir", default=str(RULES_DIR))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="learnlab", description="Rule-table learner experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run one learner on one input")
    p.add_argument("--mode", default="par")
    p.add_argument("--input", default="")

    p = sub.add_parser("enumerate", parents=[common], help="accepted classes over the universe")
    p.add_argument("--mode", default="par")

    sub.add_parser("compare", parents=[common], help="sequential vs parallel metrics per string")

    p = sub.add_parser("evolve", parents=[common], help="payoff matrix, ESS verdicts, replicator run")
    p.add_argument("--mode", default="par,seq", help="comma-separated strategies")
    p.add_argument("--shares", help="initial shares, one per strategy")
    p.add_argument("--generations", type=int, default=200)
    p.add_argument("--matrix-out", help="payoff matrix CSV (default: next to a CSV --out)")

    p = sub.add_parser("report", parents=[common], help="theorem battery")
    p.add_argument("--random-sets", type=int, default=0)
    p.add_argument("--history", action="append", default=[], help="history manifest (repeatable)")

    p = sub.add_parser("schema", help="JSON Schema of the reports")
    p.add_argument("--report", help="comma-separated commands, default all")
    p.add_argument("--out")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    rules_dir = Path(args.rules_dir)
    rules = _split(args.rules)
    order = _split(args.order)
    if not rules and not order:
        raise UsageError("give --rules or --order")
    order_paths = [str(resolve_rule(r, rules_dir)) for r in order] if order else None
    rule_paths = [str(resolve_rule(r, rules_dir)) for r in rules] if rules else order_paths

    values = {
        "rules": rule_paths,
        "order": order_paths,
        "alphabet": _alphabet(args.alphabet),
        "measure": args.measure,
        "out": args.out,
        "format": args.format,
        "seed": args.seed,
        "engine": args.engine,
    }
    if getattr(args, "mode", None):
        values["modes"] = _split(args.mode)
    for key in ("max_len", "budget", "guard", "workers"):
        if getattr(args, key) is not None:
            values[key] = getattr(args, key)
    return ExperimentConfig(**values)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"learnlab: {e}\n")
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else LOG_LEVEL,
        format="%(asctime)s [%(levelname)s] %(message)s",
        stream=sys.stderr,
    )

    try:
        if args.command == "schema":
            write_schemas(_split(args.report), args.out)
            return EXIT_OK
        config = config_from_args(args)
        if args.command == "run":
            report = run_experiment(config, args.input)
            emit(report, config)
            return {
                LearnerOutcome.ACCEPTED.value: EXIT_OK,
                LearnerOutcome.REJECTED.value: EXIT_REJECTED,
                LearnerOutcome.STUCK.value: EXIT_STUCK,
            }[report.outcome]
        if args.command == "enumerate":
            emit(enumerate_experiment(config), config)
            return EXIT_OK
        if args.command == "compare":
            report = compare_experiment(config)
            emit(report, config)
            return EXIT_OK if report.ok else EXIT_VIOLATION
        if args.command == "evolve":
            shares = [float(s) for s in _split(args.shares)] if args.shares else None
            emit(evolve_experiment(config, shares, args.generations), config, args.matrix_out)
            return EXIT_OK
        report = report_experiment(config, args.random_sets, args.history)
        emit(report, config)
        return EXIT_OK if report.ok else EXIT_VIOLATION
    except OracleUnknownError as e:
        log.error("Oracle Unknown: table %s, string %r (guard %d)", e.table, e.string, e.guard)
        return EXIT_UNKNOWN
    except InvariantViolation as e:
        log.error("Invariant violation: %s", e)
        return EXIT_VIOLATION
    except (ValueError, OSError) as e:
        log.error("%s", e)
        return EXIT_USAGE
    except RuntimeError as e:
        log.error("%s", e)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
