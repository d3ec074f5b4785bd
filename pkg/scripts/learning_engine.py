#!/usr/bin/env python3
"""
learnlab — Learning Process Engine

Models a system whose rule set only ever grows: the single permitted
operation adds one rule-book, existing rule-books are never edited or
removed. Learning between two snapshots is the growth of the accepted
class, always measured over a declared finite universe.

Provides:
  1. add_rule(history, r_new) — append a snapshot R ∪ {r_new}
  2. learned_set(history, t1, t2, guard) — C(S(t2)) \\ C(S(t1))
  3. learning_occurred(history, t1, t2, guard) — C(S(t1)) ⊊ C(S(t2))
  4. is_filtration(history, guard) — classes never shrink between snapshots
  5. learning_condition(history, n, guard) — C(r_new) \\ C(S(t_n)) ≠ ∅ for step n
  6. load_history(path, universe) — history manifest → SystemHistory

Manifest format, one snapshot per line (`#` comments):
    t0 mode=par tables=rules/RA.tm
    t1 mode=par tables=rules/RA.tm,rules/REPS.tm
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path

from learner_engine import (
    LearnerSpec,
    Mode,
    check_alphabets,
    hybrid_spec,
    learner_class,
)
from oracle_engine import DEFAULT_GUARD, DEFAULT_WORKERS, LanguageClass, StringUniverse, language_of
from tm_engine import RuleTable, load_rule_table

log = logging.getLogger(__name__)

_MANIFEST_RE = re.compile(r"^t(\d+)\s+mode=(\S+)\s+tables=(\S+)$")


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------
class HistoryError(ValueError):
    """Bad snapshot index, malformed manifest, or a history breaking the growth axiom."""


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Snapshot:
    t: int
    tables: tuple[RuleTable, ...]
    mode: Mode

    def names(self) -> list[str]:
        return [t.name for t in self.tables]


@dataclass(frozen=True)
class SystemHistory:
    snapshots: tuple[Snapshot, ...]
    universe: StringUniverse

    def __post_init__(self):
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        if not self.snapshots:
            raise HistoryError("a history needs at least one snapshot")
        for prev, nxt in zip(self.snapshots, self.snapshots[1:]):
            _check_growth(prev, nxt)

    def __len__(self):
        return len(self.snapshots)

    @property
    def last(self) -> Snapshot:
        return self.snapshots[-1]

    def snapshot(self, t: int) -> Snapshot:
        if not 0 <= t < len(self.snapshots):
            raise HistoryError(f"snapshot index {t} out of range 0..{len(self.snapshots) - 1}")
        return self.snapshots[t]

    @classmethod
    def start(cls, tables, universe: StringUniverse, mode: Mode | str = Mode.PARALLEL) -> "SystemHistory":
        tables = tuple(tables)
        if tables:
            check_alphabets(tables)
        return cls((Snapshot(0, tables, Mode.parse(mode)),), universe)


def _is_subsequence(short: tuple, long: tuple) -> bool:
    it = iter(long)
    return all(any(x == y for y in it) for x in short)


def _check_growth(prev: Snapshot, nxt: Snapshot) -> None:
    """One addition per event, no edits, no removals, existing order kept."""
    if nxt.t != prev.t + 1:
        raise HistoryError(f"snapshot t{nxt.t} does not follow t{prev.t}")
    if not _is_subsequence(prev.tables, nxt.tables):
        raise HistoryError(
            f"t{nxt.t} removes, edits or reorders rule-books of t{prev.t}: {prev.names()} -> {nxt.names()}"
        )
    if len(nxt.tables) > len(prev.tables) + 1:
        raise HistoryError(f"t{nxt.t} adds {len(nxt.tables) - len(prev.tables)} rule-books; only one per step")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def add_rule(history: SystemHistory, r_new: RuleTable, mode: Mode | str | None = None,
             position: int | None = None) -> SystemHistory:
    """Return a new history whose last snapshot is R ∪ {r_new}.

    `position` places r_new within the ordered table list (sequential
    learners care); default is the end. Adding a table already present
    repeats the snapshot unchanged.
    """
    last = history.last
    if last.tables:
        check_alphabets(last.tables + (r_new,))
    mode = Mode.parse(mode) if mode is not None else last.mode

    for t in last.tables:
        if t.name == r_new.name and t != r_new:
            raise HistoryError(f"a different rule-book named {r_new.name} already exists; rule-books are never edited")
    if r_new in last.tables:
        tables = last.tables
    else:
        tables = list(last.tables)
        tables.insert(len(tables) if position is None else position, r_new)
        tables = tuple(tables)

    log.debug("add_rule: t%d %s -> %s", last.t + 1, last.names(), [t.name for t in tables])
    return SystemHistory(history.snapshots + (Snapshot(last.t + 1, tables, mode),), history.universe)


def snapshot_spec(history: SystemHistory, t: int, guard: int = DEFAULT_GUARD,
                  workers: int = DEFAULT_WORKERS) -> LearnerSpec:
    snap = history.snapshot(t)
    if snap.mode is Mode.HYBRID:
        return hybrid_spec(snap.tables, history.universe, guard, guard, workers)
    return LearnerSpec(snap.tables, snap.mode, guard)


def snapshot_class(history: SystemHistory, t: int, guard: int = DEFAULT_GUARD,
                   workers: int = DEFAULT_WORKERS) -> LanguageClass:
    """C(S(t)) under the snapshot's own mode; an empty rule set accepts nothing."""
    snap = history.snapshot(t)
    if not snap.tables:
        return LanguageClass.empty(history.universe)
    return learner_class(snapshot_spec(history, t, guard, workers), history.universe, guard, workers)


def _check_interval(history: SystemHistory, t1: int, t2: int) -> None:
    history.snapshot(t1)
    history.snapshot(t2)
    if t1 > t2:
        raise HistoryError(f"t1 ({t1}) must not exceed t2 ({t2})")


def learned_set(history: SystemHistory, t1: int, t2: int, guard: int = DEFAULT_GUARD,
                workers: int = DEFAULT_WORKERS) -> LanguageClass:
    _check_interval(history, t1, t2)
    return snapshot_class(history, t2, guard, workers) - snapshot_class(history, t1, guard, workers)


def learning_occurred(history: SystemHistory, t1: int, t2: int, guard: int = DEFAULT_GUARD,
                      workers: int = DEFAULT_WORKERS) -> bool:
    _check_interval(history, t1, t2)
    return snapshot_class(history, t1, guard, workers) < snapshot_class(history, t2, guard, workers)


def learning_condition(history: SystemHistory, n: int, guard: int = DEFAULT_GUARD,
                       workers: int = DEFAULT_WORKERS) -> bool:
    """Whether the rule-book added between t_n and t_{n+1} brings a string C(S(t_n)) lacks."""
    before = history.snapshot(n)
    after = history.snapshot(n + 1)
    added = [t for t in after.tables if t not in before.tables]
    if not added:
        return False
    return bool(language_of(added[0], history.universe, guard, workers) - snapshot_class(history, n, guard, workers))


def is_filtration(history: SystemHistory, guard: int = DEFAULT_GUARD, workers: int = DEFAULT_WORKERS) -> bool:
    classes = [snapshot_class(history, t, guard, workers) for t in range(len(history))]
    for t, (a, b) in enumerate(zip(classes, classes[1:])):
        if not a <= b:
            log.info("Filtration breaks at t%d -> t%d: lost %s", t, t + 1, (a - b).to_list()[:5])
            return False
    return True


# ---------------------------------------------------------------------------
# Manifests
# ---------------------------------------------------------------------------

def load_history(path: str | Path, universe: StringUniverse | None = None, max_len: int = 3) -> SystemHistory:
    """Read a history manifest; table paths are relative to the manifest's directory.

    Without a universe, one is built from the first table's alphabet and `max_len`.
    """
    path = Path(path)
    cache: dict[Path, RuleTable] = {}
    snapshots = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _MANIFEST_RE.match(line)
        if not m:
            raise HistoryError(f"{path}:{lineno}: expected 't<i> mode=<seq|par|hybrid> tables=<files>'")
        t, mode, files = int(m.group(1)), m.group(2), m.group(3)
        try:
            mode = Mode.parse(mode)
        except ValueError:
            raise HistoryError(f"{path}:{lineno}: unknown mode '{mode}'")
        tables = []
        for name in filter(None, files.split(",")):
            file = (path.parent / name).resolve()
            if file not in cache:
                cache[file] = load_rule_table(file)
            tables.append(cache[file])
        snapshots.append(Snapshot(t, tuple(tables), mode))

    if not snapshots:
        raise HistoryError(f"{path}: no snapshots")
    if snapshots[0].t != 0:
        raise HistoryError(f"{path}: first snapshot must be t0")
    all_tables = [t for s in snapshots for t in s.tables]
    if all_tables:
        check_alphabets(all_tables)
    if universe is None:
        universe = StringUniverse(all_tables[0].alphabet if all_tables else (), max_len)
    history = SystemHistory(tuple(snapshots), universe)
    log.info("Loaded history %s: %d snapshot(s)", path.name, len(history))
    return history
