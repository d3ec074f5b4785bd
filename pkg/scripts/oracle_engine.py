#!/usr/bin/env python3
"""
learnlab — Desk-Scale Halting Oracle

Decides halting exactly for small machines so that halting-dependent
quantities (accepted classes, hang sets, the order-free sequential class)
become computable over a finite string universe.

Provides:
  1. decide_halt(table, input, guard) — HaltsAccept / HaltsReject / Diverges / Unknown
  2. language_of(table, universe, guard) — accepted class within the universe
  3. hang_set(table, universe, guard) — strings on which the table never halts
  4. paper_sequential_class(tables, universe, guard) — union of the all-halt classes
  5. oracle_profile(table, universe, guard) — every verdict, cached

Two divergence witnesses are exact:
  - ConfigCycle: a full configuration (state, head, written tape) repeats.
  - BlankRunaway: the head sits right of every written cell and the chain of
    (state, blank) transitions moves only right and returns to a state it
    already passed through, so the machine marches over blanks forever.
Anything else still running at the guard is Unknown. Under the strict
policy every Unknown is an error; nothing is silently classified.
"""

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator

from tm_engine import RuleTable, Simulation

log = logging.getLogger(__name__)

DEFAULT_GUARD = int(os.environ.get("LEARNLAB_GUARD", "1000"))
DEFAULT_WORKERS = int(os.environ.get("LEARNLAB_WORKERS", "1"))


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------
class OracleUnknownError(RuntimeError):
    """Strict oracle policy: a verdict stayed Unknown at the guard."""

    def __init__(self, table: str, string: str, guard: int):
        self.table = table
        self.string = string
        self.guard = guard
        super().__init__(
            f"halting of {table} on {string!r} undecided within guard {guard}"
        )


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------
class Verdict(str, Enum):
    HALTS_ACCEPT = "halts_accept"
    HALTS_REJECT = "halts_reject"
    DIVERGES = "diverges"
    UNKNOWN = "unknown"


class Witness(str, Enum):
    CONFIG_CYCLE = "config_cycle"
    BLANK_RUNAWAY = "blank_runaway"


@dataclass(frozen=True)
class HaltDecision:
    verdict: Verdict
    steps: int
    witness: Witness | None = None

    @property
    def halts(self) -> bool:
        return self.verdict in (Verdict.HALTS_ACCEPT, Verdict.HALTS_REJECT)

    @property
    def definite(self) -> bool:
        return self.verdict is not Verdict.UNKNOWN


@dataclass(frozen=True)
class StringUniverse:
    """Σ^≤L in length-then-lexicographic order (lexicographic by alphabet order)."""

    alphabet: tuple[str, ...]
    max_len: int
    strings: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.max_len < 0:
            raise ValueError(f"max_len must be >= 0 (got {self.max_len})")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("universe alphabet lists a symbol twice")
        if any(len(sym) != 1 for sym in self.alphabet):
            raise ValueError(f"universe symbols must be single characters: {list(self.alphabet)}")
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        strings = tuple(
            "".join(p)
            for n in range(self.max_len + 1)
            for p in itertools.product(self.alphabet, repeat=n)
        )
        object.__setattr__(self, "strings", strings)

    def __len__(self):
        return len(self.strings)

    def __contains__(self, s: str) -> bool:
        return len(s) <= self.max_len and all(ch in self.alphabet for ch in s)

    def sort_key(self, s: str) -> tuple:
        return len(s), tuple(self.alphabet.index(ch) for ch in s)

    def canonical(self, members: Iterable[str]) -> list[str]:
        return sorted(members, key=self.sort_key)


@dataclass(frozen=True)
class LanguageClass:
    """A finite set of strings relative to a declared universe."""

    universe: StringUniverse
    members: frozenset[str] = frozenset()

    def __post_init__(self):
        members = frozenset(self.members)
        stray = [s for s in members if s not in self.universe]
        if stray:
            raise ValueError(f"strings outside the universe: {sorted(stray)[:5]}")
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[str]:
        return iter(self.universe.canonical(self.members))

    def __contains__(self, s) -> bool:
        return s in self.members

    def _same(self, other: "LanguageClass") -> None:
        if other.universe != self.universe:
            raise ValueError("language classes over different universes")

    def __or__(self, other: "LanguageClass") -> "LanguageClass":
        self._same(other)
        return LanguageClass(self.universe, self.members | other.members)

    def __and__(self, other: "LanguageClass") -> "LanguageClass":
        self._same(other)
        return LanguageClass(self.universe, self.members & other.members)

    def __sub__(self, other: "LanguageClass") -> "LanguageClass":
        self._same(other)
        return LanguageClass(self.universe, self.members - other.members)

    def __le__(self, other: "LanguageClass") -> bool:
        self._same(other)
        return self.members <= other.members

    def __lt__(self, other: "LanguageClass") -> bool:
        self._same(other)
        return self.members < other.members

    def to_list(self) -> list[str]:
        return list(self)

    @classmethod
    def empty(cls, universe: StringUniverse) -> "LanguageClass":
        return cls(universe, frozenset())


# ---------------------------------------------------------------------------
# Divergence witnesses
# ---------------------------------------------------------------------------

def _blank_runaway(sim: Simulation) -> bool:
    """True if the machine is provably marching right over blanks forever."""
    table = sim.table
    if sim.tape and sim.head <= max(sim.tape):
        return False
    state = sim.state
    seen = set()
    while state not in seen:
        seen.add(state)
        t = table.transitions.get((state, table.blank))
        if t is None or t.move != "R":
            return False
        if table.is_terminal(t.state):
            return False
        state = t.state
    return True


def decide_halt(table: RuleTable, word: str, guard: int = DEFAULT_GUARD) -> HaltDecision:
    """Decide whether simulating `table` on `word` halts.

    HaltsAccept/HaltsReject report the exact step count run() would give.
    Diverges is only returned with a witness that proves non-termination.
    """
    if guard < 1:
        raise ValueError(f"guard must be >= 1 (got {guard})")
    sim = Simulation.for_input(table, word)
    seen: set[tuple] = set()
    while True:
        if sim.state == table.accept:
            return HaltDecision(Verdict.HALTS_ACCEPT, sim.steps)
        if sim.state == table.reject:
            return HaltDecision(Verdict.HALTS_REJECT, sim.steps)
        if _blank_runaway(sim):
            return HaltDecision(Verdict.DIVERGES, sim.steps, Witness.BLANK_RUNAWAY)
        sig = sim.signature()
        if sig in seen:
            return HaltDecision(Verdict.DIVERGES, sim.steps, Witness.CONFIG_CYCLE)
        seen.add(sig)
        if sim.steps >= guard:
            return HaltDecision(Verdict.UNKNOWN, sim.steps)
        sim.advance()


# ---------------------------------------------------------------------------
# Universe enumeration
# ---------------------------------------------------------------------------

def _check_universe(table: RuleTable, universe: StringUniverse) -> None:
    missing = [s for s in universe.alphabet if s not in table.alphabet]
    if missing:
        raise ValueError(f"universe symbols {missing} not in the alphabet of {table.name}")


@lru_cache(maxsize=512)
def _profile(table: RuleTable, universe: StringUniverse, guard: int, workers: int) -> tuple[HaltDecision, ...]:
    _check_universe(table, universe)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            decisions = tuple(pool.map(lambda s: decide_halt(table, s, guard), universe.strings))
    else:
        decisions = tuple(decide_halt(table, s, guard) for s in universe.strings)
    log.debug("Oracle profile for %s over Σ^≤%d: %d strings", table.name, universe.max_len, len(decisions))
    return decisions


def oracle_profile(table: RuleTable, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                   workers: int = DEFAULT_WORKERS) -> dict[str, HaltDecision]:
    """Verdict for every string of the universe, in canonical order."""
    return dict(zip(universe.strings, _profile(table, universe, guard, max(1, workers))))


def strict_profile(table: RuleTable, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                   workers: int = DEFAULT_WORKERS) -> dict[str, HaltDecision]:
    """oracle_profile under the strict policy: the first Unknown raises."""
    profile = oracle_profile(table, universe, guard, workers)
    for s, d in profile.items():
        if not d.definite:
            raise OracleUnknownError(table.name, s, guard)
    return profile


def language_of(table: RuleTable, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                workers: int = DEFAULT_WORKERS) -> LanguageClass:
    profile = strict_profile(table, universe, guard, workers)
    return LanguageClass(universe, frozenset(s for s, d in profile.items() if d.verdict is Verdict.HALTS_ACCEPT))


def hang_set(table: RuleTable, universe: StringUniverse, guard: int = DEFAULT_GUARD,
             workers: int = DEFAULT_WORKERS) -> LanguageClass:
    profile = strict_profile(table, universe, guard, workers)
    return LanguageClass(universe, frozenset(s for s, d in profile.items() if d.verdict is Verdict.DIVERGES))


def union_class(tables: Iterable[RuleTable], universe: StringUniverse, guard: int = DEFAULT_GUARD,
                workers: int = DEFAULT_WORKERS) -> LanguageClass:
    result = LanguageClass.empty(universe)
    for table in tables:
        result = result | language_of(table, universe, guard, workers)
    return result


def all_halt_class(tables: Iterable[RuleTable], universe: StringUniverse, guard: int = DEFAULT_GUARD,
                   workers: int = DEFAULT_WORKERS) -> LanguageClass:
    """Strings on which every table halts."""
    members = set(universe.strings)
    for table in tables:
        members -= hang_set(table, universe, guard, workers).members
    return LanguageClass(universe, frozenset(members))


def paper_sequential_class(tables: Iterable[RuleTable], universe: StringUniverse,
                           guard: int = DEFAULT_GUARD, workers: int = DEFAULT_WORKERS) -> LanguageClass:
    """⋃_k C_h(k), with C_h(k) the strings of C(r_k) on which every table halts.

    Independent of table order.
    """
    tables = list(tables)
    halting = all_halt_class(tables, universe, guard, workers)
    result = LanguageClass.empty(universe)
    for table in tables:
        result = result | (language_of(table, universe, guard, workers) & halting)
    return result


# ---------------------------------------------------------------------------
# CLI interface
# ---------------------------------------------------------------------------

if __name__ == "__main__":
    import argparse
    import json

    from tm_engine import load_rule_table

    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")

    parser = argparse.ArgumentParser(description="Desk-scale halting oracle")
    parser.add_argument("rule_file")
    parser.add_argument("--max-len", type=int, default=3)
    parser.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    args = parser.parse_args()

    table = load_rule_table(args.rule_file)
    universe = StringUniverse(table.alphabet, args.max_len)
    profile = oracle_profile(table, universe, args.guard)
    print(json.dumps(
        {s: {"verdict": d.verdict.value, "steps": d.steps, "witness": d.witness.value if d.witness else None}
         for s, d in profile.items()},
        indent=2,
    ))
