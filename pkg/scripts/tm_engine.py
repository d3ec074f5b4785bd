#!/usr/bin/env python3
"""
learnlab — Rule-Table Interpreter

Parses and executes single-tape deterministic rule tables ("rule-books").
The interpreter stands in for the universal machine that simulates one
rule-book at a time.

Provides:
  1. parse_rule_table(text) / load_rule_table(path) — rule-table source → RuleTable
  2. step(config, table) — one move of the machine
  3. run(table, input, budget) — full simulation with step/space accounting

Tape model: semi-infinite to the right, input written at cells 0..n-1,
head starts on cell 0, L at cell 0 is a no-move. A missing transition
sends the machine to the reject state without writing. Space is the number
of distinct cells the head has occupied; since the head moves one cell at
a time from cell 0 that is always max(head) + 1.
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, NamedTuple

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------
MOVES = ("L", "R", "S")
HEADER_KEYS = ("name", "alphabet", "blank", "start", "accept", "reject")

_TRANSITION_RE = re.compile(r"^(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+(\S+)$")
_HEADER_RE = re.compile(r"^([A-Za-z_]+)\s*:\s*(.*)$")


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------
class RuleTableError(ValueError):
    """Malformed or invalid rule-table source. `line` is 1-based."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)


class TapeInputError(ValueError):
    """Input string uses the blank or a symbol outside the table's alphabet."""


class TerminalConfigError(ValueError):
    """step() called on a configuration already in accept or reject."""


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------
class Outcome(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    BUDGET_EXHAUSTED = "budget_exhausted"
    # ω: a run stopped from outside while still working (parallel monitor halt)
    WORKING = "working"


class Transition(NamedTuple):
    state: str
    write: str
    move: str


@dataclass(frozen=True, eq=False)
class RuleTable:
    """One atomic rule-book. Compared and hashed by full content."""

    name: str
    alphabet: tuple[str, ...]
    blank: str
    start: str
    accept: str
    reject: str
    transitions: Mapping[tuple[str, str], Transition]

    def __post_init__(self):
        object.__setattr__(self, "transitions", MappingProxyType(dict(self.transitions)))

    @property
    def size(self) -> int:
        """Storage of the table in transition entries."""
        return len(self.transitions)

    @property
    def tape_symbols(self) -> frozenset[str]:
        return frozenset(self.alphabet) | {self.blank}

    def is_terminal(self, state: str) -> bool:
        return state == self.accept or state == self.reject

    def key(self) -> tuple:
        return (
            self.name, self.alphabet, self.blank, self.start, self.accept, self.reject,
            tuple(sorted(self.transitions.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, RuleTable):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"RuleTable({self.name!r}, size={self.size})"

    def to_source(self) -> str:
        """Render back to the line-oriented file format."""
        lines = [
            f"name: {self.name}",
            f"alphabet: {' '.join(self.alphabet)}",
            f"blank: {self.blank}",
            f"start: {self.start}",
            f"accept: {self.accept}",
            f"reject: {self.reject}",
        ]
        for (state, symbol), t in sorted(self.transitions.items()):
            lines.append(f"{state} {symbol} -> {t.state} {t.write} {t.move}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TapeConfig:
    """Instantaneous description of one simulation."""

    state: str
    tape: Mapping[int, str]
    head: int = 0
    steps: int = 0
    visited: int = 1

    def read(self, blank: str) -> str:
        return self.tape.get(self.head, blank)


@dataclass(frozen=True)
class RunResult:
    outcome: Outcome
    steps: int
    space: int

    def to_dict(self) -> dict:
        return {"outcome": self.outcome.value, "steps": self.steps, "space": self.space}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_rule_table(text: str, source: str | None = None) -> RuleTable:
    """Parse rule-table source into a validated RuleTable.

    Header lines are `key: value`; transition lines are
    `<state> <symbol> -> <state> <symbol> <L|R|S>`. Line order is free and
    `#` starts a comment.
    """
    header: dict[str, tuple[str, int]] = {}
    raw_transitions: list[tuple[int, tuple[str, ...]]] = []
    lines = text.splitlines()

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _TRANSITION_RE.match(line)
        if m:
            raw_transitions.append((lineno, m.groups()))
            continue
        m = _HEADER_RE.match(line)
        if not m:
            raise RuleTableError(f"unrecognised line: {raw.strip()!r}", lineno, source)
        key, value = m.group(1).lower(), m.group(2).strip()
        if key not in HEADER_KEYS:
            raise RuleTableError(f"unknown header field '{key}'", lineno, source)
        if key in header:
            raise RuleTableError(f"header field '{key}' given twice", lineno, source)
        if not value:
            raise RuleTableError(f"header field '{key}' is empty", lineno, source)
        header[key] = (value, lineno)

    for key in HEADER_KEYS:
        if key not in header:
            raise RuleTableError(f"missing header field '{key}'", len(lines) + 1, source)

    alphabet = tuple(header["alphabet"][0].split())
    blank = header["blank"][0]
    accept, reject = header["accept"][0], header["reject"][0]

    if len(set(alphabet)) != len(alphabet):
        raise RuleTableError("alphabet lists a symbol twice", header["alphabet"][1], source)
    if blank in alphabet:
        raise RuleTableError("blank must not be an input symbol", header["blank"][1], source)
    # input strings are read one character per symbol
    for sym in alphabet:
        if len(sym) != 1:
            raise RuleTableError(f"symbol '{sym}' must be a single character", header["alphabet"][1], source)
    if len(blank) != 1:
        raise RuleTableError(f"blank '{blank}' must be a single character", header["blank"][1], source)
    if accept == reject:
        raise RuleTableError("accept and reject states must differ", header["reject"][1], source)
    if header["start"][0] in (accept, reject):
        raise RuleTableError("start state must not be a halting state", header["start"][1], source)

    symbols = set(alphabet) | {blank}
    transitions: dict[tuple[str, str], Transition] = {}
    for lineno, (state, read, nxt, write, move) in raw_transitions:
        if state in (accept, reject):
            raise RuleTableError(f"transition out of halting state '{state}'", lineno, source)
        for sym in (read, write):
            if sym not in symbols:
                raise RuleTableError(f"symbol '{sym}' not declared", lineno, source)
        if move not in MOVES:
            raise RuleTableError(f"move must be one of L, R, S (got '{move}')", lineno, source)
        if (state, read) in transitions:
            raise RuleTableError(f"duplicate transition for ({state}, {read})", lineno, source)
        transitions[(state, read)] = Transition(nxt, write, move)

    table = RuleTable(
        name=header["name"][0],
        alphabet=alphabet,
        blank=blank,
        start=header["start"][0],
        accept=accept,
        reject=reject,
        transitions=transitions,
    )
    log.debug("Parsed rule table %s (%d transitions)", table.name, table.size)
    return table


def load_rule_table(path: str | Path) -> RuleTable:
    path = Path(path)
    return parse_rule_table(path.read_text(encoding="utf-8"), source=str(path))


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

class Simulation:
    """Mutable machine instance simulating one table on one input.

    Used by run(), the halting oracle and the learner engines; step()
    wraps it for value-level use. Blank writes erase the cell so equal
    tapes always have equal contents.
    """

    __slots__ = ("table", "state", "tape", "head", "steps", "visited")

    def __init__(self, table: RuleTable, tape: Mapping[int, str] | None = None,
                 state: str | None = None, head: int = 0, steps: int = 0, visited: int = 1):
        self.table = table
        self.state = table.start if state is None else state
        self.tape = {i: s for i, s in (tape or {}).items() if s != table.blank}
        self.head = head
        self.steps = steps
        self.visited = visited

    @classmethod
    def for_input(cls, table: RuleTable, word: str) -> "Simulation":
        check_input(table, word)
        return cls(table, dict(enumerate(word)))

    @property
    def halted(self) -> bool:
        return self.table.is_terminal(self.state)

    @property
    def outcome(self) -> Outcome:
        if self.state == self.table.accept:
            return Outcome.ACCEPTED
        if self.state == self.table.reject:
            return Outcome.REJECTED
        return Outcome.WORKING

    def symbol(self) -> str:
        return self.tape.get(self.head, self.table.blank)

    def advance(self) -> None:
        """Apply one transition. Caller guarantees the machine has not halted."""
        table = self.table
        t = table.transitions.get((self.state, self.tape.get(self.head, table.blank)))
        self.steps += 1
        if t is None:
            self.state = table.reject
            return
        if t.write == table.blank:
            self.tape.pop(self.head, None)
        else:
            self.tape[self.head] = t.write
        if t.move == "R":
            self.head += 1
            if self.head + 1 > self.visited:
                self.visited = self.head + 1
        elif t.move == "L" and self.head > 0:
            self.head -= 1
        self.state = t.state

    def config(self) -> TapeConfig:
        return TapeConfig(self.state, MappingProxyType(dict(self.tape)), self.head, self.steps, self.visited)

    def signature(self) -> tuple:
        """Hashable full configuration (state, head, written tape)."""
        return self.state, self.head, frozenset(self.tape.items())

    def result(self) -> RunResult:
        outcome = self.outcome
        if outcome is Outcome.WORKING:
            outcome = Outcome.BUDGET_EXHAUSTED
        return RunResult(outcome, self.steps, self.visited)


def check_input(table: RuleTable, word: str) -> None:
    for ch in word:
        if ch == table.blank:
            raise TapeInputError(f"input {word!r} contains the blank symbol '{table.blank}'")
        if ch not in table.alphabet:
            raise TapeInputError(f"input {word!r} uses '{ch}', not in the alphabet of {table.name}")


def initial_config(table: RuleTable, word: str) -> TapeConfig:
    return Simulation.for_input(table, word).config()


def step(config: TapeConfig, table: RuleTable) -> TapeConfig:
    """One move of the machine. Halted configurations are absorbing and rejected here."""
    if table.is_terminal(config.state):
        raise TerminalConfigError(f"configuration already halted in '{config.state}'")
    sim = Simulation(table, config.tape, config.state, config.head, config.steps, config.visited)
    sim.advance()
    return sim.config()


def run(table: RuleTable, word: str, budget: int) -> RunResult:
    """Simulate `table` on `word` for at most `budget` steps."""
    if budget < 1:
        raise ValueError(f"budget must be >= 1 (got {budget})")
    sim = Simulation.for_input(table, word)
    while not sim.halted and sim.steps < budget:
        sim.advance()
    return sim.result()


# ---------------------------------------------------------------------------
# CLI interface
# ---------------------------------------------------------------------------

if __name__ == "__main__":
    import argparse
    import json

    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")

    parser = argparse.ArgumentParser(description="Run one rule table on one input")
    parser.add_argument("rule_file")
    parser.add_argument("input", nargs="?", default="")
    parser.add_argument("--budget", type=int, default=1000)
    args = parser.parse_args()

    result = run(load_rule_table(args.rule_file), args.input, args.budget)
    print(json.dumps(result.to_dict(), indent=2))
