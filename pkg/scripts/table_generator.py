#!/usr/bin/env python3
"""
learnlab — Random Rule-Table Generator

Seeded source of small rule tables for property suites and the `report`
battery. It makes no claim about how rule-books arise; it only samples
machines small enough for the desk-scale oracle to decide.

Provides:
  1. random_table(rng, name) — one table over {a, b} with up to `max_states` working states
  2. random_table_set(rng, universe, guard) — 2–4 tables whose oracle verdicts are all definite
"""

import logging
import random

from oracle_engine import DEFAULT_GUARD, StringUniverse, oracle_profile
from tm_engine import MOVES, RuleTable, Transition

log = logging.getLogger(__name__)

ALPHABET = ("a", "b")
BLANK = "_"
ACCEPT, REJECT = "acc", "rej"


class TableGenerationError(RuntimeError):
    """No definite table set within the draw limit."""


def random_table(rng: random.Random, name: str, alphabet: tuple[str, ...] = ALPHABET,
                 max_states: int = 3, density: float = 0.85) -> RuleTable:
    """Each (state, symbol) pair gets a transition with probability `density`.

    Targets are drawn from the working states plus accept and reject, so
    the sampled machines mix halting, cycling and runaway behaviour.
    """
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    targets = states + [ACCEPT, REJECT]
    symbols = list(alphabet) + [BLANK]

    transitions = {}
    for state in states:
        for symbol in symbols:
            if rng.random() < density:
                transitions[(state, symbol)] = Transition(rng.choice(targets), rng.choice(symbols), rng.choice(MOVES))
    return RuleTable(
        name=name,
        alphabet=tuple(alphabet),
        blank=BLANK,
        start="q0",
        accept=ACCEPT,
        reject=REJECT,
        transitions=transitions,
    )


def _definite(table: RuleTable, universe: StringUniverse, guard: int) -> bool:
    return all(d.definite for d in oracle_profile(table, universe, guard, workers=1).values())


def random_table_set(rng: random.Random, universe: StringUniverse, guard: int = DEFAULT_GUARD,
                     min_tables: int = 2, max_tables: int = 4, max_states: int = 3,
                     prefix: str = "G", max_tries: int = 200) -> tuple[RuleTable, ...]:
    """Distinct tables, each fully decided by the oracle over `universe`.

    Draws are retried until definite; the sequence depends only on the
    state of `rng`.
    """
    count = rng.randint(min_tables, max_tables)
    tables: list[RuleTable] = []
    tries = 0
    while len(tables) < count:
        tries += 1
        if tries > max_tries:
            raise TableGenerationError(f"no definite table set after {max_tries} draws")
        table = random_table(rng, f"{prefix}{len(tables)}", universe.alphabet, max_states)
        if not _definite(table, universe, guard):
            log.debug("Discarding %s: oracle Unknown within guard %d", table.name, guard)
            continue
        if any(t.transitions == table.transitions for t in tables):
            continue
        tables.append(table)
    return tuple(tables)
