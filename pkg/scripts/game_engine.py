#!/usr/bin/env python3
"""
learnlab — Learning Strategy Game Engine

Treats learners as strategies in a two-player game whose payoff is the
difference in utility of the accepted classes, then asks which strategy
is evolutionarily stable and what a population of learners drifts to.

Provides:
  1. utility(X, measure) — positive additive measure of a language class
  2. payoff(S1, S2, universe, measure, guard) — 𝒰(C(S1)) − 𝒰(C(S2))
  3. payoff_matrix(strategies, ...) — pairwise payoffs, zero diagonal, antisymmetric
  4. ess_verdict(matrix, i) — StrictNash / MaynardSmith / NotESS
  5. superset_implies_ess(strategies, e, ...) — superset class ⇒ strict Nash, checked end-to-end
  6. replicate(matrix, pop0, generations) — discrete replicator dynamics on the simplex
  7. parallel_dominance(tables, ...) — Par against every tandem ordering of the same tables
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from learner_engine import InvariantViolation, LearnerSpec, Mode, learner_class
from oracle_engine import DEFAULT_GUARD, DEFAULT_WORKERS, LanguageClass, StringUniverse, union_class

log = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-12


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------
class UniverseMismatchError(ValueError):
    """A class and a measure are defined over different universes."""


class PopulationError(ValueError):
    """Population shares are negative, unknown, or do not sum to 1."""


# ---------------------------------------------------------------------------
# Utility measure
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class UtilityMeasure:
    """Strictly positive weight per string; strings without a weight count 1.0."""

    universe: StringUniverse
    weights: Mapping[str, float] = field(default_factory=dict)
    name: str = "counting"

    def __post_init__(self):
        weights = {}
        for s, w in dict(self.weights).items():
            if s not in self.universe:
                log.warning("Measure %s: %r lies outside Σ^≤%d, ignored", self.name, s, self.universe.max_len)
                continue
            w = float(w)
            if not w > 0 or math.isinf(w):
                raise ValueError(f"weight for {s!r} must be a positive finite number (got {w})")
            weights[s] = w
        object.__setattr__(self, "weights", MappingProxyType(weights))

    def weight(self, s: str) -> float:
        return self.weights.get(s, 1.0)

    @classmethod
    def counting(cls, universe: StringUniverse) -> "UtilityMeasure":
        return cls(universe)

    @classmethod
    def from_file(cls, path: str | Path, universe: StringUniverse) -> "UtilityMeasure":
        """JSON object {string: weight}; the key "" is ε."""
        path = Path(path)
        data = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError(f"{path}: weights file must hold a JSON object")
        return cls(universe, data, name=path.stem)


def utility(X: LanguageClass, m: UtilityMeasure) -> float:
    if X.universe != m.universe:
        raise UniverseMismatchError(
            f"class over Σ^≤{X.universe.max_len} {X.universe.alphabet}, "
            f"measure over Σ^≤{m.universe.max_len} {m.universe.alphabet}"
        )
    return math.fsum(m.weight(s) for s in X)


# ---------------------------------------------------------------------------
# Payoffs
# ---------------------------------------------------------------------------
class EssVerdict(str, Enum):
    STRICT_NASH = "strict_nash"
    MAYNARD_SMITH = "maynard_smith"
    NOT_ESS = "not_ess"


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    strategies: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        n = len(self.strategies)
        if entries.shape != (n, n):
            raise ValueError(f"payoff matrix shape {entries.shape} does not match {n} strategies")
        if np.any(np.diag(entries) != 0):
            raise InvariantViolation("payoff matrix has a non-zero diagonal")
        if not np.array_equal(entries, -entries.T):
            raise InvariantViolation("payoff matrix is not antisymmetric")
        entries.setflags(write=False)
        object.__setattr__(self, "strategies", tuple(self.strategies))
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.strategies)

    def to_list(self) -> list[list[float]]:
        return self.entries.tolist()

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.entries, index=list(self.strategies), columns=list(self.strategies))


def payoff(S1: LearnerSpec, S2: LearnerSpec, universe: StringUniverse, m: UtilityMeasure,
           guard: int = DEFAULT_GUARD, workers: int = DEFAULT_WORKERS) -> float:
    return (utility(learner_class(S1, universe, guard, workers), m)
            - utility(learner_class(S2, universe, guard, workers), m))


def payoff_matrix(strategies: Sequence[LearnerSpec], universe: StringUniverse, m: UtilityMeasure,
                  guard: int = DEFAULT_GUARD, workers: int = DEFAULT_WORKERS) -> PayoffMatrix:
    """E[i][j] = 𝒰(C(S_i)) − 𝒰(C(S_j)), each class computed once."""
    if not strategies:
        raise ValueError("payoff matrix needs at least one strategy")
    names = [s.name for s in strategies]
    if len(set(names)) != len(names):
        raise ValueError(f"strategy names must be unique: {names}")
    u = np.array([utility(learner_class(s, universe, guard, workers), m) for s in strategies])
    return PayoffMatrix(tuple(names), u[:, None] - u[None, :])


def ess_verdict(matrix: PayoffMatrix, i: int) -> EssVerdict:
    n = len(matrix)
    if not 0 <= i < n:
        raise IndexError(f"strategy index {i} out of range 0..{n - 1}")
    E = matrix.entries
    others = [j for j in range(n) if j != i]
    if all(E[i][i] > E[j][i] for j in others):
        return EssVerdict.STRICT_NASH
    if all(E[i][i] == E[j][i] and E[i][j] > E[j][j] for j in others):
        return EssVerdict.MAYNARD_SMITH
    return EssVerdict.NOT_ESS


def superset_implies_ess(strategies: Sequence[LearnerSpec], e_index: int, universe: StringUniverse,
                         m: UtilityMeasure, guard: int = DEFAULT_GUARD, workers: int = DEFAULT_WORKERS) -> bool:
    """Whether S_e's class strictly contains every other class.

    When it does, E[e][k] = 𝒰(C(S_e) \\ C(S_k)) > 0 and S_e is a strict
    Nash equilibrium; failure of either is an InvariantViolation.
    """
    classes = [learner_class(s, universe, guard, workers) for s in strategies]
    top = classes[e_index]
    others = [k for k in range(len(strategies)) if k != e_index]
    if not all(classes[k] < top for k in others):
        return False

    matrix = payoff_matrix(strategies, universe, m, guard, workers)
    for k in others:
        gain = utility(top - classes[k], m)
        if not gain > 0 or not math.isclose(matrix.entries[e_index][k], gain, rel_tol=1e-12, abs_tol=1e-12):
            raise InvariantViolation(
                f"E[{strategies[e_index].name}][{strategies[k].name}] = {matrix.entries[e_index][k]}, "
                f"expected 𝒰 of the class difference = {gain}"
            )
    verdict = ess_verdict(matrix, e_index)
    if verdict is not EssVerdict.STRICT_NASH:
        raise InvariantViolation(f"{strategies[e_index].name} has a superset class but verdict {verdict.value}")
    return True


# ---------------------------------------------------------------------------
# Replicator dynamics
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Population:
    shares: Mapping[str, float]
    generation: int = 0

    def __post_init__(self):
        shares = {k: float(v) for k, v in dict(self.shares).items()}
        if any(v < 0 for v in shares.values()):
            raise PopulationError(f"negative share in {shares}")
        total = math.fsum(shares.values())
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise PopulationError(f"shares sum to {total!r}, not 1")
        object.__setattr__(self, "shares", MappingProxyType(shares))

    def share(self, strategy: str) -> float:
        return self.shares.get(strategy, 0.0)

    def to_dict(self) -> dict:
        return {"generation": self.generation, "shares": dict(self.shares)}


def _as_vector(matrix: PayoffMatrix, pop: Population) -> np.ndarray:
    unknown = set(pop.shares) - set(matrix.strategies)
    if unknown:
        raise PopulationError(f"shares name strategies outside the matrix: {sorted(unknown)}")
    return np.array([pop.share(s) for s in matrix.strategies])


def replicate(matrix: PayoffMatrix, pop0: Population, generations: int) -> list[Population]:
    """Trajectory of `generations` discrete replicator updates, pop0 included.

    x_i' = x_i (K + f_i) / (K + f̄) with f = E x and K = 1 + max|E|, so every
    factor is positive; each state is renormalised onto the simplex.
    """
    if generations < 0:
        raise ValueError(f"generations must be >= 0 (got {generations})")
    E = matrix.entries
    K = 1.0 + float(np.max(np.abs(E)))
    x = _as_vector(matrix, pop0)

    trajectory = [Population(dict(zip(matrix.strategies, x.tolist())), 0)]
    for gen in range(1, generations + 1):
        fitness = E @ x
        mean = float(x @ fitness)
        x = x * (K + fitness) / (K + mean)
        x = x / x.sum()
        trajectory.append(Population(dict(zip(matrix.strategies, x.tolist())), gen))

    log.info("Replicator: %d generation(s), final %s", generations,
             {s: round(v, 6) for s, v in trajectory[-1].shares.items()})
    return trajectory


def trajectory_frame(trajectory: Sequence[Population], strategies: Sequence[str]) -> pd.DataFrame:
    """One row per generation, one column per strategy."""
    rows = [{"generation": p.generation, **{s: p.share(s) for s in strategies}} for p in trajectory]
    return pd.DataFrame(rows, columns=["generation", *strategies])


# ---------------------------------------------------------------------------
# Parallel dominance
# ---------------------------------------------------------------------------

def parallel_dominance(tables, universe: StringUniverse, m: UtilityMeasure, guard: int = DEFAULT_GUARD,
                       workers: int = DEFAULT_WORKERS) -> dict:
    """Par{tables} against every tandem ordering of the same tables."""
    tables = tuple(tables)
    par = LearnerSpec(tables, Mode.PARALLEL, guard)
    seqs = [LearnerSpec(order, Mode.SEQUENTIAL, guard) for order in itertools.permutations(tables)]
    strategies = [par, *seqs]
    matrix = payoff_matrix(strategies, universe, m, guard, workers)

    union = union_class(tables, universe, guard, workers)
    complete = [s.name for s in seqs if learner_class(s, universe, guard, workers) == union]
    return {
        "strategies": list(matrix.strategies),
        "matrix": matrix.to_list(),
        "complete_tandem_orders": complete,
        "complete_tandem_exists": bool(complete),
        "parallel_verdict": ess_verdict(matrix, 0).value,
    }


# ---------------------------------------------------------------------------
# CLI interface
# ---------------------------------------------------------------------------

if __name__ == "__main__":
    import argparse

    from tm_engine import load_rule_table

    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")

    parser = argparse.ArgumentParser(description="Par vs every tandem ordering")
    parser.add_argument("rule_files", nargs="+")
    parser.add_argument("--max-len", type=int, default=3)
    parser.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    args = parser.parse_args()

    tables = [load_rule_table(p) for p in args.rule_files]
    universe = StringUniverse(tables[0].alphabet, args.max_len)
    print(json.dumps(parallel_dominance(tables, universe, UtilityMeasure.counting(universe), args.guard), indent=2))
