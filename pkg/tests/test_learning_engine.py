#!/usr/bin/env python3
"""
Tests for the learning process engine: growth-only histories, learned
sets, the filtration property and history manifests.
"""

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

from learner_engine import AlphabetMismatchError, Mode
from learning_engine import (
    HistoryError,
    Snapshot,
    SystemHistory,
    add_rule,
    is_filtration,
    learned_set,
    learning_condition,
    learning_occurred,
    load_history,
    snapshot_class,
    snapshot_spec,
)
from oracle_engine import StringUniverse
from table_generator import random_table_set
from tm_engine import load_rule_table, parse_rule_table

DATA = Path(__file__).parent.parent / "data"
RULES = DATA / "rules"
R_A = load_rule_table(RULES / "RA.tm")
R_AA = load_rule_table(RULES / "RAA.tm")
R_B = load_rule_table(RULES / "RB.tm")
R_EPS = load_rule_table(RULES / "REPS.tm")

U3 = StringUniverse(("a", "b"), 3)
U2 = StringUniverse(("a", "b"), 2)
GUARD = 200

B_PREFIXED = ["b", "ba", "bb", "baa", "bab", "bba", "bbb"]


# ==========================================================================
# add_rule and the growth axiom
# ==========================================================================


class TestAddRule:

    def test_from_empty(self):
        h = add_rule(SystemHistory.start((), U3), R_A)
        assert len(h) == 2
        assert h.snapshot(0).tables == ()
        assert h.last.names() == ["R_A"]
        assert len(snapshot_class(h, 0, GUARD)) == 0

    def test_appends_by_default(self):
        h = add_rule(SystemHistory.start((R_A,), U3, "seq"), R_B)
        assert h.last.names() == ["R_A", "R_B"]
        assert h.last.mode is Mode.SEQUENTIAL

    def test_position(self):
        h = add_rule(SystemHistory.start((R_A,), U3, "seq"), R_B, position=0)
        assert h.last.names() == ["R_B", "R_A"]

    def test_mode_change(self):
        h = add_rule(SystemHistory.start((R_A,), U3, "seq"), R_B, mode="par")
        assert h.snapshot(0).mode is Mode.SEQUENTIAL
        assert h.last.mode is Mode.PARALLEL

    def test_readding_is_a_no_op_step(self):
        h = add_rule(SystemHistory.start((R_A,), U3), R_A)
        assert h.last.t == 1
        assert h.last.tables == h.snapshot(0).tables
        assert not learning_occurred(h, 0, 1, GUARD)

    def test_no_edits_under_same_name(self):
        edited = parse_rule_table(R_A.to_source().replace("q0 b -> rej b S", "q0 b -> acc b S"))
        with pytest.raises(HistoryError, match="never edited"):
            add_rule(SystemHistory.start((R_A,), U3), edited)

    def test_alphabet_mismatch(self):
        other = parse_rule_table(
            R_EPS.to_source().replace("alphabet: a b", "alphabet: a c").replace("q0 b -> rej b S", "q0 c -> rej c S")
        )
        with pytest.raises(AlphabetMismatchError):
            add_rule(SystemHistory.start((R_A,), U3), other)

    def test_original_history_unchanged(self):
        h0 = SystemHistory.start((R_A,), U3)
        add_rule(h0, R_B)
        assert len(h0) == 1


class TestGrowthAxiom:

    def test_removal(self):
        with pytest.raises(HistoryError, match="removes"):
            SystemHistory((Snapshot(0, (R_A, R_B), Mode.PARALLEL), Snapshot(1, (R_A,), Mode.PARALLEL)), U3)

    def test_reorder(self):
        with pytest.raises(HistoryError):
            SystemHistory((Snapshot(0, (R_A, R_B), Mode.SEQUENTIAL), Snapshot(1, (R_B, R_A), Mode.SEQUENTIAL)), U3)

    def test_two_additions(self):
        with pytest.raises(HistoryError, match="only one"):
            SystemHistory((Snapshot(0, (R_A,), Mode.PARALLEL), Snapshot(1, (R_A, R_B, R_EPS), Mode.PARALLEL)), U3)

    def test_gap_in_time(self):
        with pytest.raises(HistoryError, match="does not follow"):
            SystemHistory((Snapshot(0, (R_A,), Mode.PARALLEL), Snapshot(2, (R_A, R_B), Mode.PARALLEL)), U3)

    def test_empty_history(self):
        with pytest.raises(HistoryError):
            SystemHistory((), U3)

    def test_snapshot_out_of_range(self):
        with pytest.raises(HistoryError, match="out of range"):
            SystemHistory.start((R_A,), U3).snapshot(3)


# ==========================================================================
# Learned sets
# ==========================================================================


class TestLearning:

    @pytest.fixture
    def growth(self):
        return load_history(DATA / "histories" / "parallel_growth.manifest")

    @pytest.fixture
    def shrink(self):
        return load_history(DATA / "histories" / "sequential_shrink.manifest")

    def test_parallel_growth_classes(self, growth):
        sizes = [len(snapshot_class(growth, t, GUARD)) for t in range(len(growth))]
        assert sizes == [7, 8, 15]

    def test_learned_set(self, growth):
        assert learned_set(growth, 0, 1, GUARD).to_list() == [""]
        assert learned_set(growth, 1, 2, GUARD).to_list() == B_PREFIXED
        assert learned_set(growth, 0, 2, GUARD).to_list() == ["", *B_PREFIXED]
        assert len(learned_set(growth, 1, 1, GUARD)) == 0

    def test_parallel_growth_is_filtration(self, growth):
        assert is_filtration(growth, GUARD)
        assert learning_occurred(growth, 0, 2, GUARD)
        assert learning_condition(growth, 0, GUARD)
        assert learning_condition(growth, 1, GUARD)

    def test_interval_order(self, growth):
        with pytest.raises(HistoryError):
            learned_set(growth, 2, 1, GUARD)

    def test_sequential_shrink(self, shrink):
        assert snapshot_class(shrink, 0, GUARD).to_list() == ["a", "aa", "ab", "aaa", "aab", "aba", "abb"]
        assert snapshot_class(shrink, 1, GUARD).to_list() == B_PREFIXED
        assert not is_filtration(shrink, GUARD)
        assert not learning_occurred(shrink, 0, 1, GUARD)
        assert learned_set(shrink, 0, 1, GUARD).to_list() == B_PREFIXED
        # the added table brings new strings, yet the tandem learner loses others
        assert learning_condition(shrink, 0, GUARD)

    def test_redundant_rule_teaches_nothing(self):
        h = add_rule(SystemHistory.start((R_A,), U3), R_AA)
        assert not learning_condition(h, 0, GUARD)
        assert not learning_occurred(h, 0, 1, GUARD)
        assert is_filtration(h, GUARD)

    def test_hybrid_snapshot(self):
        h = add_rule(SystemHistory.start((R_B,), U3, "hybrid"), R_A)
        spec = snapshot_spec(h, 1, GUARD)
        assert spec.plan.lane_names() == [["R_B"], ["R_A"]]
        assert len(snapshot_class(h, 1, GUARD)) == 14
        assert is_filtration(h, GUARD)

    @pytest.mark.parametrize("seed", range(10))
    def test_parallel_histories_are_filtrations(self, seed):
        tables = random_table_set(random.Random(seed), U2, GUARD)
        h = SystemHistory.start((), U2)
        for table in tables:
            h = add_rule(h, table)
        assert is_filtration(h, GUARD)
        for n in range(len(h) - 1):
            assert learning_occurred(h, n, n + 1, GUARD) == learning_condition(h, n, GUARD)


# ==========================================================================
# Manifests
# ==========================================================================


class TestManifest:

    def test_load(self):
        h = load_history(DATA / "histories" / "parallel_growth.manifest")
        assert [s.names() for s in h.snapshots] == [["R_A"], ["R_A", "R_EPS"], ["R_A", "R_EPS", "R_B"]]
        assert h.universe == U3

    def test_explicit_universe(self):
        h = load_history(DATA / "histories" / "parallel_growth.manifest", U2)
        assert h.universe == U2

    def test_bad_line(self, tmp_path):
        path = tmp_path / "bad.manifest"
        path.write_text("t0 tables=x.tm\n")
        with pytest.raises(HistoryError, match="bad.manifest:1"):
            load_history(path)

    def test_unknown_mode(self, tmp_path):
        path = tmp_path / "bad.manifest"
        path.write_text(f"t0 mode=swarm tables={RULES / 'RA.tm'}\n")
        with pytest.raises(HistoryError, match="unknown mode"):
            load_history(path)

    def test_must_start_at_t0(self, tmp_path):
        path = tmp_path / "late.manifest"
        path.write_text(f"t1 mode=par tables={RULES / 'RA.tm'}\n")
        with pytest.raises(HistoryError, match="t0"):
            load_history(path)

    def test_growth_checked_on_load(self, tmp_path):
        ra, rb = RULES / "RA.tm", RULES / "RB.tm"
        path = tmp_path / "drop.manifest"
        path.write_text(f"t0 mode=par tables={ra},{rb}\nt1 mode=par tables={ra}\n")
        with pytest.raises(HistoryError):
            load_history(path)

    def test_missing_table_file(self, tmp_path):
        path = tmp_path / "missing.manifest"
        path.write_text("t0 mode=par tables=nowhere.tm\n")
        with pytest.raises(FileNotFoundError):
            load_history(path)
