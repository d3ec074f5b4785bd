#!/usr/bin/env python3
"""
Tests for the experiment harness: every subcommand through main(argv),
exit statuses, report contents and byte-level determinism.
"""

import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

from experiment_cli import (
    EXIT_OK,
    EXIT_REJECTED,
    EXIT_STUCK,
    EXIT_UNKNOWN,
    EXIT_USAGE,
    EXIT_VIOLATION,
    UsageError,
    list_rules,
    main,
    resolve_rule,
)
from reports import REPORT_MODELS, CompareReport

DATA = Path(__file__).parent.parent / "data"
RULES = DATA / "rules"
HISTORIES = DATA / "histories"

HEADER = """name: {name}
alphabet: a b
blank: _
start: q0
accept: acc
reject: rej
"""


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def invoke_json(capsys, *argv):
    code, out = invoke(capsys, *argv)
    return code, json.loads(out) if out else None


@pytest.fixture
def walker(tmp_path):
    path = tmp_path / "walker.tm"
    path.write_text(HEADER.format(name="W") + "q0 a -> q0 a R\nq0 _ -> acc _ S\n")
    return path


@pytest.fixture
def space_pair(tmp_path):
    """T1 rejects aaa after a long walk; T2 accepts at once. Sequential space outgrows parallel."""
    t1 = tmp_path / "T1.tm"
    t1.write_text(HEADER.format(name="T1") + "q0 a -> q1 a R\nq1 a -> q2 a R\nq2 a -> q3 a R\n")
    t2 = tmp_path / "T2.tm"
    t2.write_text(HEADER.format(name="T2") + "q0 a -> acc a S\n")
    return t1, t2


# ==========================================================================
# Rule resolution
# ==========================================================================


class TestResolveRule:

    def test_stem(self):
        assert resolve_rule("RA", RULES) == (RULES / "RA.tm").resolve()

    def test_table_name(self):
        assert resolve_rule("R_EPS", RULES) == (RULES / "REPS.tm").resolve()

    def test_path(self):
        assert resolve_rule(str(RULES / "RB.tm"), RULES) == (RULES / "RB.tm").resolve()

    def test_missing(self):
        with pytest.raises(FileNotFoundError):
            resolve_rule("R_Z", RULES)

    def test_empty(self):
        with pytest.raises(UsageError):
            resolve_rule(" ", RULES)

    def test_list_rules(self):
        names = [r["name"] for r in list_rules(RULES)]
        assert names == ["R_A", "R_AA", "R_B", "R_EPS"]


# ==========================================================================
# run
# ==========================================================================


class TestRunCommand:

    def test_parallel_accept(self, capsys):
        code, report = invoke_json(capsys, "run", "--mode", "par", "--rules", "RA,RB", "--input", "aa", "--budget", "100")
        assert code == EXIT_OK
        assert report["command"] == "run"
        assert report["learner"] == "par{R_A,R_B}"
        assert (report["outcome"], report["accepted_by"]) == ("accepted", "R_A")
        assert (report["time"], report["space"], report["storage"]) == (1, 3, 10)
        assert report["per_table"][1] == {"table": "R_B", "outcome": "working", "steps": 1, "space": 2, "lane": 1}

    def test_sequential_stuck(self, capsys):
        code, report = invoke_json(capsys, "run", "--mode", "seq", "--order", "RB,RA", "--input", "aa", "--budget", "100")
        assert code == EXIT_STUCK
        assert (report["outcome"], report["time"], report["space"]) == ("stuck", 100, 101)

    def test_sequential_accept(self, capsys):
        code, report = invoke_json(capsys, "run", "--mode", "seq", "--rules", "R_A,R_B", "--input", "ba")
        assert code == EXIT_OK
        assert (report["accepted_by"], report["time"], report["space"]) == ("R_B", 2, 1)

    def test_rejected(self, capsys):
        code, report = invoke_json(capsys, "run", "--rules", "RA,REPS", "--input", "bb")
        assert code == EXIT_REJECTED
        assert (report["time"], report["space"]) == (1, 2)

    def test_hybrid(self, capsys):
        code, report = invoke_json(capsys, "run", "--mode", "hybrid", "--rules", "RA,REPS,RB", "--input", "")
        assert code == EXIT_OK
        assert report["plan"]["lanes"] == [["R_A", "R_EPS"], ["R_B"]]
        assert (report["accepted_by"], report["time"], report["space"]) == ("R_EPS", 2, 2)

    def test_threads_engine(self, capsys):
        _, lockstep = invoke(capsys, "run", "--rules", "RA,RB", "--input", "ab")
        _, threads = invoke(capsys, "run", "--rules", "RA,RB", "--input", "ab", "--engine", "threads")
        assert lockstep == threads

    def test_csv(self, capsys):
        code, out = invoke(capsys, "run", "--rules", "RA,RB", "--input", "ba", "--format", "csv")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == "table,outcome,steps,space,lane"
        assert len(lines) == 3

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "run.json"
        code, out = invoke(capsys, "run", "--rules", "RA", "--input", "a", "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert json.loads(target.read_text())["outcome"] == "accepted"


class TestUsageErrors:

    @pytest.mark.parametrize("argv", [
        ["run"],
        ["run", "--rules", "R_Z"],
        ["run", "--rules", "RA", "--input", "abc"],
        ["run", "--rules", "RA", "--budget", "0"],
        ["run", "--rules", "RA", "--mode", "swarm"],
        ["run", "--rules", "RA,RB", "--order", "RA"],
        ["run", "--rules", "RA", "--format", "xml"],
        ["run", "--rules", "RA", "--measure", "nowhere.json"],
        ["run", "--rules", "RA", "--bogus"],
        ["teach", "--rules", "RA"],
    ])
    def test_exit_64(self, capsys, argv):
        assert main(argv) == EXIT_USAGE

    def test_parse_error(self, caplog, tmp_path):
        bad = tmp_path / "bad.tm"
        bad.write_text(HEADER.format(name="X") + "q0 a -> acc a S\nq0 a -> rej a S\n")
        assert main(["run", "--rules", str(bad), "--input", "a"]) == EXIT_USAGE
        assert "bad.tm:8" in caplog.text


# ==========================================================================
# enumerate
# ==========================================================================


class TestEnumerateCommand:

    def test_sequential_order_matters(self, capsys):
        code, report = invoke_json(capsys, "enumerate", "--mode", "seq", "--order", "RB,RA")
        assert code == EXIT_OK
        assert report["universe"] == {"alphabet": ["a", "b"], "max_len": 3, "size": 15}
        assert report["learner_class"]["size"] == 7
        assert report["union"]["size"] == 14
        assert report["paper_sequential_class"]["size"] == 7
        assert report["complete"] is False

    def test_parallel_complete(self, capsys):
        code, report = invoke_json(capsys, "enumerate", "--rules", "RA,RB")
        assert report["learner_class"]["size"] == 14
        assert report["complete"] is True
        assert report["paper_sequential_class"] is None
        hang = {h["name"]: h["members"] for h in report["hang_sets"]}
        assert hang["R_B"] == ["a", "aa", "ab", "aaa", "aab", "aba", "abb"]

    def test_hybrid(self, capsys):
        _, report = invoke_json(capsys, "enumerate", "--mode", "hybrid", "--rules", "RA,RB,REPS")
        assert report["learner_class"]["size"] == 15
        assert report["plan"]["acyclic"] is True

    def test_max_len_and_alphabet(self, capsys):
        _, report = invoke_json(capsys, "enumerate", "--rules", "RA", "--max-len", "1", "--alphabet", "ab")
        assert report["universe"]["size"] == 3
        assert report["learner_class"]["members"] == ["a"]

    def test_oracle_unknown(self, caplog, walker):
        code = main(["enumerate", "--rules", str(walker), "--guard", "2"])
        assert code == EXIT_UNKNOWN
        assert "table W, string 'aa'" in caplog.text

    def test_deterministic(self, capsys):
        _, first = invoke(capsys, "enumerate", "--mode", "seq", "--rules", "RA,RB,REPS", "--workers", "1")
        _, second = invoke(capsys, "enumerate", "--mode", "seq", "--rules", "RA,RB,REPS", "--workers", "3")
        assert first == second


# ==========================================================================
# compare
# ==========================================================================


class TestCompareCommand:

    def test_fixture_pair(self, capsys):
        code, report = invoke_json(capsys, "compare", "--order", "RA,RB")
        assert code == EXIT_OK
        assert report["ok"] is True
        assert len(report["rows"]) == 14
        row = {r["input"]: r for r in report["rows"]}["ba"]
        assert (row["t_s"], row["t_p"], row["t_rejects"], row["t_a"]) == (2, 1, 1, 1)
        assert (row["s_s"], row["s_p"]) == (1, 2)
        assert row["sigma_s"] == row["sigma_p"] == 10

    def test_space_violation_exits_70(self, capsys, space_pair):
        t1, t2 = space_pair
        code, report = invoke_json(capsys, "compare", "--order", f"{t1},{t2}")
        assert code == EXIT_VIOLATION
        row = {r["input"]: r for r in report["rows"]}["aaa"]
        assert (row["s_s"], row["s_p"]) == (4, 3)
        assert row["violations"] == ["s_s > s_p"]
        assert row["s_bound_applies"] is False

    def test_csv(self, capsys):
        _, out = invoke(capsys, "compare", "--order", "RA,RB", "--format", "csv")
        header = out.splitlines()[0]
        assert header.startswith("input,accepted_by_seq,accepted_by_par,t_s,t_p")


# ==========================================================================
# evolve
# ==========================================================================


class TestEvolveCommand:

    def test_parallel_takes_over(self, capsys):
        code, report = invoke_json(
            capsys, "evolve", "--mode", "par,seq", "--order", "RB,RA", "--shares", "0.1,0.9", "--generations", "200",
        )
        assert code == EXIT_OK
        assert report["strategies"] == ["par{R_B,R_A}", "seq[R_B,R_A]"]
        assert report["matrix"] == [[0.0, 7.0], [-7.0, 0.0]]
        assert report["verdicts"] == {"par{R_B,R_A}": "strict_nash", "seq[R_B,R_A]": "not_ess"}
        assert report["final"]["par{R_B,R_A}"] > 0.99
        assert len(report["trajectory"]) == 201

    def test_weighted_measure(self, capsys):
        code, report = invoke_json(
            capsys, "evolve", "--mode", "par,seq", "--order", "RA,RB",
            "--measure", str(DATA / "measures" / "prefer_b.json"), "--generations", "5",
        )
        assert code == EXIT_OK
        assert report["measure"] == "prefer_b"
        assert report["matrix"] == [[0.0, 0.0], [0.0, 0.0]]
        assert report["shares0"] == {"par{R_A,R_B}": 0.5, "seq[R_A,R_B]": 0.5}

    def test_share_count_mismatch(self, capsys):
        assert main(["evolve", "--mode", "par,seq", "--order", "RB,RA", "--shares", "1.0"]) == EXIT_USAGE

    def test_shares_off_simplex(self, capsys):
        assert main(["evolve", "--mode", "par,seq", "--order", "RB,RA", "--shares", "0.5,0.6"]) == EXIT_USAGE

    def test_csv_trajectory(self, capsys):
        _, out = invoke(capsys, "evolve", "--order", "RB,RA", "--generations", "2", "--format", "csv")
        lines = out.strip().splitlines()
        assert lines[0] == 'generation,"par{R_B,R_A}","seq[R_B,R_A]"'
        assert len(lines) == 4

    def test_csv_matrix_next_to_out(self, tmp_path):
        out = tmp_path / "evolve.csv"
        code = main(["evolve", "--order", "RB,RA", "--generations", "2", "--format", "csv", "--out", str(out)])
        assert code == EXIT_OK
        assert len(out.read_text().splitlines()) == 4
        lines = (tmp_path / "evolve_matrix.csv").read_text().splitlines()
        assert lines == [
            'strategy,"par{R_B,R_A}","seq[R_B,R_A]"',
            '"par{R_B,R_A}",0.0,7.0',
            '"seq[R_B,R_A]",-7.0,0.0',
        ]

    def test_matrix_out_with_json(self, capsys, tmp_path):
        matrix = tmp_path / "payoffs.csv"
        code, report = invoke_json(
            capsys, "evolve", "--order", "RB,RA", "--generations", "1", "--matrix-out", str(matrix),
        )
        assert code == EXIT_OK
        assert report["command"] == "evolve"
        assert len(matrix.read_text().splitlines()) == 3


# ==========================================================================
# report
# ==========================================================================


class TestReportCommand:

    def test_fixture_battery(self, capsys):
        code, report = invoke_json(
            capsys, "report", "--rules", "RA,RB,REPS", "--max-len", "2", "--guard", "200",
            "--history", str(HISTORIES / "parallel_growth.manifest"),
            "--history", str(HISTORIES / "sequential_shrink.manifest"),
        )
        assert code == EXIT_OK
        assert report["ok"] is True
        checks = {(c["check"], c["table_set"]): c for c in report["checks"]}
        assert ("union", "R_A,R_B,R_EPS") in checks
        assert checks[("history_filtration", "sequential_shrink.manifest")]["detail"]["is_filtration"] is False
        assert checks[("history_filtration", "parallel_growth.manifest")]["detail"]["is_filtration"] is True

    def test_random_sets(self, capsys):
        code, report = invoke_json(
            capsys, "report", "--rules", "RA,RB", "--max-len", "2", "--guard", "200", "--random-sets", "3", "--seed", "7",
        )
        assert code == EXIT_OK, [c for c in report["checks"] if not c["ok"]]
        assert report["random_sets"] == 3
        assert report["violations"] == 0
        assert len({c["table_set"] for c in report["checks"]}) == 4

    def test_hundred_random_sets(self, capsys):
        code, report = invoke_json(
            capsys, "report", "--rules", "RA,RB,REPS", "--random-sets", "100", "--seed", "1",
            "--max-len", "3", "--guard", "1000",
        )
        assert code == EXIT_OK, [c for c in report["checks"] if not c["ok"]]
        assert report["random_sets"] == 100
        assert report["violations"] == 0
        assert len({c["table_set"] for c in report["checks"]}) == 101

    def test_seed_reproduces_report(self, capsys):
        argv = ["report", "--rules", "RA", "--max-len", "2", "--guard", "200", "--random-sets", "2", "--seed", "3"]
        _, first = invoke(capsys, *argv)
        _, second = invoke(capsys, *argv)
        assert first == second

    def test_csv(self, capsys):
        _, out = invoke(capsys, "report", "--rules", "RA,RB", "--max-len", "2", "--format", "csv")
        assert out.splitlines()[0] == "check,table_set,ok"


# ==========================================================================
# Report schema
# ==========================================================================


REPORT_ARGV = {
    "run": ["run", "--mode", "par", "--rules", "RA,RB", "--input", "aa", "--budget", "100"],
    "enumerate": ["enumerate", "--mode", "hybrid", "--rules", "RA,RB,REPS", "--max-len", "2"],
    "compare": ["compare", "--order", "RA,RB", "--max-len", "2"],
    "evolve": ["evolve", "--order", "RB,RA", "--generations", "3"],
    "report": ["report", "--rules", "RA,RB", "--max-len", "2", "--guard", "200"],
}


class TestReportSchema:
    """Every command's JSON output validates against its report model."""

    @pytest.mark.parametrize("command", sorted(REPORT_ARGV))
    def test_output_validates(self, capsys, command):
        _, out = invoke(capsys, *REPORT_ARGV[command])
        report = REPORT_MODELS[command].model_validate_json(out)
        assert report.command == command
        assert json.loads(report.model_dump_json()) == json.loads(out)

    def test_schema_command(self, capsys):
        code, schemas = invoke_json(capsys, "schema")
        assert code == EXIT_OK
        assert set(schemas) == set(REPORT_ARGV)
        assert schemas["compare"] == CompareReport.model_json_schema()

    def test_schema_subset(self, capsys):
        _, schemas = invoke_json(capsys, "schema", "--report", "run,evolve")
        assert set(schemas) == {"run", "evolve"}

    def test_schema_unknown_command(self, capsys):
        assert main(["schema", "--report", "bogus"]) == EXIT_USAGE
