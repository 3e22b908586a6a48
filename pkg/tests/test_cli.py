import json
import os

import pytest
from click.testing import CliRunner

from suql.cli import main


DDL = """
CREATE TABLE places (
    name TEXT,
    price ENUM('cheap', 'expensive'),
    reviews FREE_TEXT[]
);
"""

ROWS = [
    {"name": "Alpha", "price": "cheap", "reviews": ["quiet spot with easy parking"]},
    {"name": "Beta", "price": "expensive", "reviews": ["loud music all night"]},
    {"name": "Gamma", "price": "cheap", "reviews": []},
]

RULES = [
    {"doc_pattern": "quiet", "question_pattern": "quiet", "response": "Yes"},
    {"doc_pattern": ".", "question_pattern": "quiet", "response": "No"},
]


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def workdir(tmp_path):
    schema = tmp_path / "schema.sql"
    schema.write_text(DDL)
    data = tmp_path / "places.jsonl"
    data.write_text("\n".join(json.dumps(r) for r in ROWS) + "\n")
    rules = tmp_path / "rules.json"
    rules.write_text(json.dumps(RULES))
    return tmp_path


def ingest(runner, workdir, out="db"):
    out_dir = str(workdir / out)
    result = runner.invoke(
        main,
        [
            "ingest", str(workdir / "schema.sql"), str(workdir / "places.jsonl"),
            "--out", out_dir, "--rules", str(workdir / "rules.json"),
        ],
    )
    return result, out_dir


class TestIngest:
    def test_success_writes_database(self, runner, workdir):
        result, out_dir = ingest(runner, workdir)
        assert result.exit_code == 0, result.output
        assert os.path.exists(os.path.join(out_dir, "schema.json"))
        assert os.path.exists(os.path.join(out_dir, "places.jsonl"))
        assert os.path.exists(os.path.join(out_dir, "rules.json"))
        assert any(f.endswith(".idx") for f in os.listdir(out_dir))

    def test_reingest_is_byte_identical(self, runner, workdir):
        _, first = ingest(runner, workdir, "db1")
        _, second = ingest(runner, workdir, "db2")
        for fname in sorted(os.listdir(first)):
            a = open(os.path.join(first, fname), "rb").read()
            b = open(os.path.join(second, fname), "rb").read()
            assert a == b, fname

    def test_missing_schema_exit_1_and_cleanup(self, runner, workdir):
        out_dir = str(workdir / "broken")
        result = runner.invoke(
            main,
            ["ingest", str(workdir / "nope.sql"), str(workdir / "places.jsonl"),
             "--out", out_dir],
        )
        assert result.exit_code == 1
        assert not os.path.exists(out_dir)

    def test_bad_data_exit_1(self, runner, workdir):
        bad = workdir / "places.jsonl"
        bad.write_text("not json\n")
        result, out_dir = ingest(runner, workdir)
        assert result.exit_code == 1
        assert not os.path.exists(out_dir)


class TestQuery:
    def test_basic_query_output(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(
            main, ["query", db, "SELECT name FROM places WHERE price = 'cheap'"]
        )
        assert result.exit_code == 0, result.output
        assert "Alpha" in result.output and "Gamma" in result.output
        assert "Beta" not in result.output

    def test_answer_filter_uses_bundled_rules(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(
            main,
            ["query", db, "SELECT name FROM places WHERE answer(reviews, 'is it quiet?') = 'Yes'"],
        )
        assert result.exit_code == 0, result.output
        assert "Alpha" in result.output
        assert "Beta" not in result.output

    def test_explain_flag(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(
            main,
            ["query", db, "--explain",
             "SELECT name FROM places WHERE answer(reviews, 'is it quiet?') = 'Yes'"],
        )
        assert "SCAN places" in result.output
        assert "RETRIEVAL PRUNE" in result.output

    def test_exact_mode_disables_pruning(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(
            main,
            ["query", db, "--explain", "--mode", "exact",
             "SELECT name FROM places WHERE answer(reviews, 'is it quiet?') = 'Yes'"],
        )
        assert "RETRIEVAL PRUNE" not in result.output

    def test_syntax_error_exit_2(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(main, ["query", db, "SELEC name"])
        assert result.exit_code == 2

    def test_bind_error_exit_2(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(main, ["query", db, "SELECT nope FROM places"])
        assert result.exit_code == 2

    def test_missing_db_dir_fails(self, runner, workdir):
        result = runner.invoke(main, ["query", str(workdir / "nope"), "SELECT 1"])
        assert result.exit_code != 0


class TestEval:
    def write_examples(self, workdir, examples, name="qs.json"):
        path = workdir / name
        path.write_text(json.dumps(examples))
        return str(path)

    def test_clean_batch_exit_0(self, runner, workdir):
        _, db = ingest(runner, workdir)
        questions = self.write_examples(
            workdir,
            [
                {"example_id": "e1", "question": "cheapest?", "gold": "Alpha",
                 "suql": "SELECT name FROM places WHERE price = 'cheap' LIMIT 1;"},
            ],
        )
        out = str(workdir / "report")
        result = runner.invoke(main, ["eval", db, questions, "--out", out])
        assert result.exit_code == 0, result.output
        report = json.loads(open(out + ".json").read())
        assert report["summary"]["em"] == 1.0
        assert os.path.exists(out + ".csv")
        assert '"em": 1.0' in result.output or '"em": 1' in result.output

    def test_crashing_example_exit_2(self, runner, workdir):
        _, db = ingest(runner, workdir)
        questions = self.write_examples(
            workdir,
            [{"example_id": "e1", "question": "q", "gold": "g", "suql": "SELEC"}],
        )
        out = str(workdir / "report")
        result = runner.invoke(main, ["eval", db, questions, "--out", out])
        assert result.exit_code == 2
        # the report is still written for inspection
        assert os.path.exists(out + ".json")

    def test_jsonl_examples_accepted(self, runner, workdir):
        _, db = ingest(runner, workdir)
        path = workdir / "qs.jsonl"
        path.write_text(
            json.dumps(
                {"example_id": "e1", "question": "q", "gold": "Alpha",
                 "suql": "SELECT name FROM places LIMIT 1;"}
            )
            + "\n"
        )
        out = str(workdir / "report")
        result = runner.invoke(main, ["eval", db, str(path), "--out", out])
        assert result.exit_code == 0, result.output

    def test_bad_questions_file_exit_1(self, runner, workdir):
        _, db = ingest(runner, workdir)
        path = workdir / "qs.json"
        path.write_text("[{}]")
        result = runner.invoke(main, ["eval", db, str(path)])
        assert result.exit_code == 1


class TestRepl:
    def test_repl_runs_query_and_quits(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(
            main, ["repl", db], input="SELECT name FROM places LIMIT 1\n\\q\n"
        )
        assert result.exit_code == 0
        assert "Alpha" in result.output

    def test_repl_explain_toggle(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(
            main, ["repl", db], input="\\e\nSELECT name FROM places\n\\q\n"
        )
        assert "explain on" in result.output
        assert "SCAN places" in result.output

    def test_repl_survives_errors(self, runner, workdir):
        _, db = ingest(runner, workdir)
        result = runner.invoke(
            main, ["repl", db], input="SELEC\nSELECT name FROM places LIMIT 1\n\\q\n"
        )
        assert result.exit_code == 0
        assert "Alpha" in result.output
