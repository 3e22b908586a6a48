"""Operator CLI: database build, ad-hoc queries, REPL, batch eval, service.

Exit codes: 0 success, 1 data/environment error, 2 query error.
"""

from __future__ import annotations

import json
import os
import shutil
import sys
from typing import Optional

import click

from .agent import HttpAgentBackend, MockAgentBackend
from .binder import BindError, bind
from .catalog import Catalog, CatalogError, LoadError, load_csv, load_jsonl, parse_ddl
from .config import EngineConfig
from .executor import ExecError, QueryRuntime, run_query
from .lexer import SuqlSyntaxError
from .metrics import EvalExample, run_batch
from .parser import parse
from .planner import explain
from .retrieval import IndexSet
from .runtime import CachedAnswerer, HttpAnswerer, MockAnswerer, MockRule
from .types import render_value

DATA_ERROR = 1
QUERY_ERROR = 2


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_rules(path: Optional[str]) -> list[MockRule]:
    if not path or not os.path.exists(path):
        return []
    with open(path, encoding="utf-8") as fh:
        return [
            MockRule(r["doc_pattern"], r["question_pattern"], r["response"])
            for r in json.load(fh)
        ]


def _load_classify(path: Optional[str]) -> dict:
    if not path or not os.path.exists(path):
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _make_runtime(db_dir: str, config: EngineConfig) -> tuple[Catalog, QueryRuntime]:
    try:
        catalog = Catalog.load(db_dir)
    except (OSError, ValueError, CatalogError) as exc:
        _fail(DATA_ERROR, f"cannot load database {db_dir}: {exc}")
    indexes = IndexSet()
    for table in catalog.tables.values():
        indexes.load_for(db_dir, table)
        for column in table.schema.free_text_columns():
            if indexes.get(table.schema.name, column) is None:
                indexes.build_all(table)
                break
    if config.backend == "http":
        backend = HttpAnswerer(config)
    else:
        backend = MockAnswerer(
            _load_rules(os.path.join(db_dir, "rules.json")),
            _load_classify(os.path.join(db_dir, "classify.json")),
        )
    cache_path = os.path.join(db_dir, "llm_cache.jsonl") if config.backend == "http" else None
    answerer = CachedAnswerer(backend, cache_path)
    return catalog, QueryRuntime(answerer, indexes, config)


def _config_from_flags(backend: str, no_prune: bool, mode: str, retrieval_k: int) -> EngineConfig:
    config = EngineConfig(backend=backend, retrieval_k=retrieval_k)
    if no_prune or mode == "exact":
        config.prune = False
    if mode == "exact":
        config.lazy = False
        config.order_predicates = False
    elif mode == "no-order":
        config.order_predicates = False
    return config


def _common_query_flags(fn):
    fn = click.option("--backend", type=click.Choice(["mock", "http"]), default="mock",
                      show_default=True, help="Free-text runtime backend.")(fn)
    fn = click.option("--no-prune", is_flag=True, help="Disable retrieval pruning.")(fn)
    fn = click.option("--mode", type=click.Choice(["optimized", "no-order", "exact"]),
                      default="optimized", show_default=True,
                      help="Optimizer mode: exact disables pruning, ordering, and lazy evaluation.")(fn)
    fn = click.option("--retrieval-k", type=int, default=20, show_default=True,
                      help="Rows shortlisted by the embedding index.")(fn)
    return fn


@click.group()
def main() -> None:
    """SUQL: SQL with free-text answer/summary primitives."""


@main.command()
@click.argument("schema_path", type=click.Path())
@click.argument("data_paths", type=click.Path(), nargs=-1, required=True)
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Database directory to write.")
@click.option("--rules", "rules_path", type=click.Path(), default=None,
              help="Mock answerer rules JSON to bundle into the database.")
@click.option("--classify", "classify_path", type=click.Path(), default=None,
              help="Mock classify table JSON to bundle into the database.")
def ingest(schema_path, data_paths, out_dir, rules_path, classify_path) -> None:
    """Build a database directory (rows + retrieval indexes) from DDL + data."""
    created = not os.path.exists(out_dir)
    try:
        if not os.path.exists(schema_path):
            raise LoadError(f"schema file not found: {schema_path}")
        with open(schema_path, encoding="utf-8") as fh:
            ddl_text = fh.read()
        catalog = Catalog()
        schemas = [parse_ddl(stmt + ";") for stmt in ddl_text.split(";") if stmt.strip()]
        by_name = {s.name: s for s in schemas}
        for path in data_paths:
            if not os.path.exists(path):
                raise LoadError(f"data file not found: {path}")
            stem = os.path.splitext(os.path.basename(path))[0]
            schema = by_name.get(stem)
            if schema is None and len(schemas) == 1:
                schema = schemas[0]
            if schema is None:
                raise LoadError(f"no CREATE TABLE matches data file {path!r}")
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
            if path.endswith(".csv"):
                catalog.add(load_csv(schema, text))
            else:
                catalog.add(load_jsonl(schema, text))
        os.makedirs(out_dir, exist_ok=True)
        catalog.save(out_dir)
        indexes = IndexSet()
        for table in catalog.tables.values():
            indexes.build_all(table)
        indexes.save(out_dir)
        if rules_path:
            shutil.copyfile(rules_path, os.path.join(out_dir, "rules.json"))
        if classify_path:
            shutil.copyfile(classify_path, os.path.join(out_dir, "classify.json"))
    except (SuqlSyntaxError, CatalogError, OSError, ValueError) as exc:
        if created and os.path.isdir(out_dir):
            shutil.rmtree(out_dir, ignore_errors=True)
        _fail(DATA_ERROR, str(exc))
    click.echo(f"wrote {out_dir}: {', '.join(sorted(catalog.tables))}")


def _print_result(result, show_stats: bool = True) -> None:
    names = [n for n, _ in result.columns]
    rendered = [
        ["" if v is None else render_value(v) for v in row] for row in result.rows
    ]
    widths = [
        max(len(names[i]), *(len(r[i]) for r in rendered)) if rendered else len(names[i])
        for i in range(len(names))
    ]
    click.echo(" | ".join(n.ljust(w) for n, w in zip(names, widths)))
    click.echo("-+-".join("-" * w for w in widths))
    for row in rendered:
        click.echo(" | ".join(v.ljust(w) for v, w in zip(row, widths)))
    if show_stats:
        stats = result.stats
        click.echo(
            f"({len(result.rows)} rows; scanned {stats.rows_scanned}, "
            f"answer calls {stats.answer_calls}, classify calls {stats.classify_calls})"
        )


def _run_one(catalog, runtime, text: str, show_explain: bool) -> None:
    try:
        ast = bind(parse(text), catalog)
    except (SuqlSyntaxError, BindError) as exc:
        _fail(QUERY_ERROR, str(exc))
    try:
        tree, result = run_query(ast, catalog, runtime)
    except ExecError as exc:
        _fail(QUERY_ERROR, str(exc))
    if show_explain:
        click.echo(explain(tree))
        click.echo("")
    _print_result(result)


@main.command()
@click.argument("db_dir", type=click.Path(exists=True))
@click.argument("query_text")
@click.option("--explain", "show_explain", is_flag=True, help="Print the plan tree.")
@_common_query_flags
def query(db_dir, query_text, show_explain, backend, no_prune, mode, retrieval_k) -> None:
    """Run one SUQL query against a database directory."""
    config = _config_from_flags(backend, no_prune, mode, retrieval_k)
    catalog, runtime = _make_runtime(db_dir, config)
    _run_one(catalog, runtime, query_text, show_explain)


@main.command()
@click.argument("db_dir", type=click.Path(exists=True))
@_common_query_flags
def repl(db_dir, backend, no_prune, mode, retrieval_k) -> None:
    """Interactive query loop; \\q quits, \\e toggles EXPLAIN."""
    config = _config_from_flags(backend, no_prune, mode, retrieval_k)
    catalog, runtime = _make_runtime(db_dir, config)
    show_explain = False
    click.echo(f"connected: {', '.join(sorted(catalog.tables))}")
    while True:
        try:
            line = click.prompt("suql", prompt_suffix="> ")
        except (EOFError, click.Abort):
            break
        line = line.strip()
        if line in ("\\q", "quit", "exit"):
            break
        if line == "\\e":
            show_explain = not show_explain
            click.echo(f"explain {'on' if show_explain else 'off'}")
            continue
        if not line:
            continue
        try:
            ast = bind(parse(line), catalog)
            tree, result = run_query(ast, catalog, runtime)
        except (SuqlSyntaxError, BindError, ExecError) as exc:
            click.echo(f"error: {exc}", err=True)
            continue
        if show_explain:
            click.echo(explain(tree))
        _print_result(result)


@main.command("eval")
@click.argument("db_dir", type=click.Path(exists=True))
@click.argument("questions_path", type=click.Path())
@click.option("--out", "out_prefix", default="eval_report", show_default=True,
              help="Report file prefix (.json and .csv are appended).")
@_common_query_flags
def eval_cmd(db_dir, questions_path, out_prefix, backend, no_prune, mode, retrieval_k) -> None:
    """Score a JSON batch of {example_id, question, gold, suql} examples."""
    config = _config_from_flags(backend, no_prune, mode, retrieval_k)
    catalog, runtime = _make_runtime(db_dir, config)
    if not os.path.exists(questions_path):
        _fail(DATA_ERROR, f"questions file not found: {questions_path}")
    with open(questions_path, encoding="utf-8") as fh:
        raw = fh.read()
    try:
        if questions_path.endswith(".jsonl"):
            records = [json.loads(line) for line in raw.splitlines() if line.strip()]
        else:
            records = json.loads(raw)
        examples = [EvalExample.from_json(r) for r in records]
    except (ValueError, KeyError) as exc:
        _fail(DATA_ERROR, f"bad questions file: {exc}")
    report = run_batch(examples, catalog, runtime, config.retry_budget)
    with open(out_prefix + ".json", "w", encoding="utf-8") as fh:
        fh.write(report.to_json_text())
    with open(out_prefix + ".csv", "w", encoding="utf-8") as fh:
        fh.write(report.to_csv_text())
    summary = report.to_json()["summary"]
    click.echo(json.dumps(summary, sort_keys=True))
    if any(r.error for r in report.results):
        sys.exit(QUERY_ERROR)


@main.command()
@click.argument("db_dir", type=click.Path(exists=True))
@click.option("--port", type=click.IntRange(1, 65535), default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--script", "script_path", type=click.Path(), default=None,
              help="Mock agent lookup tables (classifier/parser JSON).")
@_common_query_flags
def serve(db_dir, port, host, script_path, backend, no_prune, mode, retrieval_k) -> None:
    """Serve the query + chat HTTP endpoints."""
    import uvicorn

    from .service import create_app

    config = _config_from_flags(backend, no_prune, mode, retrieval_k)
    catalog, runtime = _make_runtime(db_dir, config)
    if config.backend == "http":
        agent_backend = HttpAgentBackend(runtime.answerer.backend)
    else:
        script = {}
        default_script = os.path.join(db_dir, "script.json")
        path = script_path or (default_script if os.path.exists(default_script) else None)
        if path:
            with open(path, encoding="utf-8") as fh:
                script = json.load(fh)
        agent_backend = MockAgentBackend(script.get("classifier"), script.get("parser"))
    app = create_app(catalog, runtime, agent_backend, config)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
