"""Bundled deterministic corpora used by the tests, demos, and eval runs.

Each corpus ships schema + rows + queries + mock answerer rules; manifest
digests are verified on load so silent edits to the data files surface.
Regenerate with tools/build_fixtures.py.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Any, Optional

from ..catalog import Catalog, TableSchema, load_jsonl, parse_ddl
from ..runtime import MockRule
from ..types import EnumDomain

_DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


class FixtureError(Exception):
    pass


@dataclass
class FixtureBundle:
    corpus_id: str
    catalog: Catalog
    queries: Any                      # list or dict of SUQL texts
    rules: list[MockRule]
    classify_table: dict[str, list[str]] = field(default_factory=dict)
    extras: dict[str, Any] = field(default_factory=dict)


def _path(name: str) -> str:
    return os.path.join(_DATA_DIR, name)


def _read_bytes(name: str) -> bytes:
    path = _path(name)
    if not os.path.exists(path):
        raise FixtureError(f"missing fixture file {name}")
    with open(path, "rb") as fh:
        return fh.read()


def _manifest() -> dict:
    return json.loads(_read_bytes("manifest.json").decode("utf-8"))


def _verified(corpus_id: str, name: str) -> bytes:
    entry = _manifest()["corpora"].get(corpus_id)
    if entry is None:
        raise FixtureError(f"unknown fixture corpus {corpus_id!r}")
    expected = entry["files"].get(name)
    if expected is None:
        raise FixtureError(f"file {name} not in manifest for corpus {corpus_id!r}")
    raw = _read_bytes(name)
    actual = hashlib.sha256(raw).hexdigest()
    if actual != expected:
        raise FixtureError(f"digest mismatch for {name}: {actual} != {expected}")
    return raw


def _load_json(corpus_id: str, name: str):
    return json.loads(_verified(corpus_id, name).decode("utf-8"))


def _load_rules(corpus_id: str, name: str) -> list[MockRule]:
    return [
        MockRule(r["doc_pattern"], r["question_pattern"], r["response"])
        for r in _load_json(corpus_id, name)
    ]


def _load_table(corpus_id: str, schema_file: str, rows_file: str,
                enums_file: Optional[str] = None):
    schema = parse_ddl(_verified(corpus_id, schema_file).decode("utf-8"))
    if enums_file is not None:
        annotations = {
            column: EnumDomain(d["name"], tuple(d["values"]))
            for column, d in _load_json(corpus_id, enums_file).items()
        }
        schema = TableSchema(schema.name, schema.columns, annotations)
    return load_jsonl(schema, _verified(corpus_id, rows_file).decode("utf-8"))


def corpus_ids() -> list[str]:
    return sorted(_manifest()["corpora"])


def load_fixture(corpus_id: str) -> FixtureBundle:
    if corpus_id == "table2":
        catalog = Catalog()
        catalog.add(_load_table(corpus_id, "table2_schema.sql", "table2_rows.jsonl"))
        return FixtureBundle(
            corpus_id,
            catalog,
            _load_json(corpus_id, "table2_queries.json"),
            _load_rules(corpus_id, "table2_rules.json"),
        )
    if corpus_id == "restaurants":
        catalog = Catalog()
        catalog.add(
            _load_table(
                corpus_id,
                "restaurants_schema.sql",
                "restaurants_rows.jsonl",
                "restaurants_enums.json",
            )
        )
        return FixtureBundle(
            corpus_id,
            catalog,
            _load_json(corpus_id, "restaurants_queries.json"),
            _load_rules(corpus_id, "restaurants_rules.json"),
            classify_table=_load_json(corpus_id, "restaurants_classify.json"),
        )
    if corpus_id == "stress":
        catalog = Catalog()
        catalog.add(_load_table(corpus_id, "stress_schema.sql", "stress_rows.jsonl"))
        return FixtureBundle(
            corpus_id,
            catalog,
            _load_json(corpus_id, "stress_queries.json"),
            _load_rules(corpus_id, "stress_rules.json"),
        )
    if corpus_id == "qa12":
        base = load_fixture("table2")
        examples = _load_json(corpus_id, "qa12_examples.json")
        return FixtureBundle(
            corpus_id, base.catalog, [], base.rules, extras={"examples": examples}
        )
    if corpus_id == "convo20":
        base = load_fixture("restaurants")
        script = _load_json(corpus_id, "convo20_script.json")
        return FixtureBundle(
            corpus_id,
            base.catalog,
            [],
            base.rules,
            classify_table=base.classify_table,
            extras=script,
        )
    raise FixtureError(f"unknown fixture corpus {corpus_id!r}")
