"""Schemas, tables and the embedded on-disk store.

A loaded catalog is immutable: mutation happens only by reloading a whole
table into a fresh snapshot, so concurrent readers never need locks.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from .lexer import SuqlSyntaxError, Token, tokenize
from .types import (
    EnumDomain,
    SemanticType,
    TypeKind,
    TypeError_,
    cast_value,
    value_to_json,
)


class CatalogError(Exception):
    pass


class LoadError(CatalogError):
    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        detail = message
        if row is not None:
            detail += f" (row {row}"
            if column is not None:
                detail += f", column {column!r}"
            detail += ")"
        super().__init__(detail)
        self.row = row
        self.column = column


@dataclass(frozen=True)
class TableSchema:
    name: str
    columns: tuple[tuple[str, SemanticType], ...]
    # TEXT / TEXT[] columns that behave as enumerated even though their
    # declared type is plain text (e.g. a multi-valued cuisines column).
    enum_annotations: dict[str, EnumDomain] = field(default_factory=dict)

    def __post_init__(self):
        if not self.columns:
            raise TypeError_(f"table {self.name!r} has no columns")
        folded = [c.casefold() for c, _ in self.columns]
        if len(set(folded)) != len(folded):
            raise TypeError_(f"table {self.name!r} has duplicate column names")

    def column_names(self) -> list[str]:
        return [c for c, _ in self.columns]

    def column_type(self, name: str) -> SemanticType:
        found = self.find_column(name)
        if found is None:
            raise CatalogError(f"no column {name!r} in table {self.name!r}")
        return found[1]

    def find_column(self, name: str) -> Optional[tuple[str, SemanticType]]:
        for c, t in self.columns:
            if c == name:
                return c, t
        for c, t in self.columns:
            if c.casefold() == name.casefold():
                return c, t
        return None

    def column_index(self, name: str) -> int:
        found = self.find_column(name)
        if found is None:
            raise CatalogError(f"no column {name!r} in table {self.name!r}")
        return [c for c, _ in self.columns].index(found[0])

    def enum_domain_for(self, name: str) -> Optional[EnumDomain]:
        """Declared ENUM domain or enum annotation for a column, if any."""
        found = self.find_column(name)
        if found is None:
            return None
        cname, ctype = found
        if ctype.kind is TypeKind.ENUM:
            return ctype.enum
        if ctype.kind is TypeKind.ARRAY and ctype.element.kind is TypeKind.ENUM:
            return ctype.element.enum
        return self.enum_annotations.get(cname)

    def free_text_columns(self) -> list[str]:
        return [c for c, t in self.columns if t.is_free_text]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "columns": [{"name": c, "type": t.to_json()} for c, t in self.columns],
            "enum_annotations": {
                c: {"name": d.name, "values": list(d.values)}
                for c, d in self.enum_annotations.items()
            },
            "free_text_columns": self.free_text_columns(),
        }

    @staticmethod
    def from_json(data: dict) -> "TableSchema":
        columns = tuple(
            (c["name"], SemanticType.from_json(c["type"])) for c in data["columns"]
        )
        annotations = {
            c: EnumDomain(d["name"], tuple(d["values"]))
            for c, d in data.get("enum_annotations", {}).items()
        }
        return TableSchema(data["name"], columns, annotations)


@dataclass
class Table:
    schema: TableSchema
    rows: list[list[Any]]

    def __len__(self) -> int:
        return len(self.rows)

    def cell(self, row_id: int, column: str) -> Any:
        return self.rows[row_id][self.schema.column_index(column)]


# ---------------------------------------------------------------------------
# DDL

_TYPE_KEYWORDS = {
    "INT": TypeKind.INT,
    "INTEGER": TypeKind.INT,
    "BIGINT": TypeKind.INT,
    "SMALLINT": TypeKind.INT,
    "NUMBER": TypeKind.INT,
    "FLOAT": TypeKind.FLOAT,
    "REAL": TypeKind.FLOAT,
    "DOUBLE": TypeKind.FLOAT,
    "NUMERIC": TypeKind.NUMERIC,
    "DECIMAL": TypeKind.NUMERIC,
    "BOOLEAN": TypeKind.BOOLEAN,
    "BOOL": TypeKind.BOOLEAN,
    "TEXT": TypeKind.TEXT,
    "VARCHAR": TypeKind.TEXT,
    "CHAR": TypeKind.TEXT,
    "DATE": TypeKind.DATE,
    "TIME": TypeKind.TIME,
    "INTERVAL": TypeKind.INTERVAL,
    "FREE_TEXT": TypeKind.FREE_TEXT,
    "ENUM": TypeKind.ENUM,
}


class _DdlCursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def expect_kw(self, keyword: str) -> Token:
        tok = self.next()
        if not tok.is_kw(keyword):
            raise SuqlSyntaxError(f"expected {keyword}", tok.position)
        return tok

    def expect_op(self, op: str) -> Token:
        tok = self.next()
        if tok.type != "OP" or tok.value != op:
            raise SuqlSyntaxError(f"expected {op!r}", tok.position)
        return tok


def parse_ddl(ddl_text: str) -> TableSchema:
    """Parse one CREATE TABLE statement into a TableSchema.

    ENUM domains are registered inline; FREE_TEXT columns come out flagged
    via their semantic type.
    """
    cur = _DdlCursor(tokenize(ddl_text))
    cur.expect_kw("CREATE")
    cur.expect_kw("TABLE")
    name_tok = cur.next()
    if name_tok.type not in ("IDENT", "QIDENT"):
        raise SuqlSyntaxError("expected table name", name_tok.position)
    table_name = name_tok.value
    cur.expect_op("(")
    columns: list[tuple[str, SemanticType]] = []
    while True:
        col_tok = cur.next()
        if col_tok.type not in ("IDENT", "QIDENT"):
            raise SuqlSyntaxError("expected column name", col_tok.position)
        col_type = _parse_type(cur, table_name, col_tok.value)
        columns.append((col_tok.value, col_type))
        sep = cur.next()
        if sep.type == "OP" and sep.value == ",":
            continue
        if sep.type == "OP" and sep.value == ")":
            break
        raise SuqlSyntaxError("expected ',' or ')'", sep.position)
    tail = cur.next()
    if tail.type == "OP" and tail.value == ";":
        tail = cur.next()
    if tail.type != "EOF":
        raise SuqlSyntaxError("unexpected trailing input", tail.position)
    return TableSchema(table_name, tuple(columns))


def _parse_type(cur: _DdlCursor, table: str, column: str) -> SemanticType:
    tok = cur.next()
    if tok.type != "IDENT" or tok.value.upper() not in _TYPE_KEYWORDS:
        raise SuqlSyntaxError(f"unknown type keyword {tok.value!r}", tok.position)
    kind = _TYPE_KEYWORDS[tok.value.upper()]
    precision = scale = None
    enum = None
    if kind is TypeKind.NUMERIC and cur.peek().value == "(":
        cur.expect_op("(")
        p_tok = cur.next()
        precision = int(p_tok.value)
        scale = 0
        if cur.peek().value == ",":
            cur.expect_op(",")
            scale = int(cur.next().value)
        cur.expect_op(")")
    elif kind is TypeKind.TEXT and cur.peek().value == "(":
        # VARCHAR(n): length is accepted and ignored
        cur.expect_op("(")
        cur.next()
        cur.expect_op(")")
    elif kind is TypeKind.ENUM:
        cur.expect_op("(")
        values: list[str] = []
        while True:
            v = cur.next()
            if v.type != "STRING":
                raise SuqlSyntaxError("expected string in ENUM list", v.position)
            values.append(v.value)
            sep = cur.next()
            if sep.value == ",":
                continue
            if sep.value == ")":
                break
            raise SuqlSyntaxError("expected ',' or ')' in ENUM list", sep.position)
        if not values:
            raise SuqlSyntaxError("empty ENUM list", tok.position)
        enum = EnumDomain(f"{table}.{column}", tuple(values))
    base = SemanticType(kind, precision=precision, scale=scale, enum=enum)
    if cur.peek().value == "[":
        cur.expect_op("[")
        cur.expect_op("]")
        return SemanticType(TypeKind.ARRAY, element=base)
    return base


# ---------------------------------------------------------------------------
# Row loading

def _coerce_cell(raw: Any, target: SemanticType, row: int, column: str) -> Any:
    if raw is None or (isinstance(raw, str) and raw == ""):
        return None
    if target.kind is TypeKind.ARRAY and isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError:
            raise LoadError(f"array cell is not valid JSON: {raw!r}", row, column)
        if not isinstance(raw, list):
            raise LoadError(f"array cell is not a JSON array: {raw!r}", row, column)
    try:
        return cast_value(raw, target)
    except TypeError_ as exc:
        raise LoadError(str(exc), row, column) from None


def load_rows(schema: TableSchema, records: Iterable[dict[str, Any]]) -> Table:
    """Build a Table from record dicts; missing fields become Null."""
    rows: list[list[Any]] = []
    for i, record in enumerate(records):
        row = []
        for cname, ctype in schema.columns:
            raw = record.get(cname)
            row.append(_coerce_cell(raw, ctype, i, cname))
        rows.append(row)
    return Table(schema, rows)


def load_jsonl(schema: TableSchema, text: str) -> Table:
    records = []
    for i, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line:
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise LoadError(f"bad JSON line: {exc}", row=i)
    return load_rows(schema, records)


def load_csv(schema: TableSchema, text: str) -> Table:
    reader = csv.DictReader(io.StringIO(text))
    return load_rows(schema, list(reader))


def table_to_jsonl(table: Table) -> str:
    lines = []
    for row in table.rows:
        record = {
            c: value_to_json(v)
            for (c, _), v in zip(table.schema.columns, row)
            if v is not None
        }
        lines.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Catalog

@dataclass
class Catalog:
    tables: dict[str, Table] = field(default_factory=dict)

    def add(self, table: Table) -> None:
        self.tables[table.schema.name] = table

    def get(self, name: str) -> Table:
        if name in self.tables:
            return self.tables[name]
        for key, table in self.tables.items():
            if key.casefold() == name.casefold():
                return table
        raise CatalogError(f"unknown table {name!r}")

    def has(self, name: str) -> bool:
        try:
            self.get(name)
            return True
        except CatalogError:
            return False

    def schema_json(self) -> dict:
        return {
            "tables": [t.schema.to_json() for t in self.tables.values()],
        }

    def save(self, directory: str) -> None:
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "schema.json"), "w", encoding="utf-8") as fh:
            json.dump(self.schema_json(), fh, indent=2, ensure_ascii=False, sort_keys=True)
            fh.write("\n")
        for name, table in self.tables.items():
            path = os.path.join(directory, f"{name}.jsonl")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(table_to_jsonl(table))

    @staticmethod
    def load(directory: str) -> "Catalog":
        with open(os.path.join(directory, "schema.json"), encoding="utf-8") as fh:
            schema_data = json.load(fh)
        catalog = Catalog()
        for entry in schema_data["tables"]:
            schema = TableSchema.from_json(entry)
            path = os.path.join(directory, f"{schema.name}.jsonl")
            if os.path.exists(path):
                with open(path, encoding="utf-8") as fh:
                    catalog.add(load_jsonl(schema, fh.read()))
            else:
                catalog.add(Table(schema, []))
        return catalog
