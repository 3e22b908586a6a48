"""Independent reference implementations used as test oracles.

These deliberately avoid the engine's planner/executor code paths: the naive
evaluator walks the parsed AST directly, the predicate evaluator applies
textbook boolean semantics, and the scoring oracle recomputes similarities
from raw vectors.
"""

from __future__ import annotations

import random
import re
from typing import Any, Optional

from suql.catalog import Table
from suql.qast import (
    And,
    AnyEq,
    ArrayContains,
    Arith,
    Cmp,
    ColumnRef,
    InList,
    Literal,
    Not,
    Or,
    Predicate,
    Query,
    Star,
)

# ---------------------------------------------------------------------------
# Naive evaluator for structured-only single-table queries


def _column_value(ref: ColumnRef, table: Table, row: list) -> Any:
    for i, (name, _) in enumerate(table.schema.columns):
        if name == ref.name or name.casefold() == ref.name.casefold():
            return row[i]
    raise KeyError(ref.name)


def _eval_expr(expr, table: Table, row: list) -> Any:
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, ColumnRef):
        return _column_value(expr, table, row)
    if isinstance(expr, Arith):
        left = _eval_expr(expr.left, table, row)
        right = _eval_expr(expr.right, table, row)
        if left is None or right is None:
            return None
        return left + right if expr.op == "+" else left - right
    raise NotImplementedError(f"naive evaluator does not handle {expr!r}")


def _ilike(value: str, pattern: str) -> bool:
    regex = "^" + "".join(
        ".*" if ch == "%" else "." if ch == "_" else re.escape(ch) for ch in pattern
    ) + "$"
    return re.match(regex, value, re.IGNORECASE) is not None


def _compare(left: Any, op: str, right: Any) -> bool:
    if left is None or right is None:
        return False
    if op == "ILIKE":
        return _ilike(str(left), str(right))
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    if op == ">=":
        return left >= right
    raise NotImplementedError(op)


def eval_predicate(pred: Predicate, table: Table, row: list) -> bool:
    if isinstance(pred, And):
        return all(eval_predicate(p, table, row) for p in pred.items)
    if isinstance(pred, Or):
        return any(eval_predicate(p, table, row) for p in pred.items)
    if isinstance(pred, Not):
        return not eval_predicate(pred.pred, table, row)
    if isinstance(pred, Cmp):
        return _compare(
            _eval_expr(pred.left, table, row), pred.op, _eval_expr(pred.right, table, row)
        )
    if isinstance(pred, InList):
        value = _eval_expr(pred.expr, table, row)
        if value is None:
            return False
        return any(value == item.value for item in pred.items)
    if isinstance(pred, AnyEq):
        cell = _eval_expr(pred.column, table, row)
        lit = _eval_expr(pred.literal, table, row)
        if cell is None or lit is None:
            return False
        values = cell if isinstance(cell, list) else [cell]
        return lit in values
    if isinstance(pred, ArrayContains):
        cell = _eval_expr(pred.column, table, row)
        if cell is None:
            return False
        values = cell if isinstance(cell, list) else [cell]
        return all(item.value in values for item in pred.items)
    raise NotImplementedError(f"naive evaluator does not handle {pred!r}")


def naive_run(query: Query, table: Table) -> list[tuple]:
    """Reference semantics for structured-only queries on one table."""
    rows = [
        row
        for row in table.rows
        if query.where is None or eval_predicate(query.where, table, row)
    ]
    if query.order_by:
        for expr, desc in reversed(query.order_by):
            keyed = [(_eval_expr(expr, table, r), r) for r in rows]
            present = [(k, r) for k, r in keyed if k is not None]
            absent = [r for k, r in keyed if k is None]
            present.sort(key=lambda pair: pair[0], reverse=desc)
            rows = [r for _, r in present] + absent
    if query.limit is not None:
        rows = rows[: query.limit]
    out = []
    for row in rows:
        cells: list[Any] = []
        for item in query.projections:
            if isinstance(item.expr, Star):
                cells.extend(row)
            else:
                cells.append(_eval_expr(item.expr, table, row))
        out.append(tuple(cells))
    return out


# ---------------------------------------------------------------------------
# Random structured-query generator (shared by planner/executor tests)

_OPS = ["=", "!=", "<", "<=", ">", ">="]


def random_predicate(rng: random.Random, columns: list[str], depth: int = 0) -> Predicate:
    roll = rng.random()
    if depth < 2 and roll < 0.25:
        n = rng.randint(2, 3)
        items = [random_predicate(rng, columns, depth + 1) for _ in range(n)]
        return And(items) if rng.random() < 0.5 else Or(items)
    if depth < 2 and roll < 0.35:
        return Not(random_predicate(rng, columns, depth + 1))
    column = ColumnRef(rng.choice(columns))
    if roll > 0.9:
        items = [Literal(rng.randint(0, 4)) for _ in range(rng.randint(1, 3))]
        return InList(column, items)
    return Cmp(column, rng.choice(_OPS), Literal(rng.randint(0, 4)))


def random_table(rng: random.Random, schema) -> Table:
    rows = []
    for _ in range(rng.randint(0, 32)):
        row = []
        for _, ctype in schema.columns:
            if rng.random() < 0.1:
                row.append(None)
            elif ctype.kind.name == "INT":
                row.append(rng.randint(0, 4))
            else:
                row.append(rng.choice(["ash", "birch", "cedar", "dune", "elm"]))
        rows.append(row)
    return Table(schema, rows)


# ---------------------------------------------------------------------------
# Brute-force aggregated-similarity oracle


def brute_force_score(index_set, table_name: str, columns: list[str], row_id: int,
                      constraints: list[str]) -> float:
    """Recompute sum over constraints of max element similarity from scratch."""
    import numpy as np

    total = 0.0
    for constraint in constraints:
        qvec = index_set.embedder.embed(constraint)
        best = None
        for column in dict.fromkeys(columns):
            index = index_set.get(table_name, column)
            block = index.vectors[row_id]
            for i in range(block.shape[0]):
                s = float(np.dot(block[i], qvec))
                if best is None or s > best:
                    best = s
        total += best if best is not None else -1.0
    return total
