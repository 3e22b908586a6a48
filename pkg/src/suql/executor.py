"""Plan evaluation: pruning, filters with verified answer atoms, projection,
aggregates, ordering and lazy LIMIT."""

from __future__ import annotations

import datetime as dt
import re
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional

from .catalog import Catalog, Table
from .config import EngineConfig
from .planner import (
    Constraint,
    CostClass,
    CostedAtom,
    PlanTree,
    plan as build_plan,
)
from .qast import (
    Aggregate,
    AnswerCall,
    AnyEq,
    Arith,
    ArrayContains,
    And,
    Cast,
    ClassifyMembership,
    Cmp,
    ColumnRef,
    InList,
    Literal,
    Not,
    Or,
    Predicate,
    ProjItem,
    Query,
    Star,
    TableRef,
    UnnestRef,
    Expr,
    print_expr,
    print_predicate,
    walk_expr,
)
from .retrieval import IndexSet
from .runtime import CachedAnswerer, compare_answer
from .types import (
    CastError,
    SemanticType,
    TypeKind,
    cast_value,
    render_value,
)


class ExecError(Exception):
    pass


@dataclass
class ExecStats:
    rows_scanned: int = 0
    answer_calls: int = 0
    classify_calls: int = 0
    cast_errors: int = 0
    retrieval_pruned: bool = False

    def to_json(self) -> dict:
        return {
            "rows_scanned": self.rows_scanned,
            "answer_calls": self.answer_calls,
            "classify_calls": self.classify_calls,
            "cast_errors": self.cast_errors,
            "retrieval_pruned": self.retrieval_pruned,
        }


@dataclass
class ResultSet:
    columns: list[tuple[str, Optional[SemanticType]]]
    rows: list[list[Any]]
    stats: ExecStats

    def to_json(self) -> dict:
        from .types import value_to_json

        return {
            "columns": [
                {"name": n, "type": t.render() if t else "TEXT"} for n, t in self.columns
            ],
            "rows": [[value_to_json(v) for v in row] for row in self.rows],
            "stats": self.stats.to_json(),
        }


@dataclass
class QueryRuntime:
    """Everything execution needs besides the catalog."""

    answerer: CachedAnswerer
    indexes: IndexSet
    config: EngineConfig = field(default_factory=EngineConfig)


class _CastFail(Exception):
    pass


@dataclass
class _RowCtx:
    """One candidate binding of every from-item to a concrete value."""

    key: tuple            # (row_id, ...) identity for memoization
    slots: list[Any]      # per from-item: row list for tables, value for unnest


class _Evaluator:
    def __init__(self, tree: PlanTree, catalog: Catalog, runtime: QueryRuntime):
        self.tree = tree
        self.query = tree.query
        self.catalog = catalog
        self.runtime = runtime
        self.stats = ExecStats()
        self._filter_memo: dict[tuple, bool] = {}
        self._answer_memo: dict[tuple, str] = {}
        self._tables: list[Optional[Table]] = []
        for item in self.query.from_items:
            self._tables.append(
                catalog.get(item.table) if isinstance(item, TableRef) else None
            )
        self._pruned_rows: Optional[set[int]] = None
        self._prune_item: Optional[int] = None

    # -- row sources --------------------------------------------------------

    def _row_ctxs(self) -> Iterator[_RowCtx]:
        items = self.query.from_items
        if len(items) == 1:
            table = self._tables[0]
            for row_id, row in enumerate(table.rows):
                yield _RowCtx((row_id,), [row])
            return
        first, second = items
        table_a = self._tables[0]
        if isinstance(second, TableRef):
            table_b = self._tables[1]
            for i, row_a in enumerate(table_a.rows):
                for j, row_b in enumerate(table_b.rows):
                    yield _RowCtx((i, j), [row_a, row_b])
            return
        # table + unnest(column)
        src = second.source.bound
        for i, row in enumerate(table_a.rows):
            cell = row[table_a.schema.column_index(src.column)] if src else None
            for j, element in enumerate(cell or []):
                yield _RowCtx((i, j), [row, element])

    def _base_row_id(self, ctx: _RowCtx) -> int:
        return ctx.key[0]

    # -- retrieval pruning ---------------------------------------------------

    def _setup_prune(self) -> None:
        prune = self.tree.prune
        if prune is None:
            return
        table_items = [
            i for i, it in enumerate(self.query.from_items) if isinstance(it, TableRef)
        ]
        if len(table_items) != 1:
            return  # cross joins run unpruned
        item_index = table_items[0]
        table = self._tables[item_index]
        columns = []
        for c in prune.constraints:
            col = self._constraint_column(c)
            if col is None:
                return  # unindexable constraint: full scan
            columns.append(col)
        if any(self.runtime.indexes.get(table.schema.name, c) is None for c in columns):
            return  # no index built: legal, slow full scan
        ranked = self.runtime.indexes.top_k(
            table.schema.name,
            columns,
            [c.question for c in prune.constraints],
            prune.k,
            range(len(table.rows)),
        )
        self._pruned_rows = set(ranked)
        self._prune_item = item_index
        self.stats.retrieval_pruned = True

    def _constraint_column(self, constraint: Constraint) -> Optional[str]:
        col = constraint.column
        if col is None or col.bound is None:
            return None
        item = self.query.from_items[col.bound.item_index]
        if isinstance(item, UnnestRef):
            src = item.source.bound
            return src.column if src else None
        return col.bound.column

    # -- expression evaluation ----------------------------------------------

    def _column_value(self, ref: ColumnRef, ctx: _RowCtx) -> Any:
        bound = ref.bound
        if bound is None:
            raise ExecError(f"unbound column {ref.name!r}")
        slot = ctx.slots[bound.item_index]
        item = self.query.from_items[bound.item_index]
        if isinstance(item, UnnestRef):
            return slot
        table = self._tables[bound.item_index]
        return slot[table.schema.column_index(bound.column)]

    def _documents(self, target: Expr, ctx: _RowCtx) -> list[str]:
        value = self.eval_expr(target, ctx)
        if value is None:
            return []
        if isinstance(value, list):
            return [render_value(v) for v in value if v is not None]
        return [render_value(value)]

    def _call_answer(self, call: AnswerCall, ctx: _RowCtx, type_hint: str = "") -> str:
        target = (
            print_expr(call.target),
            call.question,
            type_hint,
        )
        key = (ctx.key, *target)
        if key not in self._answer_memo:
            docs = self._documents(call.target, ctx)
            self.stats.answer_calls += 1
            self._answer_memo[key] = self.runtime.answerer.answer(
                docs, call.question, type_hint
            )
        return self._answer_memo[key]

    def eval_expr(self, expr: Expr, ctx: _RowCtx) -> Any:
        if isinstance(expr, Literal):
            return expr.value
        if isinstance(expr, ColumnRef):
            return self._column_value(expr, ctx)
        if isinstance(expr, AnswerCall):
            return self._call_answer(expr, ctx)
        if isinstance(expr, Cast):
            if isinstance(expr.expr, AnswerCall):
                hint = _type_hint(expr.target)
                value = self._call_answer(expr.expr, ctx, hint)
            else:
                value = self.eval_expr(expr.expr, ctx)
            try:
                return cast_value(value, expr.target)
            except CastError as exc:
                raise _CastFail(str(exc)) from None
        if isinstance(expr, Arith):
            left = self.eval_expr(expr.left, ctx)
            right = self.eval_expr(expr.right, ctx)
            return _arith(expr.op, left, right)
        if isinstance(expr, Aggregate):
            raise ExecError("aggregate evaluated outside aggregation context")
        if isinstance(expr, Star):
            raise ExecError("'*' cannot be evaluated as a value")
        raise ExecError(f"cannot evaluate {expr!r}")

    # -- predicate evaluation -------------------------------------------------

    def eval_answer_filter(self, ctx: _RowCtx, atom: Cmp) -> bool:
        """`answer(col, q) <op> literal`: verified through the runtime,
        memoized per (row, column, question, op, literal)."""
        call = atom.left if isinstance(atom.left, AnswerCall) else atom.right
        literal = atom.right if call is atom.left else atom.left
        key = (
            ctx.key,
            print_expr(call.target),
            call.question,
            atom.op,
            literal.value,
        )
        if key not in self._filter_memo:
            docs = self._documents(call.target, ctx)
            self.stats.answer_calls += 1
            self._filter_memo[key] = self.runtime.answerer.filter_check(
                docs, call.question, atom.op, literal.value
            )
        return self._filter_memo[key]

    def eval_atom(self, atom: Predicate, ctx: _RowCtx) -> bool:
        if isinstance(atom, Not):
            return not self.eval_atom(atom.pred, ctx)
        if isinstance(atom, (And, Or)):
            return self.eval_predicate(atom, ctx)
        if isinstance(atom, Cmp):
            direct_filter = (
                isinstance(atom.left, AnswerCall) and isinstance(atom.right, Literal)
            ) or (isinstance(atom.right, AnswerCall) and isinstance(atom.left, Literal))
            if direct_filter:
                return self.eval_answer_filter(ctx, atom)
            left = self.eval_expr(atom.left, ctx)
            right = self.eval_expr(atom.right, ctx)
            has_answer = any(
                isinstance(n, AnswerCall)
                for side in (atom.left, atom.right)
                for n in walk_expr(side)
            )
            if has_answer and isinstance(left, str) and isinstance(right, str):
                # Text comparisons against generated answers are normalized.
                return compare_answer(left, atom.op, right)
            return _compare(left, atom.op, right)
        if isinstance(atom, InList):
            value = self.eval_expr(atom.expr, ctx)
            return any(_compare(value, "=", item.value) for item in atom.items)
        if isinstance(atom, AnyEq):
            literal = self.eval_expr(atom.literal, ctx)
            cell = self._column_value(atom.column, ctx)
            if cell is None:
                return False
            return any(_compare(literal, "=", element) for element in cell)
        if isinstance(atom, ArrayContains):
            cell = self._column_value(atom.column, ctx)
            if cell is None:
                return False
            folded = [_fold_text(v) for v in cell]
            return all(_fold_text(item.value) in folded for item in atom.items)
        if isinstance(atom, ClassifyMembership):
            self.stats.classify_calls += 1
            matches = self.runtime.answerer.classify(atom.literal, atom.domain)
            cell = self._column_value(atom.column, ctx)
            if cell is None:
                return False
            values = cell if isinstance(cell, list) else [cell]
            folded = {m.casefold() for m in matches}
            return any(
                isinstance(v, str) and v.casefold() in folded for v in values
            )
        raise ExecError(f"cannot evaluate predicate {atom!r}")

    def eval_predicate(self, pred: Predicate, ctx: _RowCtx) -> bool:
        if isinstance(pred, And):
            return all(self.eval_predicate(p, ctx) for p in pred.items)
        if isinstance(pred, Or):
            return any(self.eval_predicate(p, ctx) for p in pred.items)
        if isinstance(pred, Not):
            return not self.eval_predicate(pred.pred, ctx)
        return self.eval_atom(pred, ctx)

    def _row_passes(self, ctx: _RowCtx) -> bool:
        if self.tree.fallback_predicate is not None:
            return self.eval_predicate(self.tree.fallback_predicate, ctx)
        if self.tree.dnf is None or not self.tree.dnf:
            return True
        short_circuit = self.runtime.config.order_predicates
        for clause in self.tree.dnf:
            if short_circuit:
                ok = True
                for atom in clause:
                    if not self._eval_costed(atom, ctx):
                        ok = False
                        break
                if ok:
                    return True
            else:
                # Unoptimized semantics: every atom evaluated on every row.
                values = [self._eval_costed(atom, ctx) for atom in clause]
                if all(values):
                    return True
        return False

    def _eval_costed(self, atom: CostedAtom, ctx: _RowCtx) -> bool:
        if (
            atom.cost is CostClass.ANSWER
            and self._pruned_rows is not None
            and self._base_row_id(ctx) not in self._pruned_rows
        ):
            # Outside the retrieval shortlist: answer atoms are taken as
            # false without invoking the runtime (recall-lossy by design).
            return False
        return self.eval_atom(atom.pred, ctx)

    # -- projection -----------------------------------------------------------

    def _expand_projections(self) -> list[tuple[str, Optional[Expr], Optional[SemanticType]]]:
        """Resolve the projection list to (name, expr-or-None-for-star-col, type)."""
        out: list[tuple[str, Optional[Expr], Optional[SemanticType]]] = []
        for item in self.query.projections:
            if isinstance(item.expr, Star):
                for idx, fitem in enumerate(self.query.from_items):
                    if isinstance(fitem, TableRef):
                        table = self._tables[idx]
                        for cname, ctype in table.schema.columns:
                            ref = ColumnRef(cname)
                            from .qast import BoundColumn

                            ref.bound = BoundColumn(idx, cname, ctype)
                            out.append((cname, ref, ctype))
                    else:
                        src = fitem.source.bound
                        etype = src.stype.element if src else None
                        ref = ColumnRef(fitem.alias)
                        from .qast import BoundColumn

                        ref.bound = BoundColumn(idx, fitem.alias, etype)
                        out.append((fitem.alias, ref, etype))
            else:
                name = item.alias or _default_name(item.expr)
                out.append((name, item.expr, _static_type(item.expr)))
        return out

    def project(self, ctx: _RowCtx, columns) -> list[Any]:
        row = []
        for _, expr, _type in columns:
            try:
                row.append(self.eval_expr(expr, ctx))
            except _CastFail:
                self.stats.cast_errors += 1
                row.append(None)
        return row

    # -- top level -------------------------------------------------------------

    def run(self) -> ResultSet:
        self._setup_prune()
        columns = self._expand_projections()
        has_aggregate = any(
            expr is not None and any(isinstance(n, Aggregate) for n in walk_expr(expr))
            for _, expr, _ in columns
        )

        survivors: list[_RowCtx] = []
        limit = self.query.limit
        for ctx in self._row_ctxs():
            self.stats.rows_scanned += 1
            try:
                passed = self._row_passes(ctx)
            except _CastFail:
                self.stats.cast_errors += 1
                continue
            if not passed:
                continue
            survivors.append(ctx)
            if self.tree.lazy and limit is not None and len(survivors) >= limit:
                break

        if has_aggregate:
            row = [self._eval_aggregate(expr, survivors) for _, expr, _ in columns]
            rows = [row]
        else:
            keyed = []
            for ctx in survivors:
                keyed.append((ctx, self.project(ctx, columns)))
            keyed = self._order(keyed)
            if limit is not None:
                keyed = keyed[:limit]
            rows = [row for _, row in keyed]
        return ResultSet([(n, t) for n, _, t in columns], rows, self.stats)

    def _order(self, keyed: list[tuple[_RowCtx, list[Any]]]):
        for expr, desc in reversed(self.query.order_by):
            evaluated = []
            for ctx, row in keyed:
                try:
                    key = self.eval_expr(expr, ctx)
                except _CastFail:
                    self.stats.cast_errors += 1
                    key = None
                evaluated.append((key, ctx, row))
            with_key = [e for e in evaluated if e[0] is not None]
            without_key = [e for e in evaluated if e[0] is None]
            try:
                with_key.sort(key=lambda e: e[0], reverse=desc)
            except TypeError as exc:
                raise ExecError(f"incomparable ORDER BY keys: {exc}") from None
            keyed = [(ctx, row) for _, ctx, row in with_key + without_key]
        return keyed

    def _eval_aggregate(self, expr: Expr, survivors: list[_RowCtx]) -> Any:
        if isinstance(expr, Aggregate):
            if expr.arg is None:  # COUNT(*)
                return len(survivors)
            values = []
            for ctx in survivors:
                try:
                    v = self.eval_expr(expr.arg, ctx)
                except _CastFail:
                    self.stats.cast_errors += 1
                    continue
                if v is not None:
                    values.append(v)
            if expr.func == "COUNT":
                return len(values)
            if not values:
                return None
            if expr.func == "MAX":
                return max(values)
            if expr.func == "MIN":
                return min(values)
            if expr.func == "SUM":
                return sum(values)
            if expr.func == "AVG":
                return sum(values) / len(values)
        if isinstance(expr, Cast):
            inner = self._eval_aggregate(expr.expr, survivors)
            try:
                return cast_value(inner, expr.target)
            except CastError:
                self.stats.cast_errors += 1
                return None
        # Non-aggregate expression alongside an aggregate: first survivor.
        if survivors:
            try:
                return self.eval_expr(expr, survivors[0])
            except _CastFail:
                self.stats.cast_errors += 1
        return None


def execute(tree: PlanTree, catalog: Catalog, runtime: QueryRuntime) -> ResultSet:
    """Evaluate an optimized plan; deterministic given a deterministic runtime."""
    return _Evaluator(tree, catalog, runtime).run()


def run_query(
    query: Query, catalog: Catalog, runtime: QueryRuntime
) -> tuple[PlanTree, ResultSet]:
    """Convenience: plan a bound query with the runtime's config and execute."""
    tree = build_plan(query, catalog, runtime.config)
    return tree, execute(tree, catalog, runtime)


# ---------------------------------------------------------------------------
# Value semantics helpers

def _fold_text(value: Any) -> Any:
    return value.casefold() if isinstance(value, str) else value


def _compare(left: Any, op: str, right: Any) -> bool:
    """Structured comparison; any Null operand compares false."""
    if left is None or right is None:
        return False
    if op == "ILIKE":
        pattern = _ilike_regex(str(right))
        return bool(pattern.fullmatch(str(left)))
    if isinstance(left, bool) or isinstance(right, bool):
        left, right = bool(left), bool(right)
    elif isinstance(left, (int, float)) and isinstance(right, (int, float)):
        pass
    elif type(left) is not type(right):
        if isinstance(left, str) and isinstance(right, str):
            pass
        elif isinstance(left, dt.date) and isinstance(right, dt.date):
            pass
        else:
            left, right = render_value(left), render_value(right)
    try:
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
    except TypeError:
        return False
    raise ExecError(f"unsupported comparison operator {op!r}")


def _ilike_regex(pattern: str) -> re.Pattern:
    out = []
    for ch in pattern:
        if ch == "%":
            out.append(".*")
        elif ch == "_":
            out.append(".")
        else:
            out.append(re.escape(ch))
    return re.compile("".join(out), re.IGNORECASE | re.DOTALL)


def _arith(op: str, left: Any, right: Any) -> Any:
    if left is None or right is None:
        return None
    try:
        if op == "+":
            return left + right
        if op == "-":
            return left - right
    except TypeError as exc:
        raise ExecError(f"bad arithmetic operands: {exc}") from None
    raise ExecError(f"unsupported arithmetic operator {op!r}")


def _type_hint(target: SemanticType) -> str:
    hints = {
        TypeKind.DATE: " Answer with a date.",
        TypeKind.TIME: " Answer with a time of day.",
        TypeKind.INTERVAL: " Answer with a duration.",
        TypeKind.INT: " Answer with a number.",
        TypeKind.FLOAT: " Answer with a number.",
        TypeKind.NUMERIC: " Answer with a number.",
    }
    return hints.get(target.kind, "")


def _default_name(expr: Expr) -> str:
    if isinstance(expr, ColumnRef):
        return expr.name
    if isinstance(expr, AnswerCall):
        return "answer"
    if isinstance(expr, Aggregate):
        return expr.func.lower()
    if isinstance(expr, Cast):
        return _default_name(expr.expr)
    return print_expr(expr)


def _static_type(expr: Expr) -> Optional[SemanticType]:
    if isinstance(expr, ColumnRef):
        return expr.stype
    if isinstance(expr, Cast):
        return expr.target
    if isinstance(expr, Literal):
        if isinstance(expr.value, bool):
            return SemanticType(TypeKind.BOOLEAN)
        if isinstance(expr.value, int):
            return SemanticType(TypeKind.INT)
        if isinstance(expr.value, float):
            return SemanticType(TypeKind.FLOAT)
        return SemanticType(TypeKind.TEXT)
    if isinstance(expr, (AnswerCall,)):
        return SemanticType(TypeKind.TEXT)
    if isinstance(expr, Aggregate):
        if expr.func == "COUNT":
            return SemanticType(TypeKind.INT)
        return _static_type(expr.arg) if expr.arg is not None else None
    return None
