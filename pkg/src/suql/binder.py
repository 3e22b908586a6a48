"""Name resolution and type checking of parsed queries against a catalog."""

from __future__ import annotations

import copy
from typing import Optional

from .catalog import Catalog, TableSchema
from .qast import (
    Aggregate,
    AnswerCall,
    AnyEq,
    Arith,
    ArrayContains,
    BoundColumn,
    Cast,
    Cmp,
    ColumnRef,
    And,
    InList,
    Literal,
    Not,
    Or,
    Predicate,
    Query,
    Star,
    SummaryCall,
    TableRef,
    UnnestRef,
    Expr,
    walk_expr,
)
from .types import SemanticType, TypeKind, TypeError_, cast_value

__all__ = ["BindError", "bind"]


class BindError(Exception):
    pass


class _Scope:
    """Resolved from-items of one query."""

    def __init__(self, query: Query, catalog: Catalog):
        self.items: list[tuple[str, object]] = []  # (binding name, TableSchema | SemanticType)
        names = set()
        for item in query.from_items:
            if isinstance(item, TableRef):
                table = catalog.get(item.table) if catalog.has(item.table) else None
                if table is None:
                    raise BindError(f"unknown table {item.table!r}")
                name = item.binding_name
                schema = table.schema
                payload: object = schema
            else:
                name = item.alias
                payload = None  # patched below once the source column binds
            if name.casefold() in names:
                raise BindError(f"duplicate alias {name!r}")
            names.add(name.casefold())
            self.items.append((name, payload))
        # Unnest sources bind against the sibling table items.
        for idx, item in enumerate(query.from_items):
            if isinstance(item, UnnestRef):
                bound = self.resolve(item.source, allow_unnest=False)
                item.source.bound = bound
                if bound.stype.kind is not TypeKind.ARRAY:
                    raise BindError(
                        f"unnest() needs an array column, got {bound.stype.render()}"
                    )
                self.items[idx] = (item.alias, bound.stype.element)

    def resolve(self, ref: ColumnRef, allow_unnest: bool = True) -> BoundColumn:
        matches: list[BoundColumn] = []
        for idx, (name, payload) in enumerate(self.items):
            if payload is None or (not allow_unnest and not isinstance(payload, TableSchema)):
                continue
            if ref.table is not None and ref.table.casefold() != name.casefold():
                continue
            if isinstance(payload, TableSchema):
                found = payload.find_column(ref.name)
                if found is not None:
                    matches.append(BoundColumn(idx, found[0], found[1]))
            else:
                # Unnest alias behaves as a one-column item named after itself.
                if ref.name.casefold() == name.casefold():
                    matches.append(BoundColumn(idx, name, payload))
        if not matches:
            raise BindError(f"unknown column {ref.name!r}")
        if len(matches) > 1:
            raise BindError(f"ambiguous column {ref.name!r}")
        return matches[0]


def bind(query: Query, catalog: Catalog) -> Query:
    """Return an annotated deep copy of `query`; the input is left untouched."""
    bound = copy.deepcopy(query)
    scope = _Scope(bound, catalog)

    for item in bound.projections:
        if isinstance(item.expr, Star):
            continue
        _bind_expr(item.expr, scope)
    if bound.where is not None:
        _bind_predicate(bound.where, scope)
    for expr, _ in bound.order_by:
        _bind_expr(expr, scope)
    return bound


def _bind_expr(expr: Expr, scope: _Scope) -> Optional[SemanticType]:
    if isinstance(expr, ColumnRef):
        expr.bound = scope.resolve(expr)
        return expr.bound.stype
    if isinstance(expr, Literal):
        return _literal_type(expr)
    if isinstance(expr, (AnswerCall, SummaryCall)):
        target_type = _bind_expr(expr.target, scope)
        if target_type is None or not target_type.is_free_text:
            name = expr.target.name if isinstance(expr.target, ColumnRef) else "expression"
            rendered = target_type.render() if target_type else "unknown"
            raise BindError(
                f"answer/summary target {name!r} must be FREE_TEXT or "
                f"FREE_TEXT[], got {rendered}"
            )
        return SemanticType(TypeKind.TEXT)
    if isinstance(expr, Cast):
        _bind_expr(expr.expr, scope)
        return expr.target
    if isinstance(expr, Aggregate):
        if expr.arg is None:
            return SemanticType(TypeKind.INT)
        inner = _bind_expr(expr.arg, scope)
        if expr.func == "COUNT":
            return SemanticType(TypeKind.INT)
        if expr.func == "AVG":
            return SemanticType(TypeKind.FLOAT)
        return inner
    if isinstance(expr, Arith):
        left = _bind_expr(expr.left, scope)
        right = _bind_expr(expr.right, scope)
        if left is not None and left.kind in (TypeKind.INTERVAL, TypeKind.TIME):
            return SemanticType(TypeKind.INTERVAL)
        return left or right
    if isinstance(expr, Star):
        raise BindError("'*' is only valid as a whole projection")
    raise BindError(f"cannot bind expression {expr!r}")


def _literal_type(lit: Literal) -> SemanticType:
    if isinstance(lit.value, bool):
        return SemanticType(TypeKind.BOOLEAN)
    if isinstance(lit.value, int):
        return SemanticType(TypeKind.INT)
    if isinstance(lit.value, float):
        return SemanticType(TypeKind.FLOAT)
    return SemanticType(TypeKind.TEXT)


def _coerce_literal(lit: Literal, target: SemanticType) -> None:
    """Implicitly cast a string literal compared against a typed column.

    Covers e.g. integer columns compared with quoted numbers. Left alone on
    failure: the comparison simply stays a (false) text comparison.
    """
    if not isinstance(lit.value, str):
        return
    if target.kind in (
        TypeKind.INT,
        TypeKind.FLOAT,
        TypeKind.NUMERIC,
        TypeKind.DATE,
        TypeKind.TIME,
        TypeKind.INTERVAL,
    ):
        try:
            lit.value = cast_value(lit.value, target)
        except TypeError_:
            pass


def _bind_predicate(pred: Predicate, scope: _Scope) -> None:
    if isinstance(pred, (And, Or)):
        for item in pred.items:
            _bind_predicate(item, scope)
        return
    if isinstance(pred, Not):
        _bind_predicate(pred.pred, scope)
        return
    if isinstance(pred, Cmp):
        left = _bind_expr(pred.left, scope)
        right = _bind_expr(pred.right, scope)
        if pred.op == "ILIKE":
            for side in (left, right):
                if side is not None and not side.is_textual:
                    raise BindError("ILIKE requires text operands")
        else:
            if isinstance(pred.right, Literal) and left is not None:
                _coerce_literal(pred.right, left)
            if isinstance(pred.left, Literal) and right is not None:
                _coerce_literal(pred.left, right)
        return
    if isinstance(pred, InList):
        expr_type = _bind_expr(pred.expr, scope)
        if expr_type is not None:
            for item in pred.items:
                _coerce_literal(item, expr_type)
        return
    if isinstance(pred, AnyEq):
        _bind_expr(pred.literal, scope)
        bound = scope.resolve(pred.column)
        pred.column.bound = bound
        if bound.stype.kind is not TypeKind.ARRAY:
            raise BindError(
                f"= ANY needs an array column, got {bound.stype.render()}"
            )
        return
    if isinstance(pred, ArrayContains):
        bound = scope.resolve(pred.column)
        pred.column.bound = bound
        if bound.stype.kind is not TypeKind.ARRAY:
            raise BindError(f"@> needs an array column, got {bound.stype.render()}")
        return
    raise BindError(f"cannot bind predicate {pred!r}")
