"""Query AST nodes and the canonical pretty printer.

Binding annotations live on the nodes but are excluded from structural
equality, so print/parse round trips compare cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Union

from .types import EnumDomain, SemanticType, render_value

_BARE_KEYWORDS = {
    "SELECT", "FROM", "WHERE", "ORDER", "BY", "GROUP", "LIMIT", "AND", "OR",
    "NOT", "IN", "AS", "ASC", "DESC", "ILIKE", "ANY", "ARRAY", "UNNEST",
    "MAX", "MIN", "COUNT", "SUM", "AVG",
}


@dataclass(frozen=True)
class BoundColumn:
    item_index: int           # index into Query.from_items
    column: str               # canonical column name (unnest alias for unnest items)
    stype: SemanticType


@dataclass
class Star:
    def __repr__(self):
        return "Star()"


@dataclass
class ColumnRef:
    name: str
    table: Optional[str] = None
    bound: Optional[BoundColumn] = field(default=None, compare=False)

    @property
    def stype(self) -> Optional[SemanticType]:
        return self.bound.stype if self.bound else None


@dataclass
class Literal:
    value: Any  # int | float | str


@dataclass
class AnswerCall:
    target: "Expr"
    question: str


@dataclass
class SummaryCall:
    target: "Expr"


@dataclass
class Cast:
    expr: "Expr"
    target: SemanticType


@dataclass
class Aggregate:
    func: str  # MAX | MIN | COUNT | SUM | AVG
    arg: Optional["Expr"]  # None means COUNT(*)


@dataclass
class Arith:
    op: str  # + | -
    left: "Expr"
    right: "Expr"


Expr = Union[ColumnRef, Literal, AnswerCall, SummaryCall, Cast, Aggregate, Arith, Star]


@dataclass
class Cmp:
    left: Expr
    op: str  # = != < <= > >= ILIKE
    right: Expr


@dataclass
class InList:
    expr: Expr
    items: list[Literal]


@dataclass
class AnyEq:
    """literal = ANY(array_column)"""

    literal: Expr
    column: ColumnRef


@dataclass
class ArrayContains:
    """array_column @> ARRAY[literals]"""

    column: ColumnRef
    items: list[Literal]


@dataclass
class And:
    items: list["Predicate"]


@dataclass
class Or:
    items: list["Predicate"]


@dataclass
class Not:
    pred: "Predicate"


@dataclass
class ClassifyMembership:
    """Planner-introduced atom: enum equality overloaded via classify().

    Satisfied when classify(literal, domain) intersects the cell's value(s).
    """

    literal: str
    domain: EnumDomain
    column: ColumnRef

    def __str__(self):
        return f"classify({self.literal!r}, {self.domain.name}) ~ {print_expr(self.column)}"


Predicate = Union[Cmp, InList, AnyEq, ArrayContains, And, Or, Not, ClassifyMembership]


@dataclass
class ProjItem:
    expr: Expr
    alias: Optional[str] = None


@dataclass
class TableRef:
    table: str
    alias: Optional[str] = None

    @property
    def binding_name(self) -> str:
        return self.alias or self.table


@dataclass
class UnnestRef:
    source: ColumnRef
    alias: str

    @property
    def binding_name(self) -> str:
        return self.alias


FromItem = Union[TableRef, UnnestRef]


@dataclass
class Query:
    projections: list[ProjItem]
    from_items: list[FromItem]
    where: Optional[Predicate] = None
    order_by: list[tuple[Expr, bool]] = field(default_factory=list)  # (expr, desc)
    limit: Optional[int] = None


# ---------------------------------------------------------------------------
# Pretty printer

def _ident(name: str) -> str:
    bare = (
        bool(name)
        and (name[0].isalpha() or name[0] == "_")
        and all(c.isalnum() or c == "_" for c in name)
    )
    if bare and name == name.lower() and name.upper() not in _BARE_KEYWORDS:
        return name
    return '"%s"' % name.replace('"', '""')


def _string(text: str) -> str:
    return "'%s'" % text.replace("'", "''")


def print_literal(lit: Literal) -> str:
    v = lit.value
    if isinstance(v, str):
        return _string(v)
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    if isinstance(v, (int, float)):
        return repr(v)
    return _string(render_value(v))


def print_expr(expr: Expr) -> str:
    if isinstance(expr, Star):
        return "*"
    if isinstance(expr, ColumnRef):
        if expr.table:
            return f"{_ident(expr.table)}.{_ident(expr.name)}"
        return _ident(expr.name)
    if isinstance(expr, Literal):
        return print_literal(expr)
    if isinstance(expr, AnswerCall):
        return f"answer({print_expr(expr.target)}, {_string(expr.question)})"
    if isinstance(expr, SummaryCall):
        return f"summary({print_expr(expr.target)})"
    if isinstance(expr, Cast):
        inner = print_expr(expr.expr)
        if isinstance(expr.expr, Arith):
            inner = f"({inner})"
        return f"{inner}::{expr.target.render()}"
    if isinstance(expr, Aggregate):
        arg = "*" if expr.arg is None else print_expr(expr.arg)
        return f"{expr.func}({arg})"
    if isinstance(expr, Arith):
        right = print_expr(expr.right)
        if isinstance(expr.right, Arith):  # parsing is left-associative
            right = f"({right})"
        return f"{print_expr(expr.left)} {expr.op} {right}"
    raise TypeError(f"unknown expression node {expr!r}")


def print_predicate(pred: Predicate) -> str:
    if isinstance(pred, Cmp):
        return f"{print_expr(pred.left)} {pred.op} {print_expr(pred.right)}"
    if isinstance(pred, InList):
        items = ", ".join(print_literal(i) for i in pred.items)
        return f"{print_expr(pred.expr)} IN ({items})"
    if isinstance(pred, AnyEq):
        return f"{print_expr(pred.literal)} = ANY({print_expr(pred.column)})"
    if isinstance(pred, ArrayContains):
        items = ", ".join(print_literal(i) for i in pred.items)
        return f"{print_expr(pred.column)} @> ARRAY[{items}]"
    if isinstance(pred, And):
        parts = []
        for item in pred.items:
            text = print_predicate(item)
            if isinstance(item, Or):
                text = f"({text})"
            parts.append(text)
        return " AND ".join(parts)
    if isinstance(pred, Or):
        return " OR ".join(print_predicate(item) for item in pred.items)
    if isinstance(pred, Not):
        return f"NOT ({print_predicate(pred.pred)})"
    if isinstance(pred, ClassifyMembership):
        # No concrete syntax of its own: renders as the equality it replaced.
        return f"{_string(pred.literal)} = ANY({print_expr(pred.column)})"
    raise TypeError(f"unknown predicate node {pred!r}")


def print_query(query: Query) -> str:
    parts = ["SELECT "]
    proj = []
    for item in query.projections:
        text = print_expr(item.expr)
        if item.alias:
            text += f" AS {_ident(item.alias)}"
        proj.append(text)
    parts.append(", ".join(proj))
    froms = []
    for item in query.from_items:
        if isinstance(item, TableRef):
            text = _ident(item.table)
            if item.alias:
                text += f" AS {_ident(item.alias)}"
        else:
            text = f"unnest({print_expr(item.source)}) AS {_ident(item.alias)}"
        froms.append(text)
    parts.append(" FROM " + ", ".join(froms))
    if query.where is not None:
        parts.append(" WHERE " + print_predicate(query.where))
    if query.order_by:
        keys = []
        for expr, desc in query.order_by:
            keys.append(print_expr(expr) + (" DESC" if desc else ""))
        parts.append(" ORDER BY " + ", ".join(keys))
    if query.limit is not None:
        parts.append(f" LIMIT {query.limit}")
    parts.append(";")
    return "".join(parts)


def walk_expr(expr: Expr):
    """Yield expr and every sub-expression."""
    yield expr
    children: list[Expr] = []
    if isinstance(expr, AnswerCall):
        children = [expr.target]
    elif isinstance(expr, SummaryCall):
        children = [expr.target]
    elif isinstance(expr, Cast):
        children = [expr.expr]
    elif isinstance(expr, Aggregate) and expr.arg is not None:
        children = [expr.arg]
    elif isinstance(expr, Arith):
        children = [expr.left, expr.right]
    for child in children:
        yield from walk_expr(child)


def walk_predicate(pred: Predicate):
    """Yield pred and every sub-predicate."""
    yield pred
    if isinstance(pred, (And, Or)):
        for item in pred.items:
            yield from walk_predicate(item)
    elif isinstance(pred, Not):
        yield from walk_predicate(pred.pred)


def predicate_exprs(pred: Predicate):
    """Yield every expression appearing in an atom of pred."""
    for node in walk_predicate(pred):
        if isinstance(node, Cmp):
            yield from walk_expr(node.left)
            yield from walk_expr(node.right)
        elif isinstance(node, InList):
            yield from walk_expr(node.expr)
        elif isinstance(node, AnyEq):
            yield from walk_expr(node.literal)
            yield node.column
        elif isinstance(node, ArrayContains):
            yield node.column
        elif isinstance(node, ClassifyMembership):
            yield node.column


def query_exprs(query: Query):
    """Yield every expression in projections, filters and order keys."""
    for item in query.projections:
        yield from walk_expr(item.expr)
    if query.where is not None:
        yield from predicate_exprs(query.where)
    for expr, _ in query.order_by:
        yield from walk_expr(expr)
