"""Hand-written recursive descent parser for the SUQL query subset.

The grammar (documented in docs/grammar.md) is the minimal closure over the
query shapes this engine supports: single SELECT, 1-2 comma-joined tables or
an unnest() item, WHERE with AND/OR/NOT and the comparison/IN/ANY/@> atoms,
casts, aggregates, ORDER BY and LIMIT.
"""

from __future__ import annotations

from typing import Optional

from .lexer import SuqlSyntaxError, Token, tokenize
from .qast import (
    Aggregate,
    AnswerCall,
    AnyEq,
    Arith,
    ArrayContains,
    Cast,
    Cmp,
    ColumnRef,
    And,
    InList,
    Literal,
    Not,
    Or,
    Predicate,
    ProjItem,
    Query,
    Star,
    SummaryCall,
    TableRef,
    UnnestRef,
    Expr,
)
from .types import EnumDomain, SemanticType, TypeKind

_AGGREGATES = {"MAX", "MIN", "COUNT", "SUM", "AVG"}
_CMP_OPS = {"=", "!=", "<>", "<", "<=", ">", ">="}
_RESERVED = {
    "SELECT", "FROM", "WHERE", "ORDER", "BY", "GROUP", "HAVING", "LIMIT",
    "AND", "OR", "NOT", "IN", "AS", "ASC", "DESC", "ILIKE", "ANY", "ARRAY",
    "UNION", "INTERSECT", "EXCEPT", "JOIN", "ON", "DISTINCT",
}
_UNSUPPORTED = {
    "GROUP", "HAVING", "UNION", "INTERSECT", "EXCEPT", "JOIN", "ON", "DISTINCT",
}

_CAST_TYPES = {
    "INT": TypeKind.INT,
    "INTEGER": TypeKind.INT,
    "FLOAT": TypeKind.FLOAT,
    "REAL": TypeKind.FLOAT,
    "NUMERIC": TypeKind.NUMERIC,
    "DECIMAL": TypeKind.NUMERIC,
    "BOOLEAN": TypeKind.BOOLEAN,
    "TEXT": TypeKind.TEXT,
    "DATE": TypeKind.DATE,
    "TIME": TypeKind.TIME,
    "INTERVAL": TypeKind.INTERVAL,
}


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.type == "OP" and tok.value in ops

    def at_kw(self, *keywords: str) -> bool:
        return self.peek().is_kw(*keywords)

    def expect_op(self, op: str) -> Token:
        tok = self.next()
        if tok.type != "OP" or tok.value != op:
            raise SuqlSyntaxError(f"expected {op!r}, found {tok.value!r}", tok.position)
        return tok

    def expect_kw(self, keyword: str) -> Token:
        tok = self.next()
        if not tok.is_kw(keyword):
            raise SuqlSyntaxError(
                f"expected {keyword}, found {tok.value!r}", tok.position
            )
        return tok


def parse(text: str) -> Query:
    """Parse one SUQL SELECT statement."""
    cur = _Cursor(tokenize(text))
    query = _parse_select(cur)
    tok = cur.next()
    if tok.type == "OP" and tok.value == ";":
        tok = cur.next()
    if tok.type != "EOF":
        raise SuqlSyntaxError(f"unexpected trailing input {tok.value!r}", tok.position)
    return query


def _parse_select(cur: _Cursor) -> Query:
    cur.expect_kw("SELECT")
    head = cur.peek()
    if head.type == "IDENT" and head.value.upper() in _UNSUPPORTED:
        raise SuqlSyntaxError(
            f"unsupported construct: {head.value.upper()}", head.position
        )
    projections = [_parse_proj_item(cur)]
    while cur.at_op(","):
        cur.next()
        projections.append(_parse_proj_item(cur))
    cur.expect_kw("FROM")
    from_items = [_parse_from_item(cur)]
    if cur.at_op(","):
        cur.next()
        from_items.append(_parse_from_item(cur))
    if cur.at_op(","):
        raise SuqlSyntaxError("at most 2 FROM items are supported", cur.peek().position)
    where = None
    if cur.at_kw("WHERE"):
        cur.next()
        where = _parse_predicate(cur)
    order_by: list[tuple[Expr, bool]] = []
    if cur.at_kw("ORDER"):
        cur.next()
        cur.expect_kw("BY")
        while True:
            expr = _parse_expr(cur)
            desc = False
            if cur.at_kw("ASC"):
                cur.next()
            elif cur.at_kw("DESC"):
                cur.next()
                desc = True
            order_by.append((expr, desc))
            if cur.at_op(","):
                cur.next()
                continue
            break
    limit = None
    if cur.at_kw("LIMIT"):
        cur.next()
        tok = cur.next()
        if tok.type != "INT":
            raise SuqlSyntaxError("expected integer after LIMIT", tok.position)
        limit = int(tok.value)
        if limit < 1:
            raise SuqlSyntaxError("LIMIT must be at least 1", tok.position)
    tok = cur.peek()
    if tok.type == "IDENT" and tok.value.upper() in _UNSUPPORTED:
        raise SuqlSyntaxError(
            f"unsupported construct: {tok.value.upper()}", tok.position
        )
    return Query(projections, from_items, where, order_by, limit)


def _parse_proj_item(cur: _Cursor) -> ProjItem:
    if cur.at_op("*"):
        cur.next()
        return ProjItem(Star())
    expr = _parse_expr(cur)
    alias = None
    if cur.at_kw("AS"):
        cur.next()
        alias = _expect_name(cur)
    elif cur.peek().type == "QIDENT" or (
        cur.peek().type == "IDENT" and cur.peek().value.upper() not in _RESERVED
    ):
        alias = _expect_name(cur)
    return ProjItem(expr, alias)


def _parse_from_item(cur: _Cursor):
    tok = cur.peek()
    if tok.is_kw("UNNEST") and cur.peek(1).value == "(":
        cur.next()
        cur.expect_op("(")
        source = _parse_column_ref(cur)
        cur.expect_op(")")
        if cur.at_kw("AS"):
            cur.next()
        alias = _expect_name(cur)
        return UnnestRef(source, alias)
    if tok.type not in ("IDENT", "QIDENT"):
        raise SuqlSyntaxError("expected table name", tok.position)
    if tok.type == "IDENT" and tok.value.upper() in _UNSUPPORTED:
        raise SuqlSyntaxError(f"unsupported construct: {tok.value.upper()}", tok.position)
    cur.next()
    table = _fold(tok)
    alias = None
    if cur.at_kw("AS"):
        cur.next()
        alias = _expect_name(cur)
    elif cur.peek().type == "QIDENT" or (
        cur.peek().type == "IDENT" and cur.peek().value.upper() not in _RESERVED
    ):
        alias = _expect_name(cur)
    return TableRef(table, alias)


def _expect_name(cur: _Cursor) -> str:
    tok = cur.next()
    if tok.type not in ("IDENT", "QIDENT"):
        raise SuqlSyntaxError("expected identifier", tok.position)
    return _fold(tok)


def _fold(tok: Token) -> str:
    """Unquoted identifiers fold to lowercase, quoted ones stay verbatim."""
    return tok.value if tok.type == "QIDENT" else tok.value.lower()


# -- predicates --------------------------------------------------------------

def _parse_predicate(cur: _Cursor) -> Predicate:
    return _parse_or(cur)


def _parse_or(cur: _Cursor) -> Predicate:
    items = [_parse_and(cur)]
    while cur.at_kw("OR"):
        cur.next()
        items.append(_parse_and(cur))
    return items[0] if len(items) == 1 else Or(items)


def _parse_and(cur: _Cursor) -> Predicate:
    items = [_parse_not(cur)]
    while cur.at_kw("AND"):
        cur.next()
        items.append(_parse_not(cur))
    return items[0] if len(items) == 1 else And(items)


def _parse_not(cur: _Cursor) -> Predicate:
    if cur.at_kw("NOT"):
        cur.next()
        return Not(_parse_not(cur))
    return _parse_atom(cur)


def _parse_atom(cur: _Cursor) -> Predicate:
    if cur.at_op("("):
        # Either a parenthesized predicate or a parenthesized expression that
        # starts a comparison; resolve by backtracking.
        saved = cur.pos
        cur.next()
        try:
            inner = _parse_predicate(cur)
            cur.expect_op(")")
            follow = cur.peek()
            starts_comparison = (
                follow.type == "OP" and follow.value in _CMP_OPS | {"::", "+", "-", "@>"}
            ) or follow.is_kw("IN", "ILIKE")
            if not starts_comparison:
                return inner
        except SuqlSyntaxError:
            pass
        cur.pos = saved
    left = _parse_expr(cur)
    tok = cur.peek()
    if tok.is_kw("IN"):
        cur.next()
        cur.expect_op("(")
        items = [_expect_literal(cur)]
        while cur.at_op(","):
            cur.next()
            items.append(_expect_literal(cur))
        cur.expect_op(")")
        return InList(left, items)
    if tok.is_kw("ILIKE"):
        cur.next()
        right = _parse_expr(cur)
        return Cmp(left, "ILIKE", right)
    if tok.type == "OP" and tok.value == "@>":
        cur.next()
        cur.expect_kw("ARRAY")
        cur.expect_op("[")
        items = [_expect_literal(cur)]
        while cur.at_op(","):
            cur.next()
            items.append(_expect_literal(cur))
        cur.expect_op("]")
        if not isinstance(left, ColumnRef):
            raise SuqlSyntaxError("@> requires a column on the left", tok.position)
        return ArrayContains(left, items)
    if tok.type == "OP" and tok.value in _CMP_OPS:
        cur.next()
        op = "!=" if tok.value == "<>" else tok.value
        if op == "=" and cur.at_kw("ANY"):
            cur.next()
            cur.expect_op("(")
            column = _parse_column_ref(cur)
            cur.expect_op(")")
            return AnyEq(left, column)
        right = _parse_expr(cur)
        return Cmp(left, op, right)
    raise SuqlSyntaxError(
        f"expected comparison, found {tok.value!r}", tok.position
    )


def _expect_literal(cur: _Cursor) -> Literal:
    tok = cur.next()
    if tok.type == "STRING":
        return Literal(tok.value)
    if tok.type == "INT":
        return Literal(int(tok.value))
    if tok.type == "FLOAT":
        return Literal(float(tok.value))
    if tok.type == "OP" and tok.value == "-" and cur.peek().type in ("INT", "FLOAT"):
        num = cur.next()
        return Literal(-int(num.value) if num.type == "INT" else -float(num.value))
    raise SuqlSyntaxError("expected literal", tok.position)


# -- expressions -------------------------------------------------------------

def _parse_expr(cur: _Cursor) -> Expr:
    left = _parse_cast_expr(cur)
    while cur.at_op("+", "-"):
        op = cur.next().value
        right = _parse_cast_expr(cur)
        left = Arith(op, left, right)
    return left


def _parse_cast_expr(cur: _Cursor) -> Expr:
    expr = _parse_primary(cur)
    while cur.at_op("::"):
        cur.next()
        expr = Cast(expr, _parse_cast_type(cur))
    return expr


def _parse_cast_type(cur: _Cursor) -> SemanticType:
    tok = cur.next()
    if tok.type != "IDENT" or tok.value.upper() not in _CAST_TYPES:
        raise SuqlSyntaxError(f"unknown cast type {tok.value!r}", tok.position)
    kind = _CAST_TYPES[tok.value.upper()]
    precision = scale = None
    if kind is TypeKind.NUMERIC and cur.at_op("("):
        cur.next()
        precision = int(cur.next().value)
        scale = 0
        if cur.at_op(","):
            cur.next()
            scale = int(cur.next().value)
        cur.expect_op(")")
    return SemanticType(kind, precision=precision, scale=scale)


def _parse_primary(cur: _Cursor) -> Expr:
    tok = cur.peek()
    if tok.type == "STRING":
        cur.next()
        return Literal(tok.value)
    if tok.type == "INT":
        cur.next()
        return Literal(int(tok.value))
    if tok.type == "FLOAT":
        cur.next()
        return Literal(float(tok.value))
    if tok.type == "OP" and tok.value == "-":
        cur.next()
        num = cur.next()
        if num.type == "INT":
            return Literal(-int(num.value))
        if num.type == "FLOAT":
            return Literal(-float(num.value))
        raise SuqlSyntaxError("expected number after '-'", num.position)
    if tok.type == "OP" and tok.value == "(":
        cur.next()
        expr = _parse_expr(cur)
        cur.expect_op(")")
        return expr
    if tok.type == "IDENT":
        upper = tok.value.upper()
        if upper in _UNSUPPORTED:
            raise SuqlSyntaxError(f"unsupported construct: {upper}", tok.position)
        if tok.value.lower() == "answer" and cur.peek(1).value == "(":
            cur.next()
            cur.expect_op("(")
            target = _parse_expr(cur)
            cur.expect_op(",")
            q = cur.next()
            if q.type != "STRING" or not q.value:
                raise SuqlSyntaxError(
                    "answer() needs a non-empty string question", q.position
                )
            cur.expect_op(")")
            return AnswerCall(target, q.value)
        if tok.value.lower() == "summary" and cur.peek(1).value == "(":
            cur.next()
            cur.expect_op("(")
            target = _parse_expr(cur)
            cur.expect_op(")")
            return SummaryCall(target)
        if upper in _AGGREGATES and cur.peek(1).value == "(":
            cur.next()
            cur.expect_op("(")
            if cur.at_op("*"):
                cur.next()
                arg = None
                if upper != "COUNT":
                    raise SuqlSyntaxError("only COUNT(*) may take '*'", tok.position)
            else:
                arg = _parse_expr(cur)
                if any(isinstance(n, Aggregate) for n in _walk(arg)):
                    raise SuqlSyntaxError("nested aggregates", tok.position)
            cur.expect_op(")")
            return Aggregate(upper, arg)
        if upper in _RESERVED:
            raise SuqlSyntaxError(f"unexpected keyword {tok.value!r}", tok.position)
        return _parse_column_ref(cur)
    if tok.type == "QIDENT":
        return _parse_column_ref(cur)
    raise SuqlSyntaxError(f"unexpected token {tok.value!r}", tok.position)


def _walk(expr: Expr):
    from .qast import walk_expr

    yield from walk_expr(expr)


def _parse_column_ref(cur: _Cursor) -> ColumnRef:
    tok = cur.next()
    if tok.type not in ("IDENT", "QIDENT"):
        raise SuqlSyntaxError("expected column reference", tok.position)
    first = _fold(tok)
    if cur.at_op(".") :
        cur.next()
        second = cur.next()
        if second.type not in ("IDENT", "QIDENT"):
            raise SuqlSyntaxError("expected column after '.'", second.position)
        return ColumnRef(_fold(second), table=first)
    return ColumnRef(first)
