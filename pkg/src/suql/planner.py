"""Optimizing rewrites from a bound AST to an executable plan.

Pipeline: desugar summary -> overload enum equality -> DNF-normalize the
filter -> order conjuncts by cost class -> attach retrieval pruning ->
decide lazy-limit eligibility.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional

from .catalog import Catalog
from .config import EngineConfig
from .qast import (
    Aggregate,
    AnswerCall,
    AnyEq,
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
    SummaryCall,
    TableRef,
    Expr,
    print_expr,
    print_predicate,
    walk_expr,
)
from .types import TypeKind

SUMMARY_QUESTION = "what is the summary of this document?"

class CostClass(IntEnum):
    STRUCTURED = 0
    ENUM_OVERLOAD = 1
    ANSWER = 2


@dataclass
class CostedAtom:
    pred: Predicate  # an atom, possibly wrapped in Not
    cost: CostClass


@dataclass
class Constraint:
    question: str
    column: Optional[ColumnRef]
    atom_id: int


@dataclass
class RetrievalPrune:
    constraints: list[Constraint]
    k: int


@dataclass
class PlanTree:
    query: Query  # rewritten + bound
    dnf: Optional[list[list[CostedAtom]]]  # None when the filter blew the cap
    fallback_predicate: Optional[Predicate]
    prune: Optional[RetrievalPrune]
    lazy: bool

    def answer_atom_count(self) -> int:
        clauses = self.dnf or []
        return sum(1 for cl in clauses for a in cl if a.cost is CostClass.ANSWER)


class PlanError(Exception):
    pass


# ---------------------------------------------------------------------------
# Desugaring

def desugar(query: Query) -> Query:
    """Replace every summary(t) with the equivalent answer(t, ...) call."""
    out = copy.deepcopy(query)
    for item in out.projections:
        item.expr = _desugar_expr(item.expr)
    if out.where is not None:
        out.where = _desugar_predicate(out.where)
    out.order_by = [(_desugar_expr(e), d) for e, d in out.order_by]
    return out


def _desugar_expr(expr: Expr) -> Expr:
    if isinstance(expr, SummaryCall):
        return AnswerCall(_desugar_expr(expr.target), SUMMARY_QUESTION)
    if isinstance(expr, AnswerCall):
        expr.target = _desugar_expr(expr.target)
        return expr
    if isinstance(expr, Cast):
        expr.expr = _desugar_expr(expr.expr)
        return expr
    if isinstance(expr, Aggregate):
        if expr.arg is not None:
            expr.arg = _desugar_expr(expr.arg)
        return expr
    if hasattr(expr, "left"):
        expr.left = _desugar_expr(expr.left)
        expr.right = _desugar_expr(expr.right)
        return expr
    return expr


def _desugar_predicate(pred: Predicate) -> Predicate:
    if isinstance(pred, (And, Or)):
        pred.items = [_desugar_predicate(p) for p in pred.items]
        return pred
    if isinstance(pred, Not):
        pred.pred = _desugar_predicate(pred.pred)
        return pred
    if isinstance(pred, Cmp):
        pred.left = _desugar_expr(pred.left)
        pred.right = _desugar_expr(pred.right)
        return pred
    if isinstance(pred, InList):
        pred.expr = _desugar_expr(pred.expr)
        return pred
    if isinstance(pred, AnyEq):
        pred.literal = _desugar_expr(pred.literal)
        return pred
    return pred


# ---------------------------------------------------------------------------
# Enum equality overloading

def rewrite_enum_eq(query: Query, catalog: Catalog) -> Query:
    """Overload '=' on enumerated columns via classify-membership atoms.

    Literals already inside the domain stay plain string equality; anything
    else becomes a ClassifyMembership atom resolved by the text runtime.
    """
    out = copy.deepcopy(query)
    if out.where is not None:
        out.where = _rewrite_pred(out.where, out, catalog)
    return out


def _enum_domain_of(column: ColumnRef, query: Query, catalog: Catalog):
    if column.bound is None:
        return None
    item = query.from_items[column.bound.item_index]
    if not isinstance(item, TableRef):
        return None
    table = catalog.get(item.table)
    return table.schema.enum_domain_for(column.bound.column)


def _rewrite_pred(pred: Predicate, query: Query, catalog: Catalog) -> Predicate:
    if isinstance(pred, (And, Or)):
        pred.items = [_rewrite_pred(p, query, catalog) for p in pred.items]
        return pred
    if isinstance(pred, Not):
        pred.pred = _rewrite_pred(pred.pred, query, catalog)
        return pred
    if isinstance(pred, Cmp) and pred.op == "=":
        for lit, col in ((pred.left, pred.right), (pred.right, pred.left)):
            if isinstance(lit, Literal) and isinstance(lit.value, str) and isinstance(col, ColumnRef):
                domain = _enum_domain_of(col, query, catalog)
                if domain is not None and not domain.contains(lit.value):
                    return ClassifyMembership(lit.value, domain, col)
        return pred
    if isinstance(pred, AnyEq):
        if isinstance(pred.literal, Literal) and isinstance(pred.literal.value, str):
            domain = _enum_domain_of(pred.column, query, catalog)
            if domain is not None and not domain.contains(pred.literal.value):
                return ClassifyMembership(pred.literal.value, domain, pred.column)
        return pred
    return pred


# ---------------------------------------------------------------------------
# DNF

class DnfBlowup(Exception):
    pass


def to_dnf(pred: Predicate, max_clauses: int = 64) -> list[list[Predicate]]:
    """Convert a predicate to an OR of AND-lists of atoms.

    NOT is pushed down to the atoms first (De Morgan). Raises DnfBlowup when
    the clause count would exceed `max_clauses`.
    """
    nnf = _push_not(pred, negate=False)
    clauses = _distribute(nnf, max_clauses)
    return clauses


def _push_not(pred: Predicate, negate: bool) -> Predicate:
    if isinstance(pred, And):
        items = [_push_not(p, negate) for p in pred.items]
        return Or(items) if negate else And(items)
    if isinstance(pred, Or):
        items = [_push_not(p, negate) for p in pred.items]
        return And(items) if negate else Or(items)
    if isinstance(pred, Not):
        return _push_not(pred.pred, not negate)
    if not negate:
        return pred
    # Negation stays wrapped around the atom: flipping the comparison operator
    # would change behavior on Null operands (both sides compare false, but the
    # negation of false is true).
    return Not(pred)


def _distribute(pred: Predicate, max_clauses: int) -> list[list[Predicate]]:
    if isinstance(pred, Or):
        out: list[list[Predicate]] = []
        for item in pred.items:
            out.extend(_distribute(item, max_clauses))
            if len(out) > max_clauses:
                raise DnfBlowup(f"DNF exceeds {max_clauses} clauses")
        return out
    if isinstance(pred, And):
        clauses: list[list[Predicate]] = [[]]
        for item in pred.items:
            sub = _distribute(item, max_clauses)
            clauses = [c + s for c in clauses for s in sub]
            if len(clauses) > max_clauses:
                raise DnfBlowup(f"DNF exceeds {max_clauses} clauses")
        return clauses
    return [[pred]]


# ---------------------------------------------------------------------------
# Cost classes and ordering

def atom_answer_calls(atom: Predicate) -> list[AnswerCall]:
    calls: list[AnswerCall] = []
    target = atom.pred if isinstance(atom, Not) else atom
    exprs: list[Expr] = []
    if isinstance(target, Cmp):
        exprs = [target.left, target.right]
    elif isinstance(target, InList):
        exprs = [target.expr]
    elif isinstance(target, AnyEq):
        exprs = [target.literal]
    for expr in exprs:
        calls.extend(n for n in walk_expr(expr) if isinstance(n, AnswerCall))
    return calls


def classify_cost(atom: Predicate) -> CostClass:
    if atom_answer_calls(atom):
        return CostClass.ANSWER
    target = atom.pred if isinstance(atom, Not) else atom
    if isinstance(target, ClassifyMembership):
        return CostClass.ENUM_OVERLOAD
    return CostClass.STRUCTURED


def order_conjuncts(atoms: list[CostedAtom]) -> list[CostedAtom]:
    """Stable sort by cost class; order within a class is preserved."""
    return sorted(atoms, key=lambda a: a.cost)


# ---------------------------------------------------------------------------
# Retrieval pruning

def attach_retrieval(dnf: Optional[list[list[CostedAtom]]], config: EngineConfig) -> Optional[RetrievalPrune]:
    if dnf is None:
        return None
    constraints: list[Constraint] = []
    seen: set[str] = set()
    atom_id = 0
    for clause in dnf:
        for atom in clause:
            for call in atom_answer_calls(atom.pred):
                column = next(
                    (n for n in walk_expr(call.target) if isinstance(n, ColumnRef)),
                    None,
                )
                if call.question not in seen:
                    seen.add(call.question)
                    constraints.append(Constraint(call.question, column, atom_id))
                atom_id += 1
    if not constraints:
        return None
    return RetrievalPrune(constraints, config.retrieval_k)


# ---------------------------------------------------------------------------
# Composition

def _query_has_aggregate(query: Query) -> bool:
    return any(
        isinstance(n, Aggregate)
        for item in query.projections
        if not isinstance(item.expr, Star)
        for n in walk_expr(item.expr)
    )


def plan(query: Query, catalog: Catalog, config: Optional[EngineConfig] = None) -> PlanTree:
    """Build the optimized plan for a bound query."""
    config = config or EngineConfig()
    rewritten = desugar(query)
    rewritten = rewrite_enum_eq(rewritten, catalog)

    dnf: Optional[list[list[CostedAtom]]] = None
    fallback: Optional[Predicate] = None
    if rewritten.where is not None:
        try:
            clauses = to_dnf(rewritten.where, config.dnf_max_clauses)
            dnf = [
                [CostedAtom(atom, classify_cost(atom)) for atom in clause]
                for clause in clauses
            ]
            if config.order_predicates:
                dnf = [order_conjuncts(clause) for clause in dnf]
        except DnfBlowup:
            # Documented fallback: evaluate the original tree, answer atoms
            # are still memoized by the runtime cache.
            fallback = rewritten.where
    else:
        dnf = []

    prune = attach_retrieval(dnf, config) if config.prune else None

    lazy = (
        config.lazy
        and rewritten.limit is not None
        and not rewritten.order_by
        and not _query_has_aggregate(rewritten)
    )
    return PlanTree(rewritten, dnf, fallback, prune, lazy)


def explain(tree: PlanTree) -> str:
    """Render a plan as indented text (the EXPLAIN surface)."""
    lines = []
    for item in tree.query.from_items:
        if isinstance(item, TableRef):
            alias = f" AS {item.alias}" if item.alias else ""
            lines.append(f"SCAN {item.table}{alias}")
        else:
            lines.append(f"UNNEST {print_expr(item.source)} AS {item.alias}")
    if tree.prune is not None:
        lines.append(f"RETRIEVAL PRUNE k={tree.prune.k}")
        for c in tree.prune.constraints:
            col = print_expr(c.column) if c.column is not None else "?"
            lines.append(f"  constraint [{col}]: {c.question!r}")
    if tree.fallback_predicate is not None:
        lines.append("FILTER (unnormalized; DNF cap exceeded)")
        lines.append(f"  {print_predicate(tree.fallback_predicate)}")
    elif tree.dnf:
        lines.append(f"FILTER (DNF, {len(tree.dnf)} clause{'s' if len(tree.dnf) != 1 else ''})")
        for i, clause in enumerate(tree.dnf, 1):
            lines.append(f"  clause {i}:")
            for atom in clause:
                lines.append(f"    [{atom.cost.name}] {print_predicate(atom.pred)}")
    proj = ", ".join(
        ("*" if isinstance(p.expr, Star) else print_expr(p.expr))
        + (f" AS {p.alias}" if p.alias else "")
        for p in tree.query.projections
    )
    lines.append(f"PROJECT {proj}")
    if tree.query.order_by:
        keys = ", ".join(
            print_expr(e) + (" DESC" if d else "") for e, d in tree.query.order_by
        )
        lines.append(f"ORDER BY {keys}")
    if tree.query.limit is not None:
        lines.append(f"LIMIT {tree.query.limit}{' (lazy)' if tree.lazy else ''}")
    return "\n".join(lines)
