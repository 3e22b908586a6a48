import random

import pytest

from oracles import eval_predicate, random_predicate
from suql import Catalog, EngineConfig, bind, explain, parse, parse_ddl, plan
from suql.catalog import Table, load_rows
from suql.planner import (
    CostClass,
    CostedAtom,
    DnfBlowup,
    SUMMARY_QUESTION,
    attach_retrieval,
    classify_cost,
    desugar,
    order_conjuncts,
    rewrite_enum_eq,
    to_dnf,
)
from suql.qast import (
    And,
    AnswerCall,
    ClassifyMembership,
    Cmp,
    ColumnRef,
    Literal,
    Not,
    Or,
    print_predicate,
)


@pytest.fixture()
def catalog(restaurants):
    return restaurants.catalog


class TestDesugar:
    def test_summary_becomes_answer(self, catalog):
        q = desugar(bind(parse("SELECT summary(reviews) FROM restaurants"), catalog))
        expr = q.projections[0].expr
        assert isinstance(expr, AnswerCall)
        assert expr.question == SUMMARY_QUESTION

    def test_summary_in_order_by(self, catalog):
        q = desugar(
            bind(parse("SELECT name FROM restaurants ORDER BY summary(reviews)"), catalog)
        )
        assert isinstance(q.order_by[0][0], AnswerCall)

    def test_input_not_mutated(self, catalog):
        bound = bind(parse("SELECT summary(reviews) FROM restaurants"), catalog)
        desugar(bound)
        from suql.qast import SummaryCall

        assert isinstance(bound.projections[0].expr, SummaryCall)


class TestEnumOverload:
    def test_out_of_domain_literal_becomes_classify(self, catalog):
        q = bind(parse("SELECT name FROM restaurants WHERE 'coffee' = ANY(cuisines)"), catalog)
        rewritten = rewrite_enum_eq(q, catalog)
        assert isinstance(rewritten.where, ClassifyMembership)
        assert rewritten.where.literal == "coffee"

    def test_in_domain_literal_stays_equality(self, catalog):
        q = bind(parse("SELECT name FROM restaurants WHERE price = 'cheap'"), catalog)
        rewritten = rewrite_enum_eq(q, catalog)
        assert isinstance(rewritten.where, Cmp)

    def test_out_of_domain_scalar_equality(self, catalog):
        q = bind(parse("SELECT name FROM restaurants WHERE price = 'inexpensive'"), catalog)
        rewritten = rewrite_enum_eq(q, catalog)
        assert isinstance(rewritten.where, ClassifyMembership)

    def test_reversed_operand_order(self, catalog):
        q = bind(parse("SELECT name FROM restaurants WHERE 'inexpensive' = price"), catalog)
        rewritten = rewrite_enum_eq(q, catalog)
        assert isinstance(rewritten.where, ClassifyMembership)

    def test_non_enum_columns_untouched(self, catalog):
        q = bind(parse("SELECT name FROM restaurants WHERE name = 'Daigo'"), catalog)
        assert isinstance(rewrite_enum_eq(q, catalog).where, Cmp)


def _truth_table_check(pred, table):
    """DNF must agree with the original on every row of the value table."""
    clauses = to_dnf(pred, max_clauses=4096)
    for row in table.rows:
        original = eval_predicate(pred, table, row)
        via_dnf = any(
            all(eval_predicate(atom, table, row) for atom in clause)
            for clause in clauses
        )
        assert via_dnf == original, print_predicate(pred)


class TestDnf:
    def test_random_predicates_semantically_equivalent(self):
        rng = random.Random(77)
        schema = parse_ddl("CREATE TABLE t (c0 INT, c1 INT, c2 INT, c3 INT);")
        columns = ["c0", "c1", "c2", "c3"]
        # every assignment over a small domain acts as the truth table
        rows = [
            [a, b, c, d]
            for a in range(3) for b in range(3) for c in range(3) for d in range(3)
        ]
        table = Table(schema, rows)
        for _ in range(200):
            pred = random_predicate(rng, columns)
            _truth_table_check(pred, table)

    def test_negated_comparison_stays_wrapped(self):
        # flipping '<' to '>=' would change behavior on Null operands
        pred = Not(Cmp(ColumnRef("a"), "<", Literal(1)))
        clauses = to_dnf(pred)
        assert clauses == [[Not(Cmp(ColumnRef("a"), "<", Literal(1)))]]

    def test_de_morgan(self):
        pred = Not(And([Cmp(ColumnRef("a"), "=", Literal(1)),
                        Cmp(ColumnRef("b"), "=", Literal(2))]))
        clauses = to_dnf(pred)
        assert len(clauses) == 2

    def test_blowup_raises(self):
        # (a0 OR b0) AND (a1 OR b1) AND ... grows exponentially
        big = And(
            [
                Or([Cmp(ColumnRef(f"a{i}"), "=", Literal(0)),
                    Cmp(ColumnRef(f"b{i}"), "=", Literal(0))])
                for i in range(8)
            ]
        )
        with pytest.raises(DnfBlowup):
            to_dnf(big, max_clauses=64)

    def test_plan_falls_back_on_blowup(self, catalog):
        parts = " AND ".join(
            f"(name = 'x{i}' OR location = 'y{i}')" for i in range(8)
        )
        q = bind(parse(f"SELECT name FROM restaurants WHERE {parts}"), catalog)
        tree = plan(q, catalog, EngineConfig())
        assert tree.dnf is None
        assert tree.fallback_predicate is not None
        assert "DNF cap exceeded" in explain(tree)


class TestOrdering:
    def test_cost_classes(self, catalog):
        structured = Cmp(ColumnRef("name"), "=", Literal("x"))
        answer = Cmp(AnswerCall(ColumnRef("reviews"), "q?"), "=", Literal("Yes"))
        assert classify_cost(structured) is CostClass.STRUCTURED
        assert classify_cost(answer) is CostClass.ANSWER
        q = bind(parse("SELECT name FROM restaurants WHERE 'coffee' = ANY(cuisines)"), catalog)
        overloaded = rewrite_enum_eq(q, catalog).where
        assert classify_cost(overloaded) is CostClass.ENUM_OVERLOAD

    def test_sort_is_stable_within_class(self):
        a = CostedAtom(Cmp(ColumnRef("a"), "=", Literal(1)), CostClass.STRUCTURED)
        b = CostedAtom(Cmp(ColumnRef("b"), "=", Literal(2)), CostClass.STRUCTURED)
        answer = CostedAtom(
            Cmp(AnswerCall(ColumnRef("r"), "q?"), "=", Literal("Yes")), CostClass.ANSWER
        )
        assert order_conjuncts([answer, a, b]) == [a, b, answer]
        assert order_conjuncts([b, a, answer]) == [b, a, answer]

    def test_structured_before_answer_in_plan(self, table2):
        q = bind(parse(table2.queries[3]), table2.catalog)
        tree = plan(q, table2.catalog, EngineConfig())
        costs = [a.cost for a in tree.dnf[0]]
        assert costs == sorted(costs)
        assert costs[0] is CostClass.STRUCTURED
        assert costs[-1] is CostClass.ANSWER


class TestRetrieval:
    def test_constraints_deduplicated_across_clauses(self, catalog):
        q = bind(
            parse(
                "SELECT name FROM restaurants WHERE "
                "(price = 'cheap' AND answer(reviews, 'is it quiet?') = 'Yes') "
                "OR (price = 'luxury' AND answer(reviews, 'is it quiet?') = 'Yes')"
            ),
            catalog,
        )
        tree = plan(q, catalog, EngineConfig())
        assert len(tree.prune.constraints) == 1
        assert tree.prune.k == 20

    def test_two_answer_filters_two_constraints(self, restaurants):
        q = bind(parse(restaurants.queries[3]), restaurants.catalog)
        tree = plan(q, restaurants.catalog, EngineConfig())
        assert len(tree.prune.constraints) == 2
        # the structured location atom sorts before both answer atoms
        assert tree.dnf[0][0].cost is CostClass.STRUCTURED

    def test_no_answer_filters_no_prune(self, catalog):
        q = bind(parse("SELECT name FROM restaurants WHERE price = 'cheap'"), catalog)
        tree = plan(q, catalog, EngineConfig())
        assert tree.prune is None

    def test_prune_disabled_by_config(self, table2):
        q = bind(parse(table2.queries[1]), table2.catalog)
        tree = plan(q, table2.catalog, EngineConfig(prune=False))
        assert tree.prune is None

    def test_answer_in_projection_only_attaches_no_constraint(self, catalog):
        q = bind(parse("SELECT summary(reviews) FROM restaurants"), catalog)
        tree = plan(q, catalog, EngineConfig())
        assert tree.prune is None


class TestLazy:
    def test_limit_without_order_is_lazy(self, catalog):
        q = bind(parse("SELECT name FROM restaurants LIMIT 3"), catalog)
        assert plan(q, catalog, EngineConfig()).lazy

    def test_order_by_disables_lazy(self, catalog):
        q = bind(parse("SELECT name FROM restaurants ORDER BY rating LIMIT 3"), catalog)
        assert not plan(q, catalog, EngineConfig()).lazy

    def test_aggregate_disables_lazy(self, catalog):
        q = bind(parse("SELECT COUNT(*) FROM restaurants LIMIT 1"), catalog)
        assert not plan(q, catalog, EngineConfig()).lazy

    def test_config_switch(self, catalog):
        q = bind(parse("SELECT name FROM restaurants LIMIT 3"), catalog)
        assert not plan(q, catalog, EngineConfig(lazy=False)).lazy


class TestExplain:
    def test_explain_surfaces(self, table2):
        q = bind(parse(table2.queries[3]), table2.catalog)
        text = explain(plan(q, table2.catalog, EngineConfig()))
        assert "SCAN table" in text
        assert "RETRIEVAL PRUNE k=20" in text
        assert text.index("[STRUCTURED]") < text.index("[ANSWER]")
