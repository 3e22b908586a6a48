import random

import pytest

from gen import rand_query
from suql import SuqlSyntaxError, parse, print_query, tokenize
from suql.qast import (
    AnswerCall,
    AnyEq,
    ArrayContains,
    Cmp,
    ColumnRef,
    InList,
    Literal,
    Not,
    Or,
    SummaryCall,
    TableRef,
    UnnestRef,
)


class TestLexer:
    def test_basic_tokens(self):
        tokens = tokenize("SELECT a FROM t;")
        assert [t.type for t in tokens] == ["IDENT", "IDENT", "IDENT", "IDENT", "OP", "EOF"]

    def test_string_escapes(self):
        tokens = tokenize("'Gui''s vegan house'")
        assert tokens[0].value == "Gui's vegan house"

    def test_quoted_identifier_preserves_case(self):
        tokens = tokenize('"Event year Info"')
        assert tokens[0].type == "QIDENT"
        assert tokens[0].value == "Event year Info"

    def test_comments_skipped(self):
        tokens = tokenize("SELECT -- note\n1")
        assert [t.value for t in tokens[:2]] == ["SELECT", "1"]

    def test_multi_char_operators(self):
        values = [t.value for t in tokenize(":: @> <= != >=")]
        assert values[:5] == ["::", "@>", "<=", "!=", ">="]

    def test_unterminated_string_reports_position(self):
        with pytest.raises(SuqlSyntaxError) as err:
            tokenize("SELECT 'oops")
        assert err.value.position == 7

    def test_illegal_character(self):
        with pytest.raises(SuqlSyntaxError):
            tokenize("SELECT ~")


class TestParser:
    def test_unquoted_identifiers_fold_lowercase(self):
        q = parse("SELECT Name FROM Restaurants")
        assert q.projections[0].expr == ColumnRef("name")
        assert q.from_items[0].table == "restaurants"

    def test_quoted_identifiers_verbatim(self):
        q = parse('SELECT "Name" FROM t')
        assert q.projections[0].expr == ColumnRef("Name")

    def test_table_is_not_reserved(self):
        q = parse("SELECT x FROM table")
        assert q.from_items[0] == TableRef("table")

    def test_answer_and_summary_calls(self):
        q = parse("SELECT answer(reviews, 'is it good?'), summary(reviews) FROM t")
        assert q.projections[0].expr == AnswerCall(ColumnRef("reviews"), "is it good?")
        assert q.projections[1].expr == SummaryCall(ColumnRef("reviews"))

    def test_answer_question_must_be_nonempty(self):
        with pytest.raises(SuqlSyntaxError):
            parse("SELECT answer(reviews, '') FROM t")

    def test_in_list_and_any_and_contains(self):
        q = parse(
            "SELECT x FROM t WHERE a IN ('1', '2') AND 'j' = ANY(c) AND c @> ARRAY['x']"
        )
        atoms = q.where.items
        assert isinstance(atoms[0], InList)
        assert atoms[1] == AnyEq(Literal("j"), ColumnRef("c"))
        assert atoms[2] == ArrayContains(ColumnRef("c"), [Literal("x")])

    def test_not_parenthesized_predicate(self):
        q = parse("SELECT x FROM t WHERE NOT(name = 'Daigo')")
        assert q.where == Not(Cmp(ColumnRef("name"), "=", Literal("Daigo")))

    def test_or_precedence(self):
        q = parse("SELECT x FROM t WHERE a = 1 OR b = 2 AND c = 3")
        assert isinstance(q.where, Or)

    def test_unnest_from_item(self):
        q = parse("SELECT r FROM t, unnest(reviews) AS r")
        assert q.from_items[1] == UnnestRef(ColumnRef("reviews"), "r")

    def test_at_most_two_from_items(self):
        with pytest.raises(SuqlSyntaxError):
            parse("SELECT x FROM a, b, c")

    def test_limit_must_be_positive(self):
        with pytest.raises(SuqlSyntaxError):
            parse("SELECT x FROM t LIMIT 0")

    @pytest.mark.parametrize(
        "text",
        [
            "SELECT x FROM t GROUP BY x",
            "SELECT x FROM t HAVING x = 1",
            "SELECT x FROM a JOIN b ON a.x = b.x",
            "SELECT x FROM t UNION SELECT y FROM u",
            "SELECT DISTINCT x FROM t",
        ],
    )
    def test_unsupported_constructs_named(self, text):
        with pytest.raises(SuqlSyntaxError) as err:
            parse(text)
        assert "unsupported construct" in str(err.value)

    def test_error_carries_position(self):
        with pytest.raises(SuqlSyntaxError) as err:
            parse("SELEC x FROM t")
        assert err.value.position == 0


class TestRoundTrip:
    def test_random_ast_round_trips(self):
        rng = random.Random(1234)
        for _ in range(300):
            query = rand_query(rng)
            text = print_query(query)
            reparsed = parse(text)
            assert reparsed == query, text
            assert print_query(reparsed) == text

    def test_canonical_printer_is_fixed_point(self):
        text = (
            "select name from restaurants where answer(reviews, 'ok?') = 'Yes' "
            "and price = 'cheap' order by rating desc limit 3"
        )
        once = print_query(parse(text))
        assert print_query(parse(once)) == once
