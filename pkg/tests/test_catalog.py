import pytest

from suql import Catalog, SuqlSyntaxError, parse_ddl
from suql.catalog import LoadError, Table, load_csv, load_jsonl, load_rows, table_to_jsonl
from suql.types import EnumDomain, TypeKind


DDL = """
CREATE TABLE restaurants (
    name TEXT,
    cuisines TEXT[],
    price ENUM('cheap', 'moderate'),
    rating NUMERIC(2,1),
    num_reviews NUMBER,
    reviews FREE_TEXT[]
);
"""


class TestParseDdl:
    def test_columns_and_types(self):
        schema = parse_ddl(DDL)
        assert schema.name == "restaurants"
        kinds = {c: t.kind for c, t in schema.columns}
        assert kinds["cuisines"] is TypeKind.ARRAY
        assert kinds["price"] is TypeKind.ENUM
        assert kinds["num_reviews"] is TypeKind.INT  # NUMBER maps to INT
        assert schema.column_type("rating").precision == 2

    def test_free_text_columns(self):
        schema = parse_ddl(DDL)
        assert schema.free_text_columns() == ["reviews"]

    def test_quoted_column_names(self):
        schema = parse_ddl('CREATE TABLE "table" ("Event year Info" FREE_TEXT[]);')
        assert schema.name == "table"
        assert schema.columns[0][0] == "Event year Info"

    def test_unknown_type_rejected(self):
        with pytest.raises(SuqlSyntaxError):
            parse_ddl("CREATE TABLE t (x BLOB);")

    def test_enum_domain_registered(self):
        schema = parse_ddl(DDL)
        domain = schema.enum_domain_for("price")
        assert domain.values == ("cheap", "moderate")


class TestLoading:
    def test_load_rows_coerces_and_defaults(self):
        schema = parse_ddl(DDL)
        table = load_rows(schema, [{"name": "A", "rating": "4.5", "num_reviews": "1,200"}])
        row = table.rows[0]
        assert row[3] == pytest.approx(4.5)
        assert row[4] == 1200
        assert row[1] is None  # missing field becomes Null

    def test_load_error_carries_row_and_column(self):
        schema = parse_ddl(DDL)
        with pytest.raises(LoadError) as err:
            load_rows(schema, [{"name": "A"}, {"rating": "not-a-number"}])
        assert "row 1" in str(err.value)
        assert "rating" in str(err.value)

    def test_load_csv(self):
        schema = parse_ddl("CREATE TABLE t (a INT, b TEXT);")
        table = load_csv(schema, "a,b\n1,x\n2,y\n")
        assert table.rows == [[1, "x"], [2, "y"]]

    def test_load_jsonl_bad_line(self):
        schema = parse_ddl("CREATE TABLE t (a INT);")
        with pytest.raises(LoadError):
            load_jsonl(schema, '{"a": 1}\nnot json\n')


class TestPersistence:
    def test_schema_json_round_trip(self):
        schema = parse_ddl(DDL)
        from suql.catalog import TableSchema

        assert TableSchema.from_json(schema.to_json()) == schema

    def test_enum_annotations_survive_json(self):
        from suql.catalog import TableSchema

        schema = parse_ddl("CREATE TABLE t (c TEXT[]);")
        annotated = TableSchema(
            schema.name, schema.columns, {"c": EnumDomain("c", ("x", "y"))}
        )
        restored = TableSchema.from_json(annotated.to_json())
        assert restored.enum_domain_for("c").values == ("x", "y")

    def test_catalog_save_load_round_trip(self, tmp_path):
        schema = parse_ddl(DDL)
        table = load_rows(
            schema,
            [{"name": "A", "cuisines": ["thai"], "price": "cheap", "rating": "4.0",
              "num_reviews": 5, "reviews": ["nice spot"]}],
        )
        catalog = Catalog()
        catalog.add(table)
        catalog.save(str(tmp_path))
        reloaded = Catalog.load(str(tmp_path))
        assert reloaded.get("restaurants").rows == table.rows

    def test_jsonl_round_trip(self):
        schema = parse_ddl("CREATE TABLE t (a INT, b TEXT[]);")
        table = load_rows(schema, [{"a": 1, "b": ["x", "y"]}, {"a": None}])
        text = table_to_jsonl(table)
        assert load_jsonl(schema, text).rows == table.rows

    def test_find_column_case_insensitive_fallback(self):
        schema = parse_ddl('CREATE TABLE t ("Name" TEXT);')
        assert schema.find_column("name")[0] == "Name"
        assert schema.find_column("Name")[0] == "Name"
