#!/usr/bin/env python3
"""Tour of the query language: parsing, printing, binding, execution.

Runs entirely offline on the bundled corpora and the rule-driven mock
answerer. Each section prints the query, then what the engine did with it.
"""

from suql import (
    CachedAnswerer,
    EngineConfig,
    IndexSet,
    MockAnswerer,
    QueryRuntime,
    bind,
    parse,
    print_query,
    run_query,
)
from suql.fixtures import load_fixture


def main() -> None:
    fx = load_fixture("table2")
    indexes = IndexSet()
    for table in fx.catalog.tables.values():
        indexes.build_all(table)
    runtime = QueryRuntime(
        CachedAnswerer(MockAnswerer(fx.rules)), indexes, EngineConfig()
    )

    print("=== The bundled Olympic flag-bearer corpus: six query shapes ===\n")
    for text in fx.queries:
        ast = bind(parse(text), fx.catalog)
        _, result = run_query(ast, fx.catalog, runtime)
        print(print_query(ast))
        print(f"  -> rows: {result.rows}")
        print(f"  -> answer calls: {result.stats.answer_calls}\n")

    print("=== Pretty-printing is canonical: print(parse(q)) round-trips ===\n")
    text = fx.queries[3]
    round_tripped = print_query(parse(print_query(parse(text))))
    assert parse(round_tripped) == parse(print_query(parse(text)))
    print(round_tripped)


if __name__ == "__main__":
    main()
