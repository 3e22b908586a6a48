#!/usr/bin/env python3
"""Batch QA evaluation: run the bundled 12-example batch and print the
per-example EM / token-F1 / substring scores plus the aggregate report."""

from suql import CachedAnswerer, EngineConfig, IndexSet, MockAnswerer, QueryRuntime
from suql.fixtures import load_fixture
from suql.metrics import EvalExample, run_batch


def main() -> None:
    fx = load_fixture("qa12")
    indexes = IndexSet()
    for table in fx.catalog.tables.values():
        indexes.build_all(table)
    runtime = QueryRuntime(
        CachedAnswerer(MockAnswerer(fx.rules)), indexes, EngineConfig()
    )
    examples = [EvalExample.from_json(e) for e in fx.extras["examples"]]
    report = run_batch(examples, fx.catalog, runtime)

    for r in report.results:
        flag = " (flagged)" if r.error else ""
        print(
            f"{r.example_id}: pred={r.pred!r} gold={r.gold!r} "
            f"EM={r.em:.0f} F1={r.f1:.3f} sub={r.substring}{flag}"
        )
    print()
    print(f"aggregate: EM={report.em:.4f} F1={report.f1:.4f} "
          f"substring={report.substring_rate:.4f}")
    print(f"report digest: {report.digest()}")


if __name__ == "__main__":
    main()
