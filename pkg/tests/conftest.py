import sys
import os

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from suql import (
    CachedAnswerer,
    EngineConfig,
    IndexSet,
    MockAnswerer,
    QueryRuntime,
)
from suql.fixtures import load_fixture


def build_runtime(fixture, **config_overrides) -> QueryRuntime:
    indexes = IndexSet()
    for table in fixture.catalog.tables.values():
        indexes.build_all(table)
    answerer = CachedAnswerer(MockAnswerer(fixture.rules, fixture.classify_table))
    return QueryRuntime(answerer, indexes, EngineConfig(**config_overrides))


@pytest.fixture(scope="session")
def table2():
    return load_fixture("table2")


@pytest.fixture(scope="session")
def restaurants():
    return load_fixture("restaurants")


@pytest.fixture(scope="session")
def stress():
    return load_fixture("stress")


@pytest.fixture(scope="session")
def qa12():
    return load_fixture("qa12")


@pytest.fixture(scope="session")
def convo20():
    return load_fixture("convo20")


@pytest.fixture()
def table2_runtime(table2):
    return build_runtime(table2)


@pytest.fixture()
def restaurants_runtime(restaurants):
    return build_runtime(restaurants)
