"""SUQL engine: SQL extended with free-text `answer` and `summary` primitives.

Typical embedding:

    from suql import Catalog, EngineConfig, QueryRuntime, parse, bind, run_query

    catalog = Catalog.load("db_dir")
    runtime = QueryRuntime(answerer, indexes, EngineConfig())
    tree, result = run_query(bind(parse(text), catalog), catalog, runtime)
"""

from .agent import Agent, DialogueState, MockAgentBackend, Turn, render_searched
from .binder import BindError, bind
from .catalog import Catalog, Table, TableSchema, load_csv, load_jsonl, load_rows, parse_ddl
from .config import EngineConfig
from .executor import ExecStats, QueryRuntime, ResultSet, execute, run_query
from .lexer import SuqlSyntaxError, tokenize
from .parser import parse
from .planner import PlanTree, explain, plan
from .qast import Query, print_query
from .retrieval import HashedBagEmbedder, IndexSet, build_index, linearize_row, sim
from .runtime import CachedAnswerer, HttpAnswerer, MockAnswerer, MockRule
from .types import EnumDomain, SemanticType, TypeKind, cast_value

__all__ = [
    "Agent",
    "BindError",
    "DialogueState",
    "MockAgentBackend",
    "Turn",
    "render_searched",
    "CachedAnswerer",
    "Catalog",
    "EngineConfig",
    "EnumDomain",
    "ExecStats",
    "HashedBagEmbedder",
    "HttpAnswerer",
    "IndexSet",
    "MockAnswerer",
    "MockRule",
    "PlanTree",
    "Query",
    "QueryRuntime",
    "ResultSet",
    "SemanticType",
    "SuqlSyntaxError",
    "Table",
    "TableSchema",
    "TypeKind",
    "bind",
    "build_index",
    "cast_value",
    "execute",
    "explain",
    "linearize_row",
    "load_csv",
    "load_jsonl",
    "load_rows",
    "parse",
    "parse_ddl",
    "plan",
    "print_query",
    "run_query",
    "sim",
    "tokenize",
]

__version__ = "0.1.0"
