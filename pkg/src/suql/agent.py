"""Conversational layer: dialogue state, two-stage parsing, retried
execution and the searched-statement / no-result response contract."""

from __future__ import annotations

import copy
import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import Any, Optional, Protocol, Sequence

from .binder import BindError, bind
from .catalog import Catalog
from .config import EngineConfig
from .executor import QueryRuntime, ResultSet, run_query
from .lexer import SuqlSyntaxError
from .parser import parse
from .planner import SUMMARY_QUESTION, explain
from .qast import (
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
    Query,
    TableRef,
    print_expr,
    print_query,
    walk_expr,
)
from .runtime import render_prompt
from .types import TypeKind, render_value


@dataclass
class Turn:
    user_utterance: str
    agent_utterance: str
    suql: Optional[str] = None
    result_digest: Optional[str] = None

    def to_json(self) -> dict:
        out = {"user_utterance": self.user_utterance, "agent_utterance": self.agent_utterance}
        if self.suql is not None:
            out["suql"] = self.suql
        if self.result_digest is not None:
            out["result_digest"] = self.result_digest
        return out

    @staticmethod
    def from_json(data: dict) -> "Turn":
        return Turn(
            data["user_utterance"],
            data["agent_utterance"],
            data.get("suql"),
            data.get("result_digest"),
        )


@dataclass
class DialogueState:
    session_id: str
    turns: list[Turn] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"session_id": self.session_id, "turns": [t.to_json() for t in self.turns]}

    @staticmethod
    def from_json(data: dict) -> "DialogueState":
        return DialogueState(
            data["session_id"], [Turn.from_json(t) for t in data.get("turns", [])]
        )


class AgentBackend(Protocol):
    """Classification / parsing / reply generation behind the agent."""

    def needs_knowledge(self, history: Sequence[Turn], utterance: str) -> bool: ...

    def parse_utterance(
        self, history: Sequence[Turn], utterance: str, schema_prompt: str
    ) -> Optional[str]: ...

    def relax_query(
        self, utterance: str, failed_queries: Sequence[str], schema_prompt: str
    ) -> Optional[str]: ...

    def generate_reply(
        self, history: Sequence[Turn], utterance: str, results: Optional[ResultSet]
    ) -> Optional[str]: ...


_GREETING_RE = re.compile(
    r"^\s*(hi|hello|hey|thanks|thank you|bye|goodbye|good (morning|evening|afternoon))\b[!. ]*$",
    re.IGNORECASE,
)


class MockAgentBackend:
    """Deterministic backend driven by fixture lookup tables.

    `parser_table` maps an utterance to the ordered list of SUQL texts to
    try (first is the parse, the rest are relaxations).
    """

    def __init__(
        self,
        classifier_table: Optional[dict[str, bool]] = None,
        parser_table: Optional[dict[str, list[str]]] = None,
    ):
        self.classifier_table = classifier_table or {}
        self.parser_table = parser_table or {}

    def needs_knowledge(self, history: Sequence[Turn], utterance: str) -> bool:
        if utterance in self.classifier_table:
            return self.classifier_table[utterance]
        return not _GREETING_RE.match(utterance)

    def parse_utterance(self, history, utterance, schema_prompt) -> Optional[str]:
        attempts = self.parser_table.get(utterance)
        return attempts[0] if attempts else None

    def relax_query(self, utterance, failed_queries, schema_prompt) -> Optional[str]:
        attempts = self.parser_table.get(utterance, [])
        idx = len(failed_queries)
        return attempts[idx] if idx < len(attempts) else None

    def generate_reply(self, history, utterance, results) -> Optional[str]:
        return None  # force the templated fallback path


class HttpAgentBackend:
    """Prompted backend over the text runtime's completion endpoint."""

    def __init__(self, answerer, examples: Optional[list[dict]] = None, result_limit: int = 3):
        self.answerer = answerer  # HttpAnswerer (or anything with .complete)
        self.examples = examples or []
        self.result_limit = result_limit

    def needs_knowledge(self, history, utterance) -> bool:
        prompt = render_prompt(
            "input_classifier",
            history=[t.to_json() for t in history],
            utterance=utterance,
        )
        try:
            reply = self.answerer.complete(prompt)
        except Exception:
            return True  # safer to search
        return "no" not in reply.strip().casefold()[:4]

    def parse_utterance(self, history, utterance, schema_prompt) -> Optional[str]:
        prompt = render_prompt(
            "semantic_parser",
            schema=schema_prompt,
            examples=self.examples,
            history=[t.to_json() for t in history],
            utterance=utterance,
            result_limit=self.result_limit,
        )
        return self.answerer.complete(prompt).strip().splitlines()[0]

    def relax_query(self, utterance, failed_queries, schema_prompt) -> Optional[str]:
        prompt = render_prompt(
            "no_result_recovery",
            schema=schema_prompt,
            question=utterance,
            failed_queries=list(failed_queries),
        )
        return self.answerer.complete(prompt).strip().splitlines()[0]

    def generate_reply(self, history, utterance, results) -> Optional[str]:
        return None  # reply generation stays templated; prompt hook kept simple


# ---------------------------------------------------------------------------
# Searched-statement rendering (deterministic, from the executed AST)

def _phrase_for_atom(atom: Predicate) -> Optional[str]:
    if isinstance(atom, Not):
        inner = _phrase_for_atom(atom.pred)
        return f"not ({inner})" if inner else None
    if isinstance(atom, Cmp):
        from .qast import SummaryCall

        if any(
            isinstance(n, SummaryCall)
            for side in (atom.left, atom.right)
            for n in walk_expr(side)
        ):
            return None  # summary filters carry no checkable condition
        answer = next(
            (
                n
                for side in (atom.left, atom.right)
                for n in walk_expr(side)
                if isinstance(n, AnswerCall)
            ),
            None,
        )
        if answer is not None:
            other = atom.right if answer in list(walk_expr(atom.left)) else atom.left
            question = answer.question.rstrip("?")
            if question == SUMMARY_QUESTION.rstrip("?"):
                return None
            return f"{question}: {print_expr(other)}"
        return f"{print_expr(atom.left)} {atom.op.lower()} {print_expr(atom.right)}"
    if isinstance(atom, InList):
        items = ", ".join(print_expr(i) for i in atom.items)
        return f"{print_expr(atom.expr)} in ({items})"
    if isinstance(atom, AnyEq):
        return f"{print_expr(atom.literal)} among {print_expr(atom.column)}"
    if isinstance(atom, ArrayContains):
        items = ", ".join(print_expr(i) for i in atom.items)
        return f"{print_expr(atom.column)} containing {items}"
    if isinstance(atom, ClassifyMembership):
        return f"'{atom.literal}' among {print_expr(atom.column)}"
    return None


def _collect_phrases(pred: Predicate) -> list[str]:
    if isinstance(pred, And):
        out = []
        for item in pred.items:
            out.extend(_collect_phrases(item))
        return out
    if isinstance(pred, Or):
        parts = []
        for item in pred.items:
            sub = _collect_phrases(item)
            if sub:
                parts.append(" and ".join(sub))
        return [" or ".join(parts)] if parts else []
    phrase = _phrase_for_atom(pred)
    return [phrase] if phrase else []


def render_searched(query: Query) -> str:
    """The machine-checkable searched-statement for a query."""
    tables = [
        item.table for item in query.from_items if isinstance(item, TableRef)
    ]
    target = tables[0] if tables else "the database"
    if query.where is None:
        return f"I searched for {target}."
    phrases = _collect_phrases(query.where)
    if not phrases:
        return f"I searched for {target}."
    return f"I searched for {target} with " + "; ".join(phrases) + "."


NO_RESULT_MARKER = "no results"


# ---------------------------------------------------------------------------
# Agent

@dataclass
class ChatTrace:
    needs_knowledge: bool
    suql: Optional[str] = None
    explain: Optional[str] = None
    stats: Optional[dict] = None
    attempts: int = 0
    searched: Optional[str] = None
    error: Optional[str] = None
    failed_queries: list[str] = field(default_factory=list)
    results: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "needs_knowledge": self.needs_knowledge,
            "suql": self.suql,
            "explain": self.explain,
            "stats": self.stats,
            "attempts": self.attempts,
            "searched": self.searched,
            "error": self.error,
            "failed_queries": self.failed_queries,
        }  # results intentionally excluded: carried at the top level of /chat


class Agent:
    def __init__(
        self,
        catalog: Catalog,
        runtime: QueryRuntime,
        backend: AgentBackend,
        config: Optional[EngineConfig] = None,
    ):
        self.catalog = catalog
        self.runtime = runtime
        self.backend = backend
        self.config = config or runtime.config
        self.schema_prompt = build_schema_prompt(catalog, self.config.enum_inline_threshold)

    # -- stages -------------------------------------------------------------

    def needs_knowledge(self, state: DialogueState, utterance: str) -> bool:
        history = state.turns[-self.config.history_window :]
        try:
            return self.backend.needs_knowledge(history, utterance)
        except Exception:
            return True

    def parse_utterance(self, state: DialogueState, utterance: str) -> Optional[Query]:
        history = state.turns[-self.config.history_window :]
        text = self.backend.parse_utterance(history, utterance, self.schema_prompt)
        for attempt in range(2):  # one reformulation on a failed parse
            if text is None:
                return None
            try:
                query = bind(parse(text), self.catalog)
                return self._clamp_limit(query)
            except (SuqlSyntaxError, BindError):
                if attempt == 0:
                    text = self.backend.relax_query(utterance, [text], self.schema_prompt)
                else:
                    return None
        return None

    def _clamp_limit(self, query: Query) -> Query:
        from .planner import _query_has_aggregate

        if _query_has_aggregate(query):
            return query
        if query.limit is None or query.limit > self.config.result_limit:
            query = copy.deepcopy(query)
            query.limit = self.config.result_limit
        return query

    def execute_with_retry(
        self, utterance: str, query: Query
    ) -> tuple[ResultSet, int, Query, list[str]]:
        """Re-plan with relaxed queries while results are empty; stops on the
        first nonempty result or when the retry budget is spent."""
        budget = self.config.retry_budget
        failed: list[str] = []
        current = query
        attempts = 0
        while True:
            attempts += 1
            _, result = run_query(current, self.catalog, self.runtime)
            if result.rows or attempts > budget:
                return result, attempts, current, failed
            failed.append(print_query(current))
            text = self.backend.relax_query(utterance, failed, self.schema_prompt)
            if text is None:
                return result, attempts, current, failed
            try:
                current = self._clamp_limit(bind(parse(text), self.catalog))
            except (SuqlSyntaxError, BindError):
                return result, attempts, current, failed

    def respond(
        self,
        state: DialogueState,
        query: Optional[Query],
        results: Optional[ResultSet],
        utterance: str,
    ) -> str:
        if query is None or results is None:
            return "Sorry, I could not turn that into a database query. Could you rephrase?"
        searched = render_searched(query)
        if not results.rows:
            return f"{searched} I found {NO_RESULT_MARKER} for that."
        generated = None
        try:
            generated = self.backend.generate_reply(state.turns, utterance, results)
        except Exception:
            generated = None
        body = generated if generated else _templated_reply(results)
        return f"{searched} {body}"

    # -- composition --------------------------------------------------------

    def chat_turn(self, state: DialogueState, utterance: str) -> tuple[str, DialogueState, ChatTrace]:
        trace = ChatTrace(needs_knowledge=False)
        if not self.needs_knowledge(state, utterance):
            reply = _smalltalk_reply(utterance)
            state.turns.append(Turn(utterance, reply))
            return reply, state, trace
        trace.needs_knowledge = True
        query = self.parse_utterance(state, utterance)
        if query is None:
            trace.error = "parse_failure"
            reply = self.respond(state, None, None, utterance)
            state.turns.append(Turn(utterance, reply))
            return reply, state, trace
        results, attempts, executed, failed = self.execute_with_retry(utterance, query)
        from .planner import plan as build_plan

        tree = build_plan(executed, self.catalog, self.config)
        trace.suql = print_query(executed)
        trace.explain = explain(tree)
        trace.stats = results.stats.to_json()
        trace.results = results.to_json()
        trace.attempts = attempts
        trace.failed_queries = failed
        trace.searched = render_searched(executed)
        reply = self.respond(state, executed, results, utterance)
        digest = hashlib.sha256(
            json.dumps(results.to_json(), sort_keys=True).encode()
        ).hexdigest()
        state.turns.append(Turn(utterance, reply, trace.suql, digest))
        return reply, state, trace


def _smalltalk_reply(utterance: str) -> str:
    return "Hi! How can I help you?"


def _templated_reply(results: ResultSet) -> str:
    names = [n for n, _ in results.columns]

    def pick(row, *wanted):
        out = []
        for w in wanted:
            for i, n in enumerate(names):
                if n.casefold() == w:
                    if row[i] is not None:
                        out.append(f"{n}: {render_value(row[i])}")
                    break
        return out

    fragments = []
    for row in results.rows:
        parts = pick(row, "name", "rating", "address")
        if not parts:
            parts = [
                f"{n}: {render_value(v)}"
                for n, v in zip(names, row)
                if v is not None
            ][:3]
        fragments.append("(" + ", ".join(parts) + ")") if parts else None
    listing = "; ".join(f for f in fragments if f)
    count = len(results.rows)
    noun = "result" if count == 1 else "results"
    return f"I found {count} {noun}: {listing}."


def build_schema_prompt(catalog: Catalog, enum_inline_threshold: int = 10) -> str:
    """CREATE TABLE rendering of the catalog for parser prompts.

    Enum domains are inlined only up to the configured threshold.
    """
    out = []
    for table in catalog.tables.values():
        cols = []
        for name, ctype in table.schema.columns:
            rendered = ctype.render()
            if ctype.kind is TypeKind.ENUM and len(ctype.enum.values) > enum_inline_threshold:
                rendered = "TEXT"
            annotation = table.schema.enum_annotations.get(name)
            if annotation is not None and len(annotation.values) <= enum_inline_threshold:
                vals = ", ".join("'%s'" % v for v in annotation.values)
                rendered += f" /* one of: {vals} */"
            cols.append(f"    {_q(name)} {rendered}")
        out.append(
            f"CREATE TABLE {_q(table.schema.name)} (\n" + ",\n".join(cols) + "\n);"
        )
    return "\n".join(out)


def _q(name: str) -> str:
    if name.isidentifier() and name == name.lower():
        return name
    return '"%s"' % name
