"""Free-text runtime: answer / summary / classify / filter verification.

Two backends share one interface: a deterministic rule-driven mock (the whole
test suite runs on it, offline) and an HTTP chat-completion backend. Results
are cached so identical calls within a session hit the backend once.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Protocol, Sequence

import jinja2
import requests

from .config import EngineConfig
from .types import EnumDomain

NO_INFO = "no info"

_PROMPT_DIR = os.path.join(os.path.dirname(__file__), "prompts")
_env = jinja2.Environment(
    loader=jinja2.FileSystemLoader(_PROMPT_DIR),
    keep_trailing_newline=True,
)


def render_prompt(name: str, **context) -> str:
    return _env.get_template(f"{name}.j2").render(**context)


def prompt_digest(name: str) -> str:
    """SHA-256 of the raw template; tests pin these so wording drift shows."""
    with open(os.path.join(_PROMPT_DIR, f"{name}.j2"), "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


class RuntimeError_(Exception):
    pass


class TransportError(RuntimeError_):
    pass


class AuthError(RuntimeError_):
    pass


def normalize_answer_text(text: str) -> str:
    """Comparison normalization for answer filters: trim + casefold."""
    return text.strip().casefold()


def compare_answer(answer: str, op: str, literal: Any) -> bool:
    """Apply `answer <op> literal` with the executor's normalization rules."""
    if op in ("=", "!=", "ILIKE"):
        lhs = normalize_answer_text(answer)
        rhs = normalize_answer_text(str(literal))
        hit = lhs == rhs
        return hit if op != "!=" else not hit
    # Ordering comparisons: numeric when both sides parse, else lexicographic.
    try:
        lhs_n, rhs_n = float(answer), float(literal)
        lhs, rhs = lhs_n, rhs_n
    except (TypeError, ValueError):
        lhs, rhs = normalize_answer_text(answer), normalize_answer_text(str(literal))
    if op == "<":
        return lhs < rhs
    if op == "<=":
        return lhs <= rhs
    if op == ">":
        return lhs > rhs
    if op == ">=":
        return lhs >= rhs
    raise RuntimeError_(f"unsupported filter operator {op!r}")


class AnswererBackend(Protocol):
    name: str

    def answer(self, documents: Sequence[str], question: str,
               type_hint: str = "") -> str: ...

    def filter_check(self, documents: Sequence[str], question: str, op: str,
                     literal: Any) -> bool: ...

    def classify(self, value: str, domain: EnumDomain) -> set[str]: ...


# ---------------------------------------------------------------------------
# Mock backend

@dataclass(frozen=True)
class MockRule:
    doc_pattern: str       # regex, matched case-insensitively against the docs
    question_pattern: str  # regex matched against the question
    response: str


class MockAnswerer:
    """Deterministic test double: first matching rule wins, default "no info".

    classify() is driven by a seeded synonym table mapping literals to domain
    values; exact domain members always classify to themselves.
    """

    name = "mock"

    def __init__(
        self,
        rules: Sequence[MockRule] = (),
        classify_table: Optional[dict[str, Sequence[str]]] = None,
    ):
        self.rules = list(rules)
        self.classify_table = {
            k.casefold(): list(v) for k, v in (classify_table or {}).items()
        }

    def answer(self, documents: Sequence[str], question: str, type_hint: str = "") -> str:
        if not documents:
            return NO_INFO
        blob = "\n".join(documents)
        for rule in self.rules:
            if re.search(rule.question_pattern, question, re.IGNORECASE) and re.search(
                rule.doc_pattern, blob, re.IGNORECASE
            ):
                return rule.response
        return NO_INFO

    def filter_check(self, documents: Sequence[str], question: str, op: str, literal: Any) -> bool:
        return compare_answer(self.answer(documents, question), op, literal)

    def classify(self, value: str, domain: EnumDomain) -> set[str]:
        out: set[str] = set()
        canon = domain.canonical(value)
        if canon is not None:
            out.add(canon)
        for candidate in self.classify_table.get(value.casefold(), []):
            canon = domain.canonical(candidate)
            if canon is not None:
                out.add(canon)
        return out


# ---------------------------------------------------------------------------
# HTTP chat-completion backend

Transport = Callable[[str, dict, dict, float], "requests.Response"]


def _default_transport(url: str, headers: dict, payload: dict, timeout: float):
    return requests.post(url, headers=headers, json=payload, timeout=timeout)


class HttpAnswerer:
    """Backend over an OpenAI-style chat-completions endpoint.

    Deterministic per session: temperature 0 plus the shared cache layer.
    Transient failures retry with backoff, capped at 3 attempts.
    """

    name = "http"
    MAX_ATTEMPTS = 3

    def __init__(self, config: EngineConfig, transport: Transport = _default_transport):
        if not config.llm_base_url:
            raise RuntimeError_("SUQL_LLM_BASE_URL is not configured")
        self.config = config
        self.transport = transport

    def complete(self, prompt: str) -> str:
        url = self.config.llm_base_url.rstrip("/") + "/chat/completions"
        headers = {"Content-Type": "application/json"}
        if self.config.llm_api_key:
            headers["Authorization"] = f"Bearer {self.config.llm_api_key}"
        payload = {
            "model": self.config.llm_model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        last_error: Optional[Exception] = None
        for attempt in range(self.MAX_ATTEMPTS):
            try:
                response = self.transport(url, headers, payload, 60.0)
            except requests.RequestException as exc:
                last_error = exc
                time.sleep(min(2**attempt * 0.5, 4.0))
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"authentication failed ({response.status_code})")
            if response.status_code >= 500 or response.status_code == 429:
                last_error = TransportError(f"HTTP {response.status_code}")
                time.sleep(min(2**attempt * 0.5, 4.0))
                continue
            if response.status_code != 200:
                raise TransportError(f"HTTP {response.status_code}: {response.text[:200]}")
            try:
                body = response.json()
                return body["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError) as exc:
                raise TransportError(f"malformed completion response: {exc}") from None
        raise TransportError(f"transport failed after {self.MAX_ATTEMPTS} attempts: {last_error}")

    def answer(self, documents: Sequence[str], question: str, type_hint: str = "") -> str:
        if not documents:
            return NO_INFO
        prompt = render_prompt(
            "answer", question=question, documents=list(documents), type_prompt=type_hint
        )
        return self.complete(prompt).strip()

    def filter_check(self, documents: Sequence[str], question: str, op: str, literal: Any) -> bool:
        if not documents:
            return False
        prompt = render_prompt(
            "answer_filter",
            field="documents",
            query=question,
            operator=op,
            value=repr(literal),
            documents=list(documents),
        )
        verdict = self.complete(prompt).strip().casefold()
        return "incorrect" not in verdict and "correct" in verdict

    def classify(self, value: str, domain: EnumDomain) -> set[str]:
        out: set[str] = set()
        canon = domain.canonical(value)
        if canon is not None:
            out.add(canon)
        prompt = render_prompt(
            "enum_classifier",
            field_name=domain.name,
            predicted_field_value=value,
            choices=list(domain.values),
        )
        reply = self.complete(prompt)
        for match in re.findall(r"\d+", reply):
            idx = int(match)
            if 1 <= idx <= len(domain.values):
                out.add(domain.values[idx - 1])
            # out-of-range indices are dropped
        return out


# ---------------------------------------------------------------------------
# Cache wrapper

@dataclass
class RuntimeStats:
    backend_calls: int = 0
    cache_hits: int = 0


class CachedAnswerer:
    """Thread-safe memoizing wrapper; optionally persists to a JSONL file."""

    def __init__(self, backend: AnswererBackend, cache_path: Optional[str] = None):
        self.backend = backend
        self.name = backend.name
        self.cache_path = cache_path
        self.stats = RuntimeStats()
        self._lock = threading.Lock()
        self._cache: dict[str, Any] = {}
        if cache_path and os.path.exists(cache_path):
            with open(cache_path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        entry = json.loads(line)
                        self._cache[entry["key"]] = entry["result"]

    def _key(self, operation: str, *parts: Any) -> str:
        digest = hashlib.sha256(
            json.dumps([self.name, operation, *parts], sort_keys=True, default=str).encode()
        ).hexdigest()
        return digest

    def _memo(self, operation: str, key: str, compute: Callable[[], Any]) -> Any:
        with self._lock:
            if key in self._cache:
                self.stats.cache_hits += 1
                return self._cache[key]
        result = compute()
        with self._lock:
            if key not in self._cache:
                self.stats.backend_calls += 1
                self._cache[key] = result
                if self.cache_path:
                    with open(self.cache_path, "a", encoding="utf-8") as fh:
                        fh.write(
                            json.dumps(
                                {"key": key, "operation": operation, "result": _jsonable(result)},
                                sort_keys=True,
                            )
                            + "\n"
                        )
        return self._cache[key]

    def answer(self, documents: Sequence[str], question: str, type_hint: str = "") -> str:
        key = self._key("answer", list(documents), question, type_hint)
        return self._memo(
            "answer", key, lambda: self.backend.answer(documents, question, type_hint)
        )

    def summary(self, documents: Sequence[str]) -> str:
        from .planner import SUMMARY_QUESTION

        return self.answer(documents, SUMMARY_QUESTION)

    def filter_check(self, documents: Sequence[str], question: str, op: str, literal: Any) -> bool:
        key = self._key("filter", list(documents), question, op, literal)
        return self._memo(
            "filter",
            key,
            lambda: self.backend.filter_check(documents, question, op, literal),
        )

    def classify(self, value: str, domain: EnumDomain) -> set[str]:
        key = self._key("classify", value, domain.name, list(domain.values))
        result = self._memo(
            "classify",
            key,
            lambda: sorted(self.backend.classify(value, domain)),
        )
        return set(result)


def _jsonable(value: Any) -> Any:
    if isinstance(value, set):
        return sorted(value)
    return value
