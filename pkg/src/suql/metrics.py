"""QA evaluation: answer normalization, exact match, token F1, substring
match, and a batch runner that executes queries and emits a report."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
import string
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

from .binder import BindError, bind
from .catalog import Catalog
from .executor import QueryRuntime, ResultSet, run_query
from .lexer import SuqlSyntaxError
from .parser import parse
from .types import render_value

_ARTICLES = {"a", "an", "the"}


def normalize(text: str) -> str:
    """Lowercase, strip punctuation, drop articles, collapse whitespace."""
    text = text.lower()
    text = "".join(ch for ch in text if ch not in string.punctuation)
    tokens = [t for t in text.split() if t not in _ARTICLES]
    return " ".join(tokens)


def exact_match(pred: str, gold: str) -> float:
    return 1.0 if normalize(pred) == normalize(gold) else 0.0


def token_f1(pred: str, gold: str) -> float:
    pred_tokens = normalize(pred).split()
    gold_tokens = normalize(gold).split()
    if not pred_tokens or not gold_tokens:
        return 1.0 if pred_tokens == gold_tokens else 0.0
    common = Counter(pred_tokens) & Counter(gold_tokens)
    overlap = sum(common.values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def substring_match(pred: str, gold: str) -> bool:
    """True when either normalized answer contains the other."""
    p, g = normalize(pred), normalize(gold)
    if not p or not g:
        return p == g
    return p in g or g in p


# ---------------------------------------------------------------------------
# Batch evaluation

@dataclass
class EvalExample:
    example_id: str
    question: str
    gold: str
    suql: str
    relaxations: list[str] = field(default_factory=list)

    @staticmethod
    def from_json(data: dict) -> "EvalExample":
        return EvalExample(
            data["example_id"],
            data["question"],
            data["gold"],
            data["suql"],
            list(data.get("relaxations", [])),
        )


@dataclass
class EvalResult:
    example_id: str
    question: str
    gold: str
    pred: str
    em: float
    f1: float
    substring: bool
    attempts: int
    error: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "example_id": self.example_id,
            "question": self.question,
            "gold": self.gold,
            "pred": self.pred,
            "em": self.em,
            "f1": round(self.f1, 6),
            "substring": self.substring,
            "attempts": self.attempts,
            "error": self.error,
        }


def extract_pred(result: ResultSet) -> str:
    """Prediction string: the first cell of the first row, rendered."""
    if not result.rows:
        return ""
    cell = result.rows[0][0]
    if cell is None:
        return ""
    return render_value(cell)


def evaluate_example(
    example: EvalExample, catalog: Catalog, runtime: QueryRuntime, retry_budget: int = 2
) -> EvalResult:
    texts = [example.suql, *example.relaxations]
    pred, attempts, error = "", 0, None
    for i, text in enumerate(texts):
        if attempts > retry_budget:
            break
        attempts += 1
        try:
            query = bind(parse(text), catalog)
        except (SuqlSyntaxError, BindError) as exc:
            error = f"{type(exc).__name__}: {exc}"
            break
        _, result = run_query(query, catalog, runtime)
        pred = extract_pred(result)
        if pred:
            error = None
            break
    em = exact_match(pred, example.gold) if pred else 0.0
    f1 = token_f1(pred, example.gold) if pred else 0.0
    sub = substring_match(pred, example.gold) if pred else False
    return EvalResult(
        example.example_id, example.question, example.gold, pred, em, f1, sub, attempts, error
    )


@dataclass
class EvalReport:
    results: list[EvalResult]

    @property
    def em(self) -> float:
        return sum(r.em for r in self.results) / len(self.results) if self.results else 0.0

    @property
    def f1(self) -> float:
        return sum(r.f1 for r in self.results) / len(self.results) if self.results else 0.0

    @property
    def substring_rate(self) -> float:
        if not self.results:
            return 0.0
        return sum(1 for r in self.results if r.substring) / len(self.results)

    def failures(self) -> list[EvalResult]:
        return [r for r in self.results if r.em < 1.0]

    def to_json(self) -> dict:
        # Deterministic by construction: no timestamps, sorted keys downstream.
        return {
            "summary": {
                "examples": len(self.results),
                "em": round(self.em, 6),
                "f1": round(self.f1, 6),
                "substring": round(self.substring_rate, 6),
            },
            "results": [r.to_json() for r in self.results],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["example_id", "question", "gold", "pred", "em", "f1", "substring", "attempts", "error"]
        )
        for r in self.results:
            writer.writerow(
                [
                    r.example_id,
                    r.question,
                    r.gold,
                    r.pred,
                    int(r.em),
                    f"{r.f1:.6f}",
                    int(r.substring),
                    r.attempts,
                    r.error or "",
                ]
            )
        return buf.getvalue()

    def digest(self) -> str:
        return hashlib.sha256(self.to_json_text().encode("utf-8")).hexdigest()


def run_batch(
    examples: Sequence[EvalExample],
    catalog: Catalog,
    runtime: QueryRuntime,
    retry_budget: int = 2,
) -> EvalReport:
    return EvalReport(
        [evaluate_example(ex, catalog, runtime, retry_budget) for ex in examples]
    )
