"""Engine-wide configuration knobs."""

from __future__ import annotations

import os
from dataclasses import dataclass, field


@dataclass
class EngineConfig:
    # Optimizer switches (all on by default; tests flip them individually).
    prune: bool = True
    order_predicates: bool = True
    lazy: bool = True

    retrieval_k: int = 20          # rows shortlisted per query by the embedding index
    dnf_max_clauses: int = 64      # cap on DNF growth before falling back
    enum_inline_threshold: int = 10  # max enum size inlined into schema prompts
    result_limit: int = 3          # agent clamps searches to this many rows
    retry_budget: int = 2          # empty-result reformulation attempts
    parallelism: int = 4           # concurrent answer-filter verifications
    history_window: int = 8        # dialogue turns included in prompts

    backend: str = "mock"          # mock | http
    llm_base_url: str = field(
        default_factory=lambda: os.environ.get("SUQL_LLM_BASE_URL", "")
    )
    llm_api_key: str = field(
        default_factory=lambda: os.environ.get("SUQL_LLM_API_KEY", "")
    )
    llm_model: str = field(
        default_factory=lambda: os.environ.get("SUQL_LLM_MODEL", "")
    )
