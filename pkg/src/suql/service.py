"""HTTP service hosting the query and chat endpoints.

Wire format:
  POST /query  {query}                -> {columns: [{name,type}], rows, stats}
  POST /chat   {session_id?, utterance} -> {session_id, reply, searched,
                                            suql?, results?, trace}
  GET  /schema -> schema.json content
  GET  /healthz
Errors are structured JSON: {code, message}.
"""

from __future__ import annotations

import threading
import uuid
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .agent import Agent, AgentBackend, DialogueState
from .binder import BindError, bind
from .catalog import Catalog
from .config import EngineConfig
from .executor import ExecError, QueryRuntime, run_query
from .lexer import SuqlSyntaxError
from .parser import parse


class QueryRequest(BaseModel):
    query: str


class ChatRequest(BaseModel):
    session_id: Optional[str] = None
    utterance: str


class SessionStore:
    """In-memory sessions with one in-flight turn per session."""

    def __init__(self):
        self._lock = threading.Lock()
        self._states: dict[str, DialogueState] = {}
        self._turn_locks: dict[str, threading.Lock] = {}

    def acquire(self, session_id: Optional[str]) -> tuple[str, DialogueState, threading.Lock]:
        with self._lock:
            if not session_id:
                session_id = uuid.uuid4().hex
            if session_id not in self._states:
                self._states[session_id] = DialogueState(session_id)
                self._turn_locks[session_id] = threading.Lock()
            return session_id, self._states[session_id], self._turn_locks[session_id]


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(
    catalog: Catalog,
    runtime: QueryRuntime,
    agent_backend: AgentBackend,
    config: Optional[EngineConfig] = None,
) -> FastAPI:
    config = config or runtime.config
    app = FastAPI(title="suql-service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    agent = Agent(catalog, runtime, agent_backend, config)
    sessions = SessionStore()

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "tables": sorted(catalog.tables)}

    @app.get("/schema")
    def schema():
        return catalog.schema_json()

    @app.post("/query")
    def query(req: QueryRequest):
        try:
            ast = bind(parse(req.query), catalog)
        except SuqlSyntaxError as exc:
            return _error(400, "syntax_error", str(exc))
        except BindError as exc:
            return _error(400, "bind_error", str(exc))
        try:
            _, result = run_query(ast, catalog, runtime)
        except ExecError as exc:
            return _error(422, "execution_error", str(exc))
        return result.to_json()

    @app.post("/chat")
    def chat(req: ChatRequest):
        if not req.utterance.strip():
            return _error(400, "empty_utterance", "utterance must be nonempty")
        session_id, state, turn_lock = sessions.acquire(req.session_id)
        with turn_lock:
            reply, state, trace = agent.chat_turn(state, req.utterance)
        body = {
            "session_id": session_id,
            "reply": reply,
            "searched": trace.searched,
            "trace": trace.to_json(),
        }
        if trace.suql is not None:
            body["suql"] = trace.suql
        if trace.results is not None:
            body["results"] = trace.results
        return body

    @app.exception_handler(Exception)
    async def unhandled(request: Request, exc: Exception):
        return _error(500, "internal_error", str(exc))

    return app
