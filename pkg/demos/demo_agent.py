#!/usr/bin/env python3
"""The conversational agent: scripted 20-turn session over the restaurant
corpus, showing the searched-statement contract, no-result handling, and
empty-result retries."""

from suql import CachedAnswerer, EngineConfig, IndexSet, MockAnswerer, QueryRuntime
from suql.agent import Agent, DialogueState, MockAgentBackend
from suql.fixtures import load_fixture


def main() -> None:
    fx = load_fixture("convo20")
    indexes = IndexSet()
    for table in fx.catalog.tables.values():
        indexes.build_all(table)
    runtime = QueryRuntime(
        CachedAnswerer(MockAnswerer(fx.rules, fx.classify_table)),
        indexes,
        EngineConfig(),
    )
    backend = MockAgentBackend(fx.extras["classifier"], fx.extras["parser"])
    agent = Agent(fx.catalog, runtime, backend)

    state = DialogueState("demo")
    for turn in fx.extras["turns"]:
        reply, state, trace = agent.chat_turn(state, turn["utterance"])
        print(f"user : {turn['utterance']}")
        print(f"agent: {reply}")
        if trace.suql:
            print(f"       [suql: {trace.suql}]")
            print(f"       [attempts: {trace.attempts}]")
        print()


if __name__ == "__main__":
    main()
