import { describe, expect, it } from "vitest";

import {
  beginTurn,
  completeTurn,
  failTurn,
  initialState,
} from "../src/state.js";
import { GREETING_RESPONSE, NO_RESULT_RESPONSE, SEARCH_RESPONSE } from "./helpers.js";

describe("transcript state", () => {
  it("appends the user bubble and marks pending", () => {
    const state = beginTurn(initialState(null), "hello");
    expect(state.pending).toBe(true);
    expect(state.transcript).toHaveLength(1);
    expect(state.transcript[0]).toMatchObject({ role: "user", text: "hello" });
  });

  it("rejects a second turn while one is pending", () => {
    const state = beginTurn(initialState(null), "hello");
    expect(() => beginTurn(state, "again")).toThrow(/pending/);
  });

  it("completing a turn appends the assistant bubble and stores the session", () => {
    let state = beginTurn(initialState(null), "hi");
    state = completeTurn(state, GREETING_RESPONSE);
    expect(state.pending).toBe(false);
    expect(state.sessionId).toBe("sess-1");
    expect(state.transcript.map((e) => e.role)).toEqual(["user", "assistant"]);
  });

  it("transcript is append-only across turns", () => {
    let state = initialState(null);
    state = completeTurn(beginTurn(state, "hi"), GREETING_RESPONSE);
    const before = [...state.transcript];
    state = completeTurn(beginTurn(state, "cheap food"), SEARCH_RESPONSE);
    expect(state.transcript.slice(0, before.length)).toEqual(before);
    expect(state.transcript).toHaveLength(4);
  });

  it("flags no-result replies from the marker", () => {
    const done = completeTurn(beginTurn(initialState(null), "x"), NO_RESULT_RESPONSE);
    expect(done.transcript[1].noResult).toBe(true);
    const found = completeTurn(beginTurn(initialState(null), "x"), SEARCH_RESPONSE);
    expect(found.transcript[1].noResult).toBe(false);
  });

  it("greetings never count as no-result", () => {
    const state = completeTurn(beginTurn(initialState(null), "hi"), GREETING_RESPONSE);
    expect(state.transcript[1].noResult).toBe(false);
    expect(state.transcript[1].searched).toBeNull();
  });

  it("a failed turn keeps the transcript and raises the banner", () => {
    let state = completeTurn(beginTurn(initialState(null), "hi"), GREETING_RESPONSE);
    const before = [...state.transcript];
    state = failTurn(beginTurn(state, "cheap food"), "network failure");
    expect(state.pending).toBe(false);
    expect(state.errorBanner).toBe("network failure");
    // the user's bubble stays; no assistant bubble was invented
    expect(state.transcript).toHaveLength(before.length + 1);
    expect(state.transcript.at(-1)?.role).toBe("user");
  });

  it("the next begun turn clears the banner", () => {
    let state = failTurn(beginTurn(initialState(null), "x"), "boom");
    state = beginTurn(state, "retry");
    expect(state.errorBanner).toBeNull();
  });
});
