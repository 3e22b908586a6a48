import { describe, expect, it } from "vitest";

import { ApiError, ChatClient } from "../src/api.js";
import {
  GREETING_RESPONSE,
  fetchStub,
  type RecordedRequest,
} from "./helpers.js";

describe("ChatClient", () => {
  it("posts the utterance to {base}/chat", async () => {
    const recorded: RecordedRequest[] = [];
    const client = new ChatClient(
      "http://svc.test",
      fetchStub({ hi: GREETING_RESPONSE }, recorded),
    );
    const resp = await client.chat("hi", null);
    expect(resp.reply).toBe(GREETING_RESPONSE.reply);
    expect(recorded[0].url).toBe("http://svc.test/chat");
    expect(recorded[0].body).toEqual({ utterance: "hi" });
  });

  it("sends the session id on every turn once known", async () => {
    const recorded: RecordedRequest[] = [];
    const client = new ChatClient(
      "http://svc.test",
      fetchStub({ hi: GREETING_RESPONSE }, recorded),
    );
    await client.chat("hi", "sess-1");
    expect(recorded[0].body).toEqual({ utterance: "hi", session_id: "sess-1" });
  });

  it("surfaces structured service errors as ApiError", async () => {
    const client = new ChatClient("http://svc.test", fetchStub({}));
    await expect(client.chat("???", null)).rejects.toMatchObject({
      code: "unknown_utterance",
    });
  });

  it("handles non-JSON error bodies", async () => {
    const fetchFn = (async () =>
      new Response("gateway exploded", { status: 502 })) as typeof fetch;
    const client = new ChatClient("http://svc.test", fetchFn);
    const err = await client.chat("hi", null).catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).code).toBe("http_error");
  });
});
