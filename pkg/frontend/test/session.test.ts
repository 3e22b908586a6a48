// The scripted three-turn session: greeting, search, empty search.
// Exercises the full DOM path with a mocked service.

import { describe, expect, it } from "vitest";

import { ChatClient } from "../src/api.js";
import { SESSION_KEY, createApp } from "../src/main.js";
import {
  GREETING_RESPONSE,
  MemoryStorage,
  NO_RESULT_RESPONSE,
  SEARCH_RESPONSE,
  fetchStub,
  type RecordedRequest,
} from "./helpers.js";

const SCRIPT = {
  "hi": GREETING_RESPONSE,
  "cheap food": SEARCH_RESPONSE,
  "food in Antarctica": NO_RESULT_RESPONSE,
};

function makeApp(recorded: RecordedRequest[] = [], storage = new MemoryStorage()) {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const client = new ChatClient("http://svc.test", fetchStub(SCRIPT, recorded));
  return { app: createApp(document, root, client, storage), root, storage };
}

describe("three-turn scripted session", () => {
  it("renders the contract for every turn", async () => {
    const { app, root } = makeApp();
    await app.submit("hi");
    await app.submit("cheap food");
    await app.submit("food in Antarctica");

    const bubbles = root.querySelectorAll(".bubble.assistant");
    expect(bubbles).toHaveLength(3);

    // turn 1: plain reply, no chip
    expect(bubbles[0].querySelector(".searched-chip")).toBeNull();
    expect(bubbles[0].textContent).toContain("Hi! How can I help you?");

    // turn 2: chip text equals the `searched` field verbatim, cards rendered
    const chip = bubbles[1].querySelector(".searched-chip");
    expect(chip?.textContent).toBe(SEARCH_RESPONSE.searched);
    const cards = bubbles[1].querySelectorAll(".result-card");
    expect(cards).toHaveLength(2);
    expect(cards[0].querySelector(".card-name")?.textContent).toBe("Daily Grind");
    expect(cards[0].querySelector(".card-rating")?.textContent).toBe("4.2");
    expect(cards[0].querySelector(".card-address")?.textContent).toBe("12 Bean St");

    // turn 3: distinct no-result styling, zero cards, verbatim chip
    expect(bubbles[2].classList.contains("no-result")).toBe(true);
    expect(bubbles[2].querySelectorAll(".result-card")).toHaveLength(0);
    expect(bubbles[2].querySelector(".searched-chip")?.textContent).toBe(
      NO_RESULT_RESPONSE.searched,
    );
  });

  it("shows only entity names present in the payload", async () => {
    const { app, root } = makeApp();
    await app.submit("cheap food");
    await app.submit("food in Antarctica");
    const bubbles = [...root.querySelectorAll(".bubble.assistant")];
    const noResult = bubbles[1];
    expect(noResult.textContent).not.toContain("Daily Grind");
    expect(noResult.textContent).not.toContain("Corner Cafe");
  });

  it("persists the session id and sends it on later turns", async () => {
    const recorded: RecordedRequest[] = [];
    const { app, storage } = makeApp(recorded);
    await app.submit("hi");
    expect(storage.getItem(SESSION_KEY)).toBe("sess-1");
    await app.submit("cheap food");
    expect(recorded[1].body.session_id).toBe("sess-1");
  });

  it("reuses a stored session id after reload", async () => {
    const storage = new MemoryStorage();
    storage.setItem(SESSION_KEY, "sess-older");
    const recorded: RecordedRequest[] = [];
    const { app } = makeApp(recorded, storage);
    await app.submit("hi");
    expect(recorded[0].body.session_id).toBe("sess-older");
  });

  it("shows the trace panel with the SUQL text on search turns only", async () => {
    const { app, root } = makeApp();
    await app.submit("hi");
    await app.submit("cheap food");
    const bubbles = root.querySelectorAll(".bubble.assistant");
    expect(bubbles[0].querySelector(".trace-panel")).toBeNull();
    const suql = bubbles[1].querySelector(".trace-suql");
    expect(suql?.textContent).toBe(SEARCH_RESPONSE.suql);
    expect(bubbles[1].querySelector(".trace-explain")?.textContent).toContain(
      "SCAN restaurants",
    );
  });

  it("serializes turns: a submit during a pending turn is dropped", async () => {
    const recorded: RecordedRequest[] = [];
    const { app } = makeApp(recorded);
    const first = app.submit("hi");
    await app.submit("cheap food"); // still pending: ignored
    await first;
    expect(recorded).toHaveLength(1);
    expect(app.getState().transcript).toHaveLength(2);
  });

  it("network failure raises the banner and keeps the transcript", async () => {
    const root = document.createElement("div");
    document.body.appendChild(root);
    const failing = (async () => {
      throw new TypeError("fetch failed");
    }) as unknown as typeof fetch;
    const client = new ChatClient("http://svc.test", failing);
    const app = createApp(document, root, client, new MemoryStorage());
    await app.submit("hi");
    expect(root.querySelector(".error-banner")?.textContent).toContain(
      "network failure",
    );
    expect(root.querySelectorAll(".bubble.assistant")).toHaveLength(0);
    expect(root.querySelectorAll(".bubble.user")).toHaveLength(1);
  });
});
