// Canned service responses and a fetch stub shared by the tests.

import type { ChatResponse, ChatTrace } from "../src/api.js";

export function trace(overrides: Partial<ChatTrace> = {}): ChatTrace {
  return {
    needs_knowledge: true,
    suql: null,
    explain: null,
    stats: null,
    attempts: 1,
    searched: null,
    error: null,
    failed_queries: [],
    ...overrides,
  };
}

export const GREETING_RESPONSE: ChatResponse = {
  session_id: "sess-1",
  reply: "Hi! How can I help you?",
  searched: null,
  trace: trace({ needs_knowledge: false, attempts: 0 }),
};

export const SEARCH_RESPONSE: ChatResponse = {
  session_id: "sess-1",
  reply:
    "I searched for restaurants with price = 'cheap'. I found 2 results: " +
    "(name: Daily Grind, rating: 4.2); (name: Corner Cafe, rating: 4.0).",
  searched: "I searched for restaurants with price = 'cheap'.",
  suql: "SELECT name, rating, address FROM restaurants WHERE price = 'cheap' LIMIT 3;",
  results: {
    columns: [
      { name: "name", type: "TEXT" },
      { name: "rating", type: "NUMERIC(2,1)" },
      { name: "address", type: "TEXT" },
    ],
    rows: [
      ["Daily Grind", 4.2, "12 Bean St"],
      ["Corner Cafe", 4.0, "7 Corner Ave"],
    ],
    stats: { rows_scanned: 30 },
  },
  trace: trace({
    suql: "SELECT name, rating, address FROM restaurants WHERE price = 'cheap' LIMIT 3;",
    explain: "SCAN restaurants\nPROJECT name, rating, address",
    searched: "I searched for restaurants with price = 'cheap'.",
  }),
};

export const NO_RESULT_RESPONSE: ChatResponse = {
  session_id: "sess-1",
  reply:
    "I searched for restaurants with location = 'Antarctica'. " +
    "I found no results for that.",
  searched: "I searched for restaurants with location = 'Antarctica'.",
  suql: "SELECT name FROM restaurants WHERE location = 'Antarctica' LIMIT 3;",
  results: {
    columns: [{ name: "name", type: "TEXT" }],
    rows: [],
    stats: { rows_scanned: 30 },
  },
  trace: trace({
    suql: "SELECT name FROM restaurants WHERE location = 'Antarctica' LIMIT 3;",
    explain: "SCAN restaurants\nPROJECT name",
    searched: "I searched for restaurants with location = 'Antarctica'.",
  }),
};

export interface RecordedRequest {
  url: string;
  body: Record<string, unknown>;
}

export function fetchStub(
  script: Record<string, ChatResponse>,
  recorded: RecordedRequest[] = [],
): typeof fetch {
  return (async (url: RequestInfo | URL, init?: RequestInit) => {
    const body = JSON.parse(String(init?.body ?? "{}")) as Record<string, unknown>;
    recorded.push({ url: String(url), body });
    const utterance = String(body.utterance ?? "");
    const resp = script[utterance];
    if (!resp) {
      return new Response(
        JSON.stringify({ code: "unknown_utterance", message: utterance }),
        { status: 400, headers: { "Content-Type": "application/json" } },
      );
    }
    return new Response(JSON.stringify(resp), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
}

export class MemoryStorage implements Storage {
  private items = new Map<string, string>();

  get length(): number {
    return this.items.size;
  }

  clear(): void {
    this.items.clear();
  }

  getItem(key: string): string | null {
    return this.items.get(key) ?? null;
  }

  key(index: number): string | null {
    return [...this.items.keys()][index] ?? null;
  }

  removeItem(key: string): void {
    this.items.delete(key);
  }

  setItem(key: string, value: string): void {
    this.items.set(key, value);
  }
}
