// Page wiring: session persistence, input handling, serialized turns.

import { ApiError, ChatClient } from "./api.js";
import {
  beginTurn,
  completeTurn,
  failTurn,
  initialState,
  type ChatViewState,
} from "./state.js";
import { render } from "./ui.js";

export const SESSION_KEY = "suql-chat-session";

export interface AppHandles {
  submit(utterance: string): Promise<void>;
  getState(): ChatViewState;
}

export function createApp(
  doc: Document,
  root: HTMLElement,
  client: ChatClient,
  storage: Storage,
): AppHandles {
  let state = initialState(storage.getItem(SESSION_KEY));

  const update = (next: ChatViewState): void => {
    state = next;
    if (state.sessionId) {
      storage.setItem(SESSION_KEY, state.sessionId);
    }
    render(doc, root, state);
  };

  const submit = async (utterance: string): Promise<void> => {
    const trimmed = utterance.trim();
    if (!trimmed || state.pending) {
      return;
    }
    update(beginTurn(state, trimmed));
    try {
      const resp = await client.chat(trimmed, state.sessionId);
      update(completeTurn(state, resp));
    } catch (err) {
      const message =
        err instanceof ApiError
          ? `${err.code}: ${err.message}`
          : "network failure — check the service and retry";
      update(failTurn(state, message));
    }
  };

  render(doc, root, state);
  return { submit, getState: () => state };
}

export function mount(doc: Document, baseUrl: string): AppHandles {
  const root = doc.getElementById("app");
  const form = doc.getElementById("chat-form") as HTMLFormElement | null;
  const input = doc.getElementById("chat-input") as HTMLInputElement | null;
  if (!root || !form || !input) {
    throw new Error("page is missing #app, #chat-form, or #chat-input");
  }
  const app = createApp(doc, root, new ChatClient(baseUrl), window.localStorage);
  form.addEventListener("submit", (evt) => {
    evt.preventDefault();
    const text = input.value;
    input.value = "";
    void app.submit(text);
  });
  return app;
}
