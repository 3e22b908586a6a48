// View-state container: append-only transcript, at most one pending turn,
// error banner that never mutates the transcript.

import type { ChatResponse, ChatTrace, ResultPayload } from "./api.js";

export interface TranscriptEntry {
  role: "user" | "assistant";
  text: string;
  searched: string | null;
  noResult: boolean;
  results: ResultPayload | null;
  trace: ChatTrace | null;
}

export interface ChatViewState {
  sessionId: string | null;
  transcript: TranscriptEntry[];
  pending: boolean;
  errorBanner: string | null;
}

export const NO_RESULT_MARKER = "no results";

export function initialState(sessionId: string | null): ChatViewState {
  return { sessionId, transcript: [], pending: false, errorBanner: null };
}

export function beginTurn(state: ChatViewState, utterance: string): ChatViewState {
  if (state.pending) {
    throw new Error("a turn is already pending");
  }
  return {
    ...state,
    pending: true,
    errorBanner: null,
    transcript: [
      ...state.transcript,
      {
        role: "user",
        text: utterance,
        searched: null,
        noResult: false,
        results: null,
        trace: null,
      },
    ],
  };
}

export function completeTurn(state: ChatViewState, resp: ChatResponse): ChatViewState {
  const noResult =
    resp.searched !== null && resp.reply.includes(NO_RESULT_MARKER);
  return {
    ...state,
    sessionId: resp.session_id,
    pending: false,
    transcript: [
      ...state.transcript,
      {
        role: "assistant",
        text: resp.reply,
        searched: resp.searched,
        noResult,
        results: resp.results ?? null,
        trace: resp.trace ?? null,
      },
    ],
  };
}

export function failTurn(state: ChatViewState, message: string): ChatViewState {
  // The user's bubble stays; only the banner reports the failure.
  return { ...state, pending: false, errorBanner: message };
}
