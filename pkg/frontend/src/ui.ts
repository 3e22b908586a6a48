// DOM rendering. Everything shown comes from the response payload; the UI
// never invents entity names or rewrites the searched statement.

import type { ResultPayload } from "./api.js";
import type { ChatViewState, TranscriptEntry } from "./state.js";

const CARD_FIELDS = ["name", "rating", "address"];

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderResultCards(doc: Document, results: ResultPayload): HTMLElement {
  const wrap = el(doc, "div", "result-cards");
  const names = results.columns.map((c) => c.name.toLowerCase());
  for (const row of results.rows) {
    const card = el(doc, "div", "result-card");
    let wrote = false;
    for (const field of CARD_FIELDS) {
      const idx = names.indexOf(field);
      if (idx >= 0 && row[idx] !== null && row[idx] !== undefined) {
        card.appendChild(el(doc, "div", `card-${field}`, String(row[idx])));
        wrote = true;
      }
    }
    if (!wrote) {
      // schema without the restaurant fields: fall back to the first cell
      card.appendChild(el(doc, "div", "card-value", String(row[0] ?? "")));
    }
    wrap.appendChild(card);
  }
  return wrap;
}

function renderTracePanel(doc: Document, entry: TranscriptEntry): HTMLElement {
  const panel = el(doc, "details", "trace-panel");
  panel.appendChild(el(doc, "summary", undefined, "trace"));
  const trace = entry.trace;
  if (trace && typeof trace.suql === "string") {
    panel.appendChild(el(doc, "pre", "trace-suql", trace.suql));
    if (typeof trace.explain === "string") {
      panel.appendChild(el(doc, "pre", "trace-explain", trace.explain));
    }
  } else {
    // malformed trace: degrade to raw JSON rather than hiding it
    panel.appendChild(el(doc, "pre", "trace-raw", JSON.stringify(trace, null, 2)));
  }
  return panel;
}

function renderEntry(doc: Document, entry: TranscriptEntry): HTMLElement {
  const classes = ["bubble", entry.role];
  if (entry.noResult) {
    classes.push("no-result");
  }
  const bubble = el(doc, "div", classes.join(" "));
  if (entry.searched !== null) {
    // chip text is the `searched` field verbatim
    bubble.appendChild(el(doc, "span", "searched-chip", entry.searched));
  }
  bubble.appendChild(el(doc, "p", "reply-text", entry.text));
  if (entry.results && entry.results.rows.length > 0) {
    bubble.appendChild(renderResultCards(doc, entry.results));
  }
  if (entry.role === "assistant" && entry.trace && entry.trace.suql !== null) {
    bubble.appendChild(renderTracePanel(doc, entry));
  }
  return bubble;
}

export function render(doc: Document, root: HTMLElement, state: ChatViewState): void {
  root.textContent = "";
  if (state.errorBanner !== null) {
    const banner = el(doc, "div", "error-banner", state.errorBanner);
    banner.appendChild(el(doc, "button", "retry-button", "retry"));
    root.appendChild(banner);
  }
  const list = el(doc, "div", "transcript");
  for (const entry of state.transcript) {
    list.appendChild(renderEntry(doc, entry));
  }
  root.appendChild(list);
  if (state.pending) {
    root.appendChild(el(doc, "div", "pending-indicator", "…"));
  }
}
