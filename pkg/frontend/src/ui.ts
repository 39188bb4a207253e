import { politicianColorIndex } from "./color.js";
import type { SessionViewState } from "./state.js";
import type { SourceBundle, StageOneHit } from "./types.js";

export interface Handlers {
  submitQuery(query: string): void;
  generateResponse(chunkId: string): void;
  openSource(chunkId: string): void;
  closeSource(): void;
  sendFeedback(chunkId: string, stage: "retrieval" | "generation", rating: "positive" | "negative"): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderQueryBar(root: HTMLElement, suggestions: string[], handlers: Handlers): void {
  root.innerHTML = "";
  const form = el("form", "query-form");
  const input = el("input", "query-input");
  input.type = "text";
  input.placeholder = "Ask about the proceedings…";
  input.setAttribute("aria-label", "question");
  const submit = el("button", "query-submit", "Search");
  submit.type = "submit";
  form.append(input, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const query = input.value.trim();
    if (!query) return; // empty submissions stay client-side
    handlers.submitQuery(query);
  });
  root.append(form);

  if (suggestions.length > 0) {
    const row = el("div", "suggestions");
    for (const suggestion of suggestions) {
      const chip = el("button", "suggestion-chip", suggestion);
      chip.type = "button";
      chip.addEventListener("click", () => {
        input.value = suggestion;
        handlers.submitQuery(suggestion);
      });
      row.append(chip);
    }
    root.append(row);
  }
}

function feedbackControls(
  chunkId: string,
  stage: "retrieval" | "generation",
  state: SessionViewState,
  handlers: Handlers,
): HTMLElement {
  const wrap = el("span", "feedback");
  const sent = state.feedbackSent.has(`${stage}:${chunkId}`);
  for (const [rating, label] of [["positive", "👍"], ["negative", "👎"]] as const) {
    const button = el("button", `feedback-btn feedback-${rating}`, label);
    button.type = "button";
    button.setAttribute("aria-label", `${rating} ${stage} feedback`);
    button.dataset.stage = stage;
    button.dataset.rating = rating;
    if (sent) button.disabled = true;
    button.addEventListener("click", () => handlers.sendFeedback(chunkId, stage, rating));
    wrap.append(button);
  }
  if (sent) wrap.append(el("span", "feedback-ack", "recorded"));
  return wrap;
}

function renderCard(hit: StageOneHit, state: SessionViewState, handlers: Handlers): HTMLElement {
  const card = el("article", `card politician-color-${politicianColorIndex(hit.politician)}`);
  card.dataset.chunkId = hit.chunk_id;
  card.id = `card-${encodeURIComponent(hit.chunk_id)}`;

  const meta = el("header", "card-meta");
  meta.append(
    el("span", "card-politician", hit.politician),
    el("span", "card-party", hit.party),
    el("span", "topic-badge", hit.topic),
    el("span", "card-date", hit.session_date),
  );
  card.append(meta, el("p", "card-summary", hit.short_summary));

  const actions = el("div", "card-actions");
  const generate = el("button", "generate-btn", "Generate response");
  generate.type = "button";
  if (state.pending.has(`respond:${hit.chunk_id}`)) {
    generate.disabled = true;
    generate.textContent = "Generating…";
  }
  generate.addEventListener("click", () => handlers.generateResponse(hit.chunk_id));
  const viewSource = el("button", "source-btn", "View source");
  viewSource.type = "button";
  viewSource.addEventListener("click", () => handlers.openSource(hit.chunk_id));
  actions.append(generate, viewSource, feedbackControls(hit.chunk_id, "retrieval", state, handlers));
  card.append(actions);

  const response = state.expanded.get(hit.chunk_id);
  if (response) {
    const panel = el("section", "response-panel");
    panel.append(el("p", "response-text", response.response_text));
    const footer = el("div", "response-footer");
    const sourceLink = el("button", "response-source-link", "Source for this response");
    sourceLink.type = "button";
    sourceLink.addEventListener("click", () => handlers.openSource(hit.chunk_id));
    footer.append(sourceLink, feedbackControls(hit.chunk_id, "generation", state, handlers));
    panel.append(footer);
    card.append(panel);
  } else if (state.responseErrors.has(hit.chunk_id)) {
    const panel = el("section", "response-panel response-error");
    panel.append(el("p", "error-text", "Response generation failed."));
    const retry = el("button", "retry-btn", "Retry");
    retry.type = "button";
    retry.addEventListener("click", () => handlers.generateResponse(hit.chunk_id));
    panel.append(retry);
    card.append(panel);
  }
  return card;
}

export function renderResults(root: HTMLElement, state: SessionViewState, handlers: Handlers): void {
  root.innerHTML = "";
  if (state.queryError) {
    root.append(el("p", "query-error", state.queryError));
    return;
  }
  if (state.pending.has("query")) {
    root.append(el("p", "loading", "Searching…"));
    return;
  }
  if (state.stageOne === null) return;
  if (state.stageOne.hits.length === 0) {
    root.append(el("p", "empty-state", "No sources found for this question."));
    return;
  }
  const list = el("div", "card-list");
  for (const hit of state.stageOne.hits) {
    list.append(renderCard(hit, state, handlers));
  }
  root.append(list);
}

function highlightedTurn(bundle: SourceBundle): HTMLElement {
  const { chunk, turn } = bundle;
  const body = el("p", "turn-text");
  body.append(
    document.createTextNode(turn.text.slice(0, chunk.char_start)),
    el("mark", "chunk-highlight", turn.text.slice(chunk.char_start, chunk.char_end)),
    document.createTextNode(turn.text.slice(chunk.char_end)),
  );
  return body;
}

export function renderSourceViewer(root: HTMLElement, state: SessionViewState, handlers: Handlers): void {
  root.innerHTML = "";
  const bundle = state.sourceViewer;
  if (!bundle) return;
  const overlay = el("div", "viewer-overlay");
  const modal = el("div", "viewer-modal");
  modal.setAttribute("role", "dialog");
  const header = el("header", "viewer-header");
  header.append(
    el("span", "viewer-speaker", bundle.turn.speaker),
    el("span", "viewer-party", bundle.turn.party),
    el(
      "span",
      "viewer-session",
      `${bundle.document.session_date} (${bundle.document.session_type})`,
    ),
  );
  const close = el("button", "viewer-close", "Close");
  close.type = "button";
  close.addEventListener("click", () => handlers.closeSource());
  header.append(close);
  modal.append(header, highlightedTurn(bundle));
  overlay.append(modal);
  root.append(overlay);
}
