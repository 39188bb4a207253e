import type { SourceBundle, StageOneResult, StageTwoResponse } from "./types.js";

// View state for one browsing session. Invariants:
//  - expanded keys are a subset of the current stage-one hit ids
//  - at most one source viewer is open
//  - submitting a new query clears results, responses, and the viewer
//    atomically; late responses from a superseded query are dropped via
//    the generation counter.

export interface SessionViewState {
  currentQuery: string;
  generation: number;
  suggestions: string[];
  stageOne: StageOneResult | null;
  queryError: string | null;
  expanded: Map<string, StageTwoResponse>;
  responseErrors: Set<string>;
  sourceViewer: SourceBundle | null;
  pending: Set<string>;
  feedbackSent: Set<string>; // "<stage>:<chunk_id>" once acknowledged
}

export type Listener = (state: SessionViewState) => void;

export class SessionStore {
  private state: SessionViewState = {
    currentQuery: "",
    generation: 0,
    suggestions: [],
    stageOne: null,
    queryError: null,
    expanded: new Map(),
    responseErrors: new Set(),
    sourceViewer: null,
    pending: new Set(),
    feedbackSent: new Set(),
  };
  private listeners: Listener[] = [];

  get current(): SessionViewState {
    return this.state;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  setSuggestions(suggestions: string[]): void {
    this.state.suggestions = suggestions;
    this.emit();
  }

  /** Start a new query; returns the generation token for this submission. */
  beginQuery(query: string): number {
    this.state.currentQuery = query;
    this.state.generation += 1;
    this.state.stageOne = null;
    this.state.queryError = null;
    this.state.expanded = new Map();
    this.state.responseErrors = new Set();
    this.state.sourceViewer = null;
    this.state.feedbackSent = new Set();
    this.state.pending = new Set(["query"]);
    this.emit();
    return this.state.generation;
  }

  applyStageOne(generation: number, result: StageOneResult): void {
    if (generation !== this.state.generation) return; // stale
    this.state.stageOne = result;
    this.state.pending.delete("query");
    this.emit();
  }

  failQuery(generation: number, message: string): void {
    if (generation !== this.state.generation) return;
    this.state.queryError = message;
    this.state.pending.delete("query");
    this.emit();
  }

  /** Pending guard: returns false when a request for this chunk is in flight. */
  beginRespond(chunkId: string): boolean {
    const key = `respond:${chunkId}`;
    if (this.state.pending.has(key)) return false;
    this.state.pending.add(key);
    this.state.responseErrors.delete(chunkId);
    this.emit();
    return true;
  }

  applyRespond(generation: number, response: StageTwoResponse): void {
    this.state.pending.delete(`respond:${response.chunk_id}`);
    if (generation !== this.state.generation) return; // superseded query
    const hitIds = new Set((this.state.stageOne?.hits ?? []).map((h) => h.chunk_id));
    if (!hitIds.has(response.chunk_id)) return; // expanded keys stay within hits
    this.state.expanded.set(response.chunk_id, response);
    this.emit();
  }

  failRespond(generation: number, chunkId: string): void {
    this.state.pending.delete(`respond:${chunkId}`);
    if (generation !== this.state.generation) return;
    this.state.responseErrors.add(chunkId);
    this.emit();
  }

  openSource(generation: number, bundle: SourceBundle): void {
    if (generation !== this.state.generation) return;
    this.state.sourceViewer = bundle; // replaces any open viewer
    this.emit();
  }

  closeSource(): void {
    this.state.sourceViewer = null;
    this.emit();
  }

  markFeedback(stage: string, chunkId: string): void {
    this.state.feedbackSent.add(`${stage}:${chunkId}`);
    this.emit();
  }
}
