// API payload shapes; these mirror the JSON Schemas shipped with the service.

export interface StageOneHit {
  chunk_id: string;
  score: number;
  short_summary: string;
  politician: string;
  party: string;
  topic: string;
  session_date: string;
  doc_id: string;
}

export interface StageOneResult {
  query: string;
  hits: StageOneHit[];
}

export interface StageTwoResponse {
  query: string;
  chunk_id: string;
  response_text: string;
  context_used: "full_summary" | "raw_chunk";
  backend_model: string;
}

export interface SourceBundle {
  chunk: {
    chunk_id: string;
    turn_id: string;
    seq: number;
    text: string;
    char_start: number;
    char_end: number;
  };
  turn: {
    turn_id: string;
    doc_id: string;
    sequence: number;
    speaker: string;
    party: string;
    text: string;
  };
  document: {
    doc_id: string;
    session_date: string;
    session_type: "plenary" | "committee";
    language: string;
    source_url: string;
    turn_count: number;
  };
}

export interface FeedbackEvent {
  event_id: string;
  query: string;
  chunk_id: string;
  stage: FeedbackStage;
  rating: FeedbackRating;
  created_at: string;
}

export type FeedbackStage = "retrieval" | "generation";
export type FeedbackRating = "positive" | "negative";

export interface QueryFilter {
  politician?: string;
  party?: string;
  topic?: string;
}
