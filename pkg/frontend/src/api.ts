import { API_BASE } from "./config.js";
import type {
  FeedbackEvent,
  FeedbackRating,
  FeedbackStage,
  QueryFilter,
  SourceBundle,
  StageOneResult,
  StageTwoResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
  }
}

async function parseJson(response: Response): Promise<unknown> {
  const body = (await response.json().catch(() => null)) as Record<string, string> | null;
  if (!response.ok) {
    throw new ApiError(body?.code ?? "http_error", body?.message ?? response.statusText, response.status);
  }
  return body;
}

export class ApiClient {
  constructor(private base: string = API_BASE) {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  async suggestions(): Promise<string[]> {
    const body = (await parseJson(await fetch(this.url("/api/suggestions")))) as {
      suggestions: string[];
    };
    return body.suggestions;
  }

  async query(query: string, k?: number, filter?: QueryFilter): Promise<StageOneResult> {
    const payload: Record<string, unknown> = { query };
    if (k !== undefined) payload.k = k;
    if (filter && Object.values(filter).some((v) => v)) payload.filter = filter;
    const response = await fetch(this.url("/api/query"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    return (await parseJson(response)) as StageOneResult;
  }

  async respond(chunkId: string, query: string): Promise<StageTwoResponse> {
    // chunk ids contain '#' and ':'; they must be URL-encoded in paths
    const response = await fetch(this.url(`/api/chunks/${encodeURIComponent(chunkId)}/respond`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ query }),
    });
    return (await parseJson(response)) as StageTwoResponse;
  }

  async source(chunkId: string): Promise<SourceBundle> {
    const response = await fetch(this.url(`/api/chunks/${encodeURIComponent(chunkId)}/source`));
    return (await parseJson(response)) as SourceBundle;
  }

  async feedback(
    query: string,
    chunkId: string,
    stage: FeedbackStage,
    rating: FeedbackRating,
  ): Promise<FeedbackEvent> {
    const response = await fetch(this.url("/api/feedback"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ query, chunk_id: chunkId, stage, rating }),
    });
    return (await parseJson(response)) as FeedbackEvent;
  }
}
