/** Typed client for the corpus service. All linguistics lives server-side;
 * this module only moves JSON. */

import {
  AnswerFeedback,
  ApiErrorBody,
  CorpusSummary,
  ExerciseRequest,
  ExerciseSet,
  QueryResponse,
  QuerySlot,
  SentenceDetail,
  SessionConfig,
  SessionCreated,
  StatsResponse,
  StructuredQuery,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(public readonly body: ApiErrorBody) {
    super(body.message);
  }
}

export interface QueryRequest {
  dsl?: string;
  docFilters?: StructuredQuery["docFilters"];
  slots?: QuerySlot[];
  offset?: number;
  limit?: number;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const text = await response.text();
    if (!response.ok) {
      let body: ApiErrorBody;
      try {
        body = JSON.parse(text) as ApiErrorBody;
      } catch {
        body = { status: response.status, code: "unknown_error",
                 message: text || response.statusText, location: null };
      }
      throw new ApiRequestError(body);
    }
    return JSON.parse(text) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  uploadCorpus(xml: string): Promise<CorpusSummary> {
    return this.request<CorpusSummary>("/corpora", {
      method: "POST",
      headers: { "Content-Type": "application/xml" },
      body: xml,
    });
  }

  listCorpora(): Promise<CorpusSummary[]> {
    return this.request<CorpusSummary[]>("/corpora");
  }

  getCorpus(corpusId: string): Promise<CorpusSummary> {
    return this.request<CorpusSummary>(`/corpora/${corpusId}`);
  }

  query(corpusId: string, body: QueryRequest): Promise<QueryResponse> {
    return this.post<QueryResponse>(`/corpora/${corpusId}/query`, body);
  }

  exercises(corpusId: string, body: ExerciseRequest): Promise<ExerciseSet> {
    return this.post<ExerciseSet>(`/corpora/${corpusId}/exercises`, body);
  }

  createSession(corpusId: string, exerciseRequest: ExerciseRequest,
                config: SessionConfig): Promise<SessionCreated> {
    return this.post<SessionCreated>("/sessions", {
      corpusId, exerciseRequest, config,
    });
  }

  answer(sessionId: string, answer: string): Promise<AnswerFeedback> {
    return this.post<AnswerFeedback>(`/sessions/${sessionId}/answer`, { answer });
  }

  stats(corpusId: string, params: { depth?: number; l1?: string;
        level?: string; min?: number }): Promise<StatsResponse> {
    const search = new URLSearchParams();
    if (params.depth !== undefined) search.set("depth", String(params.depth));
    if (params.l1) search.set("l1", params.l1);
    if (params.level) search.set("level", params.level);
    if (params.min !== undefined) search.set("min", String(params.min));
    const suffix = search.toString() ? `?${search.toString()}` : "";
    return this.request<StatsResponse>(
      `/corpora/${corpusId}/stats/errors${suffix}`);
  }

  sentence(corpusId: string, textId: string,
           sentenceIndex: number): Promise<SentenceDetail> {
    return this.request<SentenceDetail>(
      `/corpora/${corpusId}/texts/${encodeURIComponent(textId)}` +
      `/sentences/${sentenceIndex}`);
  }
}

/** Drops responses that arrive after a newer request was issued
 * (one in-flight query per view). */
export class LatestGate {
  private seq = 0;

  async run<T>(work: () => Promise<T>): Promise<T | undefined> {
    const ticket = ++this.seq;
    const result = await work();
    return ticket === this.seq ? result : undefined;
  }
}
