// Wire-format types and the fetch client for the agent service.
// The shapes mirror the service's /chat and /schema responses verbatim.

export interface ChatTrace {
  needs_knowledge: boolean;
  suql: string | null;
  explain: string | null;
  stats: Record<string, unknown> | null;
  attempts: number;
  searched: string | null;
  error: string | null;
  failed_queries: string[];
}

export interface ResultColumn {
  name: string;
  type: string;
}

export interface ResultPayload {
  columns: ResultColumn[];
  rows: unknown[][];
  stats: Record<string, unknown>;
}

export interface ChatResponse {
  session_id: string;
  reply: string;
  searched: string | null;
  suql?: string;
  results?: ResultPayload;
  trace: ChatTrace;
}

export interface SchemaColumn {
  name: string;
  type: string;
}

export interface SchemaTable {
  name: string;
  columns: SchemaColumn[];
}

export interface SchemaResponse {
  tables: SchemaTable[];
}

export interface ServiceError {
  code: string;
  message: string;
}

export class ApiError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.code = code;
  }
}

export class ChatClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async chat(utterance: string, sessionId: string | null): Promise<ChatResponse> {
    const body: Record<string, string> = { utterance };
    if (sessionId) {
      body.session_id = sessionId;
    }
    const resp = await this.fetchFn(`${this.baseUrl}/chat`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return this.unwrap<ChatResponse>(resp);
  }

  async schema(): Promise<SchemaResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/schema`);
    return this.unwrap<SchemaResponse>(resp);
  }

  private async unwrap<T>(resp: Response): Promise<T> {
    if (!resp.ok) {
      let err: ServiceError = { code: "http_error", message: `HTTP ${resp.status}` };
      try {
        err = (await resp.json()) as ServiceError;
      } catch {
        // non-JSON error body: keep the status-based message
      }
      throw new ApiError(err.code, err.message);
    }
    return (await resp.json()) as T;
  }
}
