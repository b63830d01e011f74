/** Thin fetch-based client for the play service endpoints. */

import type {
  CreateSessionRequest,
  CreateSessionResponse,
  HealthDoc,
  MoveResponse,
  Observation,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
    this.name = "ServiceError";
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { detail?: string };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ServiceError(response.status, detail);
}

export class PlayClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  health(): Promise<HealthDoc> {
    return this.request("GET", "/health");
  }

  createSession(request: CreateSessionRequest = {}): Promise<CreateSessionResponse> {
    return this.request("POST", "/sessions", request);
  }

  observation(sessionId: string): Promise<Observation> {
    return this.request("GET", `/sessions/${sessionId}/observation`);
  }

  /** Submit a move; an empty cards string passes. */
  submitMove(sessionId: string, cards: string): Promise<MoveResponse> {
    return this.request("POST", `/sessions/${sessionId}/moves`, { cards });
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request("DELETE", `/sessions/${sessionId}`);
  }
}
