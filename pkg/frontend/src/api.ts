/** Thin client for the audit-service endpoints. */

import type {
  ChangesResponse,
  FindingsResponse,
  SessionResponse,
  SnapshotResponse,
  TimelineResponse,
} from "./types.js";

/** Filter specs ride in repeated `filter=` parameters; their leading "+"
 * must be percent-encoded or form decoding would turn it into a space. */
export function changesQuery(specs: string[]): string {
  return specs.map((spec) => `filter=${encodeURIComponent(spec)}`).join("&");
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function check<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* keep the status text */
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class AuditApi {
  constructor(private readonly base: string = "") {}

  async openSession(path: string): Promise<SessionResponse> {
    const response = await fetch(`${this.base}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ path }),
    });
    return check<SessionResponse>(response);
  }

  async changes(sessionId: string, specs: string[]): Promise<ChangesResponse> {
    const query = changesQuery(specs);
    const url = `${this.base}/sessions/${sessionId}/changes${query ? "?" + query : ""}`;
    return check<ChangesResponse>(await fetch(url));
  }

  async findings(sessionId: string, at?: string): Promise<FindingsResponse> {
    const suffix = at ? `?at=${encodeURIComponent(at)}` : "";
    return check<FindingsResponse>(
      await fetch(`${this.base}/sessions/${sessionId}/findings${suffix}`),
    );
  }

  async snapshot(sessionId: string, at?: string): Promise<SnapshotResponse> {
    const suffix = at ? `?at=${encodeURIComponent(at)}` : "";
    return check<SnapshotResponse>(
      await fetch(`${this.base}/sessions/${sessionId}/snapshot${suffix}`),
    );
  }

  async timeline(sessionId: string): Promise<TimelineResponse> {
    return check<TimelineResponse>(
      await fetch(`${this.base}/sessions/${sessionId}/timeline`),
    );
  }
}
