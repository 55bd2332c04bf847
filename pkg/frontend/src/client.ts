// Thin HTTP client for the table service. One in-flight action at a time;
// submissions carry an idempotency key so a network retry can never act
// twice. A 409 conflict surfaces the engine's reason verbatim.

import type { LegalAction, ViewPayload } from "./viewmodel.js";

export interface SessionInfo {
  session_id: string;
  tokens: Record<string, string>;
  spectator_token: string;
  players: string[];
  status: string;
  version: number;
}

export interface Diagnostics {
  valid: boolean;
  canonical?: string;
  diagnostics?: { line: number | null; message: string }[];
}

export interface Ack {
  ok: boolean;
  version: number;
  status: string;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(detail);
  }
}

async function asJson(res: Response): Promise<any> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    throw new ApiError(res.status, body.detail ?? res.statusText);
  }
  return body;
}

let keyCounter = 0;

export function freshKey(): string {
  keyCounter += 1;
  return `ui-${Date.now()}-${keyCounter}-${Math.floor(Math.random() * 1e9)}`;
}

export class ApiClient {
  constructor(public base: string, private fetchImpl: typeof fetch = fetch) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  async validateScript(script: string): Promise<Diagnostics> {
    const res = await this.fetchImpl(this.url("/scripts/validate"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ script }),
    });
    return asJson(res);
  }

  async createSession(
    script: string,
    opts: { seed?: number; stacks?: number; bots?: string[]; carry_stacks?: boolean } = {},
  ): Promise<SessionInfo> {
    const res = await this.fetchImpl(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ script, ...opts }),
    });
    return asJson(res);
  }

  async view(sessionId: string, token: string): Promise<ViewPayload> {
    const res = await this.fetchImpl(
      this.url(`/sessions/${sessionId}/view?token=${encodeURIComponent(token)}`),
    );
    return asJson(res);
  }

  async act(sessionId: string, token: string, action: string, key?: string): Promise<Ack> {
    const idempotency = key ?? freshKey();
    let lastError: unknown = null;
    for (let attempt = 0; attempt < 3; attempt += 1) {
      try {
        const res = await this.fetchImpl(this.url(`/sessions/${sessionId}/actions`), {
          method: "POST",
          headers: { "content-type": "application/json" },
          body: JSON.stringify({ token, action, idempotency_key: idempotency }),
        });
        return await asJson(res);
      } catch (err) {
        if (err instanceof ApiError) throw err; // server spoke: do not retry
        lastError = err; // network hiccup: same key, try again
      }
    }
    throw lastError;
  }

  async events(sessionId: string, token: string, since: number, timeoutMs = 20000): Promise<{
    version: number;
    status: string;
    events: { v: number; fn: string; round: number }[];
  }> {
    const res = await this.fetchImpl(
      this.url(
        `/sessions/${sessionId}/events?token=${encodeURIComponent(token)}` +
          `&since=${since}&timeout_ms=${timeoutMs}`,
      ),
    );
    return asJson(res);
  }

  async transcript(sessionId: string): Promise<{ script: string; seed: number; records: any[] }> {
    const res = await this.fetchImpl(this.url(`/sessions/${sessionId}/transcript`));
    return asJson(res);
  }
}

export type { LegalAction, ViewPayload };
