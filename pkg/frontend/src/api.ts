/** Client for the evaluation service. All statistics come from the service;
 * the UI never computes numbers itself. At most one evaluation request is in
 * flight at a time; starting a new one cancels the previous. */

import type { DesignConfig, RunReport, ServiceError } from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly path: string;
  readonly status: number;
  readonly suggestedNSims: number | undefined;

  constructor(status: number, err: ServiceError) {
    super(`${err.code} at ${err.path}: ${err.message}`);
    this.status = status;
    this.code = err.code;
    this.path = err.path;
    this.suggestedNSims = err.suggested_n_sims;
  }
}

export interface EvaluateResult {
  report: RunReport;
  /** exact response bytes, retained so downloads are byte-faithful */
  raw: Uint8Array;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: typeof fetch;
  private inflight: AbortController | null = null;

  constructor(baseUrl = "", fetchFn: typeof fetch = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  /** POST the config; resolves to the parsed report plus the raw bytes. */
  async evaluate(config: DesignConfig): Promise<EvaluateResult> {
    this.cancel();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const resp = await this.fetchFn(`${this.baseUrl}/api/v1/evaluate`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(config),
        signal: controller.signal,
      });
      const raw = new Uint8Array(await resp.arrayBuffer());
      if (!resp.ok) {
        const body = JSON.parse(new TextDecoder().decode(raw)) as {
          error: ServiceError;
        };
        throw new ApiError(resp.status, body.error);
      }
      const report = JSON.parse(new TextDecoder().decode(raw)) as RunReport;
      return { report, raw };
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }

  /** Abort any in-flight evaluation. */
  cancel(): void {
    this.inflight?.abort();
    this.inflight = null;
  }

  get requestInFlight(): boolean {
    return this.inflight !== null;
  }

  async constellations(): Promise<
    { direction: string; go_shape: string; nogo_shape: string }[]
  > {
    const resp = await this.fetchFn(`${this.baseUrl}/api/v1/constellations`);
    if (!resp.ok) throw new Error(`constellations: HTTP ${resp.status}`);
    return (await resp.json()) as {
      direction: string;
      go_shape: string;
      nogo_shape: string;
    }[];
  }

  async health(): Promise<{ status: string; version: string }> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/v1/health`);
    if (!resp.ok) throw new Error(`health: HTTP ${resp.status}`);
    return (await resp.json()) as { status: string; version: string };
  }
}
