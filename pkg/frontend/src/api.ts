/** Thin client over the measures service. Series requests cancel any
 * in-flight predecessor so stale responses never overwrite newer selections;
 * HTTP error details are surfaced verbatim for the UI to display. */

import type { Catalogue, EstimateResponse, SeriesResponse, SummaryStats } from "./types.js";

export interface ResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string; signal?: AbortSignal },
) => Promise<ResponseLike>;

export class ApiError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function unwrap<T>(resp: ResponseLike): Promise<T> {
  const body = (await resp.json()) as Record<string, unknown>;
  if (!resp.ok) {
    const detail = typeof body?.detail === "string" ? body.detail : `request failed (${resp.status})`;
    throw new ApiError(resp.status, detail);
  }
  return body as T;
}

/** Client-side mirror of the server's default window: thirteen months back
 * through one month back, day-of-month clamped. */
export function defaultWindow(today: Date = new Date()): { from: string; to: string } {
  const shift = (months: number): string => {
    const base = new Date(Date.UTC(today.getUTCFullYear(), today.getUTCMonth(), 1));
    base.setUTCMonth(base.getUTCMonth() + months);
    const lastDay = new Date(Date.UTC(base.getUTCFullYear(), base.getUTCMonth() + 1, 0)).getUTCDate();
    base.setUTCDate(Math.min(today.getUTCDate(), lastDay));
    return base.toISOString().slice(0, 10);
  };
  return { from: shift(-13), to: shift(-1) };
}

export class ApiClient {
  private seriesAbort: AbortController | null = null;

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  async getCatalogue(): Promise<Catalogue> {
    return unwrap<Catalogue>(await this.fetchImpl(`${this.baseUrl}/assets`));
  }

  /** Cancels the previous series request if one is still running. */
  async getSeries(symbol: string, names: string[], from: string, to: string): Promise<SeriesResponse> {
    this.seriesAbort?.abort();
    const ctl = typeof AbortController !== "undefined" ? new AbortController() : null;
    this.seriesAbort = ctl;
    const qs = new URLSearchParams({ from, to, names: names.join(",") });
    return unwrap<SeriesResponse>(
      await this.fetchImpl(`${this.baseUrl}/measures/${encodeURIComponent(symbol)}?${qs}`, {
        signal: ctl?.signal,
      }),
    );
  }

  async getSummary(symbol: string, measure: string, from: string, to: string): Promise<SummaryStats> {
    const qs = new URLSearchParams({ from, to, measure });
    return unwrap<SummaryStats>(
      await this.fetchImpl(`${this.baseUrl}/summary/${encodeURIComponent(symbol)}?${qs}`),
    );
  }

  async estimate(req: {
    symbol: string;
    measure: string;
    family: string;
    from: string;
    to: string;
  }): Promise<EstimateResponse> {
    return unwrap<EstimateResponse>(
      await this.fetchImpl(`${this.baseUrl}/models/estimate`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(req),
      }),
    );
  }
}
