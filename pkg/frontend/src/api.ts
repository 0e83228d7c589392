// Thin client for GET /search; fetch is injected so tests can fake it.

import type { SearchResponse } from "./types.js";
import type { SearchParams } from "./state.js";

export type FetchLike = (url: string, init?: { signal?: AbortSignal }) =>
  Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export function buildSearchUrl(base: string, params: SearchParams): string {
  const usp = new URLSearchParams();
  usp.set("q", params.q);
  usp.set("k", String(params.k));
  usp.set("w", params.weights.map((w) => String(w)).join(","));
  return `${base.replace(/\/$/, "")}/search?${usp.toString()}`;
}

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export async function performSearch(
  fetchLike: FetchLike,
  base: string,
  params: SearchParams,
  signal?: AbortSignal,
): Promise<SearchResponse> {
  const resp = await fetchLike(buildSearchUrl(base, params), { signal });
  if (!resp.ok) {
    let detail = `search failed with status ${resp.status}`;
    try {
      const body = (await resp.json()) as { error?: string };
      if (body && body.error) detail = body.error;
    } catch {
      // non-JSON error body; keep the status message
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as SearchResponse;
}
