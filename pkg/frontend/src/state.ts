// All UI state lives in the URL query string, so any view is shareable
// and reloading reproduces it exactly.

import type { WeightTriple } from "./types.js";

export interface SearchParams {
  q: string;
  k: number;
  weights: WeightTriple;
}

export const DEFAULT_PARAMS: SearchParams = {
  q: "",
  k: 10,
  weights: [0.6, 0.2, 0.2],
};

function clamp01(value: number): number {
  if (!Number.isFinite(value) || value < 0) return 0;
  return value > 1 ? 1 : value;
}

export function parseParams(query: string): SearchParams {
  const usp = new URLSearchParams(query);
  const params: SearchParams = {
    q: usp.get("q") ?? DEFAULT_PARAMS.q,
    k: DEFAULT_PARAMS.k,
    weights: [...DEFAULT_PARAMS.weights],
  };
  const k = Number(usp.get("k"));
  if (Number.isInteger(k) && k >= 1) params.k = k;
  const w = (usp.get("w") ?? "").split(",").map(Number);
  if (w.length === 3 && w.every((x) => Number.isFinite(x) && x >= 0)
      && w.some((x) => x > 0)) {
    params.weights = [clamp01(w[0]), clamp01(w[1]), clamp01(w[2])];
  }
  return params;
}

export function formatParams(params: SearchParams): string {
  const usp = new URLSearchParams();
  if (params.q) usp.set("q", params.q);
  usp.set("k", String(params.k));
  usp.set("w", params.weights.map((w) => String(w)).join(","));
  return usp.toString();
}
