// View models: plain data derived 1:1 from the API response.  The UI
// never reorders, filters, or rescales results; component scores arrive
// already normalized to [0, 1] and map directly onto bar widths.

import type { ApiResult, SearchResponse } from "./types.js";

export interface ResultView {
  page: string;
  href: string;
  position: number;
  fused: number;
  bars: { text: number; social: number; static: number };
}

export function toResultView(result: ApiResult): ResultView {
  return {
    page: result.page,
    href: result.page,
    position: result.position,
    fused: result.score,
    bars: {
      text: result.components.text,
      social: result.components.social,
      static: result.components.static,
    },
  };
}

export function toResultViews(response: SearchResponse): ResultView[] {
  return response.results.map(toResultView);
}

export type ViewState =
  | { kind: "idle" }
  | { kind: "loading" }
  | { kind: "results"; query: string; rows: ResultView[] }
  | { kind: "empty"; query: string }
  | { kind: "error"; message: string };
