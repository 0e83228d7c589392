// Orchestrates the search flow: debounced parameter changes, at most one
// in-flight request with latest-wins semantics, and explicit view states
// the DOM layer renders.

import { ApiError, performSearch, type FetchLike } from "./api.js";
import { debounce, realClock, type Clock } from "./debounce.js";
import type { SearchParams } from "./state.js";
import { toResultViews, type ViewState } from "./view.js";

export interface ControllerOptions {
  base?: string;
  debounceMs?: number;
  fetchLike?: FetchLike;
  clock?: Clock;
  onState: (state: ViewState) => void;
  onParams?: (params: SearchParams) => void;
}

export class SearchController {
  private readonly base: string;
  private readonly fetchLike: FetchLike;
  private readonly onState: (state: ViewState) => void;
  private readonly onParams?: (params: SearchParams) => void;
  private readonly schedule: (params: SearchParams) => void;
  private requestSeq = 0;
  private inFlight: AbortController | null = null;

  constructor(options: ControllerOptions) {
    this.base = options.base ?? "";
    this.fetchLike = options.fetchLike
      ?? ((url, init) => fetch(url, init));
    this.onState = options.onState;
    this.onParams = options.onParams;
    this.schedule = debounce(
      (params: SearchParams) => void this.runSearch(params),
      options.debounceMs ?? 250,
      options.clock ?? realClock,
    );
  }

  /** Debounced entry point for input and slider changes. */
  update(params: SearchParams): void {
    this.onParams?.(params);
    if (!params.q.trim()) {
      this.requestSeq += 1; // invalidate anything in flight
      this.onState({ kind: "idle" });
      return;
    }
    this.schedule(params);
  }

  /** Immediate search, used on initial page load from the URL. */
  async runSearch(params: SearchParams): Promise<void> {
    const seq = ++this.requestSeq;
    this.inFlight?.abort();
    const aborter = typeof AbortController !== "undefined"
      ? new AbortController() : null;
    this.inFlight = aborter;
    this.onState({ kind: "loading" });
    try {
      const response = await performSearch(this.fetchLike, this.base, params,
                                           aborter?.signal);
      if (seq !== this.requestSeq) return; // a newer request superseded us
      const rows = toResultViews(response);
      this.onState(rows.length
        ? { kind: "results", query: response.query, rows }
        : { kind: "empty", query: response.query });
    } catch (err) {
      if (seq !== this.requestSeq) return;
      const message = err instanceof ApiError
        ? err.message
        : "search service unreachable";
      this.onState({ kind: "error", message });
    }
  }
}
