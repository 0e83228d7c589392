"use strict";
// Orchestrates the search flow: debounced parameter changes, at most one
// in-flight request with latest-wins semantics, and explicit view states
// the DOM layer renders.
Object.defineProperty(exports, "__esModule", { value: true });
exports.SearchController = void 0;
const api_js_1 = require("./api.js");
const debounce_js_1 = require("./debounce.js");
const view_js_1 = require("./view.js");
class SearchController {
    constructor(options) {
        this.requestSeq = 0;
        this.inFlight = null;
        this.base = options.base ?? "";
        this.fetchLike = options.fetchLike
            ?? ((url, init) => fetch(url, init));
        this.onState = options.onState;
        this.onParams = options.onParams;
        this.schedule = (0, debounce_js_1.debounce)((params) => void this.runSearch(params), options.debounceMs ?? 250, options.clock ?? debounce_js_1.realClock);
    }
    /** Debounced entry point for input and slider changes. */
    update(params) {
        this.onParams?.(params);
        if (!params.q.trim()) {
            this.requestSeq += 1; // invalidate anything in flight
            this.onState({ kind: "idle" });
            return;
        }
        this.schedule(params);
    }
    /** Immediate search, used on initial page load from the URL. */
    async runSearch(params) {
        const seq = ++this.requestSeq;
        this.inFlight?.abort();
        const aborter = typeof AbortController !== "undefined"
            ? new AbortController() : null;
        this.inFlight = aborter;
        this.onState({ kind: "loading" });
        try {
            const response = await (0, api_js_1.performSearch)(this.fetchLike, this.base, params, aborter?.signal);
            if (seq !== this.requestSeq)
                return; // a newer request superseded us
            const rows = (0, view_js_1.toResultViews)(response);
            this.onState(rows.length
                ? { kind: "results", query: response.query, rows }
                : { kind: "empty", query: response.query });
        }
        catch (err) {
            if (seq !== this.requestSeq)
                return;
            const message = err instanceof api_js_1.ApiError
                ? err.message
                : "search service unreachable";
            this.onState({ kind: "error", message });
        }
    }
}
exports.SearchController = SearchController;
