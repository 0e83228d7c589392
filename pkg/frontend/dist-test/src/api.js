"use strict";
// Thin client for GET /search; fetch is injected so tests can fake it.
Object.defineProperty(exports, "__esModule", { value: true });
exports.ApiError = void 0;
exports.buildSearchUrl = buildSearchUrl;
exports.performSearch = performSearch;
function buildSearchUrl(base, params) {
    const usp = new URLSearchParams();
    usp.set("q", params.q);
    usp.set("k", String(params.k));
    usp.set("w", params.weights.map((w) => String(w)).join(","));
    return `${base.replace(/\/$/, "")}/search?${usp.toString()}`;
}
class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
exports.ApiError = ApiError;
async function performSearch(fetchLike, base, params, signal) {
    const resp = await fetchLike(buildSearchUrl(base, params), { signal });
    if (!resp.ok) {
        let detail = `search failed with status ${resp.status}`;
        try {
            const body = (await resp.json());
            if (body && body.error)
                detail = body.error;
        }
        catch {
            // non-JSON error body; keep the status message
        }
        throw new ApiError(resp.status, detail);
    }
    return (await resp.json());
}
