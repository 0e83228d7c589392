"use strict";
// All UI state lives in the URL query string, so any view is shareable
// and reloading reproduces it exactly.
Object.defineProperty(exports, "__esModule", { value: true });
exports.DEFAULT_PARAMS = void 0;
exports.parseParams = parseParams;
exports.formatParams = formatParams;
exports.DEFAULT_PARAMS = {
    q: "",
    k: 10,
    weights: [0.6, 0.2, 0.2],
};
function clamp01(value) {
    if (!Number.isFinite(value) || value < 0)
        return 0;
    return value > 1 ? 1 : value;
}
function parseParams(query) {
    const usp = new URLSearchParams(query);
    const params = {
        q: usp.get("q") ?? exports.DEFAULT_PARAMS.q,
        k: exports.DEFAULT_PARAMS.k,
        weights: [...exports.DEFAULT_PARAMS.weights],
    };
    const k = Number(usp.get("k"));
    if (Number.isInteger(k) && k >= 1)
        params.k = k;
    const w = (usp.get("w") ?? "").split(",").map(Number);
    if (w.length === 3 && w.every((x) => Number.isFinite(x) && x >= 0)
        && w.some((x) => x > 0)) {
        params.weights = [clamp01(w[0]), clamp01(w[1]), clamp01(w[2])];
    }
    return params;
}
function formatParams(params) {
    const usp = new URLSearchParams();
    if (params.q)
        usp.set("q", params.q);
    usp.set("k", String(params.k));
    usp.set("w", params.weights.map((w) => String(w)).join(","));
    return usp.toString();
}
