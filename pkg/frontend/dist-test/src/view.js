"use strict";
// View models: plain data derived 1:1 from the API response.  The UI
// never reorders, filters, or rescales results; component scores arrive
// already normalized to [0, 1] and map directly onto bar widths.
Object.defineProperty(exports, "__esModule", { value: true });
exports.toResultView = toResultView;
exports.toResultViews = toResultViews;
function toResultView(result) {
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
function toResultViews(response) {
    return response.results.map(toResultView);
}
