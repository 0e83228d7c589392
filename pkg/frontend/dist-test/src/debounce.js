"use strict";
// Debounce with an injectable clock so tests can drive time.
Object.defineProperty(exports, "__esModule", { value: true });
exports.realClock = void 0;
exports.debounce = debounce;
exports.realClock = {
    setTimeout: (fn, ms) => setTimeout(fn, ms),
    clearTimeout: (handle) => clearTimeout(handle),
};
function debounce(fn, delayMs, clock = exports.realClock) {
    let pending;
    return (...args) => {
        if (pending !== undefined)
            clock.clearTimeout(pending);
        pending = clock.setTimeout(() => {
            pending = undefined;
            fn(...args);
        }, delayMs);
    };
}
