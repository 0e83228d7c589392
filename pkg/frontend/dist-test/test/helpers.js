"use strict";
// Test doubles: a hand-stepped clock and a scripted fetch.
Object.defineProperty(exports, "__esModule", { value: true });
exports.FakeClock = void 0;
exports.recordingFetch = recordingFetch;
exports.flushMicrotasks = flushMicrotasks;
class FakeClock {
    constructor() {
        this.now = 0;
        this.next = 1;
        this.timers = new Map();
    }
    setTimeout(fn, ms) {
        const handle = this.next++;
        this.timers.set(handle, { at: this.now + ms, fn });
        return handle;
    }
    clearTimeout(handle) {
        this.timers.delete(handle);
    }
    advance(ms) {
        this.now += ms;
        for (const [handle, timer] of [...this.timers]) {
            if (timer.at <= this.now) {
                this.timers.delete(handle);
                timer.fn();
            }
        }
    }
}
exports.FakeClock = FakeClock;
/** Fetch double that records every request and lets tests answer each one
 *  explicitly (in any order, for latest-wins checks). */
function recordingFetch() {
    const requests = [];
    const fetchLike = (url) => new Promise((resolve) => {
        requests.push({
            url,
            respond: (response) => resolve({ ok: true, status: 200, json: async () => response }),
            fail: (status, error) => resolve({ ok: false, status, json: async () => ({ error }) }),
        });
    });
    return { fetchLike, requests };
}
function flushMicrotasks() {
    return new Promise((resolve) => setImmediate(resolve));
}
