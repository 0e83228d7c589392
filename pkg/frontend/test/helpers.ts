// Test doubles: a hand-stepped clock and a scripted fetch.

import type { Clock } from "../src/debounce.js";
import type { FetchLike } from "../src/api.js";
import type { SearchResponse } from "../src/types.js";

export class FakeClock implements Clock {
  private now = 0;
  private next = 1;
  private timers = new Map<number, { at: number; fn: () => void }>();

  setTimeout(fn: () => void, ms: number): unknown {
    const handle = this.next++;
    this.timers.set(handle, { at: this.now + ms, fn });
    return handle;
  }

  clearTimeout(handle: unknown): void {
    this.timers.delete(handle as number);
  }

  advance(ms: number): void {
    this.now += ms;
    for (const [handle, timer] of [...this.timers]) {
      if (timer.at <= this.now) {
        this.timers.delete(handle);
        timer.fn();
      }
    }
  }
}

export interface RecordedRequest {
  url: string;
  respond: (response: SearchResponse) => void;
  fail: (status: number, error: string) => void;
}

/** Fetch double that records every request and lets tests answer each one
 *  explicitly (in any order, for latest-wins checks). */
export function recordingFetch(): { fetchLike: FetchLike; requests: RecordedRequest[] } {
  const requests: RecordedRequest[] = [];
  const fetchLike: FetchLike = (url) =>
    new Promise((resolve) => {
      requests.push({
        url,
        respond: (response) =>
          resolve({ ok: true, status: 200, json: async () => response }),
        fail: (status, error) =>
          resolve({ ok: false, status, json: async () => ({ error }) }),
      });
    });
  return { fetchLike, requests };
}

export function flushMicrotasks(): Promise<void> {
  return new Promise((resolve) => setImmediate(resolve));
}
