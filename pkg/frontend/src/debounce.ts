// Debounce with an injectable clock so tests can drive time.

export interface Clock {
  setTimeout(fn: () => void, ms: number): unknown;
  clearTimeout(handle: unknown): void;
}

export const realClock: Clock = {
  setTimeout: (fn, ms) => setTimeout(fn, ms),
  clearTimeout: (handle) => clearTimeout(handle as Parameters<typeof clearTimeout>[0]),
};

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
  clock: Clock = realClock,
): (...args: A) => void {
  let pending: unknown;
  return (...args: A) => {
    if (pending !== undefined) clock.clearTimeout(pending);
    pending = clock.setTimeout(() => {
      pending = undefined;
      fn(...args);
    }, delayMs);
  };
}
