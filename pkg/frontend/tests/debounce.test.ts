import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { debounce } from "../src/debounce.js";

describe("debounce", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
  });

  it("fires once after the delay with the latest arguments", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    fn(1);
    vi.advanceTimersByTime(100);
    fn(2);
    vi.advanceTimersByTime(100);
    fn(3);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(150);
    expect(calls).toEqual([3]);
  });

  it("fires again for calls after the quiet period", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    fn(1);
    vi.advanceTimersByTime(150);
    fn(2);
    vi.advanceTimersByTime(150);
    expect(calls).toEqual([1, 2]);
  });

  it("cancel drops the pending call", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    fn(1);
    fn.cancel();
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([]);
  });

  it("flush runs the pending call immediately", () => {
    const calls: number[] = [];
    const fn = debounce((v: number) => calls.push(v), 150);
    fn(7);
    fn.flush();
    expect(calls).toEqual([7]);
    vi.advanceTimersByTime(500);
    expect(calls).toEqual([7]);
  });
});
