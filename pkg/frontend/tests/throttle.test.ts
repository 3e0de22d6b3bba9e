import { beforeEach, describe, expect, it } from "vitest";

import { BridgeSocket, type SocketLike, type Timers } from "../src/socket.js";
import { ViewModel } from "../src/viewmodel.js";

class CountingSocket implements SocketLike {
  sent: string[] = [];
  onopen: (() => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  send(data: string): void {
    this.sent.push(data);
  }
  close(): void {}
}

function manualClock(): Timers & { advance(ms: number): void } {
  let now = 0;
  let pending: { at: number; fn: () => void; id: number }[] = [];
  let nextId = 1;
  return {
    now: () => now,
    setTimeout(fn, ms) {
      const id = nextId++;
      pending.push({ at: now + ms, fn, id });
      return id;
    },
    clearTimeout(handle) {
      pending = pending.filter((p) => p.id !== handle);
    },
    advance(ms) {
      const target = now + ms;
      for (;;) {
        const due = pending.filter((p) => p.at <= target).sort((a, b) => a.at - b.at);
        if (due.length === 0) break;
        const next = due[0];
        pending = pending.filter((p) => p.id !== next.id);
        now = next.at;
        next.fn();
      }
      now = target;
    },
  };
}

describe("steering throttle", () => {
  let ws: CountingSocket;
  let clock: ReturnType<typeof manualClock>;
  let socket: BridgeSocket;

  beforeEach(() => {
    ws = new CountingSocket();
    clock = manualClock();
    socket = new BridgeSocket("ws://test/ws", new ViewModel(), () => ws, clock);
    socket.connect();
    ws.onopen?.();
    ws.sent.length = 0; // drop the hello
  });

  function injectsOf(kind: string): number[] {
    return ws.sent
      .map((text) => JSON.parse(text))
      .filter((m) => m.type === "inject" && m.kind === kind)
      .map((m) => m.value);
  }

  it("caps a continuous drag at 10 messages per second", () => {
    const stamps: number[] = [];
    const rawSend = ws.send.bind(ws);
    ws.send = (data: string) => {
      stamps.push(clock.now());
      rawSend(data);
    };
    // 50 Hz of input events for two seconds
    for (let i = 0; i < 100; i++) {
      socket.steer("temperature", 20 + i * 0.1);
      clock.advance(20);
    }
    expect(stamps.length).toBeGreaterThanOrEqual(18);
    // no one-second window contains more than 10 sends
    for (const start of stamps) {
      const inWindow = stamps.filter((t) => t >= start && t < start + 1000);
      expect(inWindow.length).toBeLessThanOrEqual(10);
    }
  });

  it("always delivers the final dragged value", () => {
    socket.steer("temperature", 21);
    socket.steer("temperature", 22);
    socket.steer("temperature", 28);
    expect(injectsOf("temperature")).toEqual([21]);
    clock.advance(100);
    expect(injectsOf("temperature")).toEqual([21, 28]);
  });

  it("throttles per control, not globally", () => {
    socket.steer("temperature", 25);
    socket.steer("humidity", 80);
    expect(injectsOf("temperature")).toEqual([25]);
    expect(injectsOf("humidity")).toEqual([80]);
  });

  it("lighter press and release both land", () => {
    socket.steer("flame", 1);
    clock.advance(30);
    socket.steer("flame", 0);
    clock.advance(100);
    expect(injectsOf("flame")).toEqual([1, 0]);
  });

  it("sustained drag over three seconds stays within the cap", () => {
    for (let i = 0; i < 300; i++) {
      socket.steer("humidity", 50 + (i % 40));
      clock.advance(10);
    }
    const count = injectsOf("humidity").length;
    expect(count).toBeLessThanOrEqual(31); // 10/s over 3 s, plus the leading edge
  });
});
