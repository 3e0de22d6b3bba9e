import { beforeEach, describe, expect, it, vi } from "vitest";

import { BridgeSocket, type SocketLike, type Timers } from "../src/socket.js";
import { ViewModel } from "../src/viewmodel.js";

class FakeSocket implements SocketLike {
  static instances: FakeSocket[] = [];
  sent: string[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: (() => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;

  constructor() {
    FakeSocket.instances.push(this);
  }

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
    this.onclose?.();
  }

  serverSays(data: string): void {
    this.onmessage?.({ data });
  }
}

function fakeTimers(): Timers & { flush(ms: number): void } {
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
    flush(ms) {
      now += ms;
      const due = pending.filter((p) => p.at <= now).sort((a, b) => a.at - b.at);
      pending = pending.filter((p) => p.at > now);
      for (const p of due) p.fn();
    },
  };
}

const STATE =
  '{"type":"state","v":1,"tick":1,"season":"winter","progress":0,' +
  '"temperature_c":8,"humidity_pct":50,"foliage_rgb":[245,245,245],' +
  '"precipitation":{"kind":"none","intensity":0},"flame":false}';

describe("BridgeSocket", () => {
  beforeEach(() => {
    FakeSocket.instances = [];
  });

  function connected() {
    const vm = new ViewModel();
    const timers = fakeTimers();
    const socket = new BridgeSocket("ws://test/ws", vm, () => new FakeSocket(), timers);
    socket.connect();
    const fake = FakeSocket.instances[0];
    fake.onopen?.();
    return { vm, timers, socket, fake };
  }

  it("sends its hello on open and connects on a matching server hello", () => {
    const { vm, fake } = connected();
    expect(fake.sent[0]).toBe('{"type":"hello","v":1}');
    expect(vm.status).toBe("connecting");
    fake.serverSays('{"type":"hello","v":1}');
    expect(vm.status).toBe("connected");
  });

  it("raises the banner on a version mismatch, naming both versions", () => {
    const { vm, fake } = connected();
    fake.serverSays('{"type":"hello","v":2}');
    expect(vm.status).toBe("version-mismatch");
    expect(vm.banner).toContain("v2");
    expect(vm.banner).toContain("v1");
    fake.serverSays(STATE);
    expect(vm.state).toBeNull(); // mismatched stream is not rendered
  });

  it("dispatches states into the view model", () => {
    const { vm, fake } = connected();
    fake.serverSays('{"type":"hello","v":1}');
    fake.serverSays(STATE);
    expect(vm.state?.season).toBe("winter");
    expect(vm.state?.tick).toBe(1);
  });

  it("counts malformed messages without dying", () => {
    const { vm, fake } = connected();
    fake.serverSays('{"type":"hello","v":1}');
    fake.serverSays("garbage");
    fake.serverSays('{"type":"state"}');
    expect(vm.dropped).toBe(2);
    fake.serverSays(STATE);
    expect(vm.state?.tick).toBe(1);
  });

  it("reconnects with backoff after a drop", () => {
    const { vm, timers, fake } = connected();
    fake.serverSays('{"type":"hello","v":1}');
    fake.onclose?.();
    expect(vm.status).toBe("reconnecting");
    expect(FakeSocket.instances).toHaveLength(1);
    timers.flush(500);
    expect(FakeSocket.instances).toHaveLength(2);
    // second drop backs off further: 1000 ms this time
    const second = FakeSocket.instances[1];
    second.onclose?.();
    timers.flush(500);
    expect(FakeSocket.instances).toHaveLength(2);
    timers.flush(500);
    expect(FakeSocket.instances).toHaveLength(3);
  });

  it("close() stops the reconnect loop", () => {
    const { timers, socket, fake } = connected();
    fake.onclose?.();
    socket.close();
    timers.flush(10_000);
    expect(FakeSocket.instances).toHaveLength(1);
  });
});
