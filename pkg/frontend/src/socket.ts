// Reconnecting bridge connection: hello handshake with version check,
// state dispatch into the view model, and rate-limited steering.

import {
  PROTOCOL_VERSION,
  helloMessage,
  injectMessage,
  parseServerMessage,
  type InjectKind,
} from "./protocol.js";
import type { ViewModel } from "./viewmodel.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface Timers {
  setTimeout(fn: () => void, ms: number): unknown;
  clearTimeout(handle: unknown): void;
  now(): number;
}

const REAL_TIMERS: Timers = {
  setTimeout: (fn, ms) => setTimeout(fn, ms),
  clearTimeout: (h) => clearTimeout(h as Parameters<typeof clearTimeout>[0]),
  now: () => Date.now(),
};

export const INJECT_INTERVAL_MS = 100; // hard cap: 10 steering messages/s per control
const BACKOFF_START_MS = 500;
const BACKOFF_CAP_MS = 5000;

interface PendingSteer {
  value: number;
  handle: unknown;
}

export class BridgeSocket {
  readonly url: string;
  sent = 0;

  private vm: ViewModel;
  private factory: SocketFactory;
  private timers: Timers;
  private ws: SocketLike | null = null;
  private open = false;
  private everConnected = false;
  private closed = false;
  private backoffMs = BACKOFF_START_MS;
  private reconnectHandle: unknown = null;
  private lastSent = new Map<InjectKind, number>();
  private pending = new Map<InjectKind, PendingSteer>();

  constructor(
    url: string,
    vm: ViewModel,
    factory: SocketFactory = (u) => new WebSocket(u) as unknown as SocketLike,
    timers: Timers = REAL_TIMERS,
  ) {
    this.url = url;
    this.vm = vm;
    this.factory = factory;
    this.timers = timers;
  }

  connect(): void {
    if (this.closed) return;
    this.vm.setStatus(this.everConnected ? "reconnecting" : "connecting");
    const ws = this.factory(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.open = true;
      ws.send(helloMessage());
    };
    ws.onmessage = (ev) => this.handleMessage(String(ev.data));
    ws.onerror = () => undefined; // close always follows
    ws.onclose = () => {
      this.open = false;
      if (this.closed) return;
      this.vm.setStatus("reconnecting");
      this.scheduleReconnect();
    };
  }

  private scheduleReconnect(): void {
    if (this.reconnectHandle !== null) return;
    const delay = this.backoffMs;
    this.backoffMs = Math.min(this.backoffMs * 2, BACKOFF_CAP_MS);
    this.reconnectHandle = this.timers.setTimeout(() => {
      this.reconnectHandle = null;
      this.connect();
    }, delay);
  }

  private handleMessage(text: string): void {
    const msg = parseServerMessage(text);
    if (msg === null) {
      this.vm.countDropped();
      return;
    }
    if (msg.type === "hello") {
      if (msg.v !== PROTOCOL_VERSION) {
        this.vm.setStatus(
          "version-mismatch",
          `server speaks protocol v${msg.v}, this client speaks v${PROTOCOL_VERSION}`,
        );
      } else {
        this.everConnected = true;
        this.backoffMs = BACKOFF_START_MS;
        this.vm.setStatus("connected");
      }
      return;
    }
    if (this.vm.status === "version-mismatch") return;
    this.vm.setState(msg);
  }

  /** Steering from a control: rate-limited per control, and the latest
   * value always lands (trailing send at the interval boundary). */
  steer(kind: InjectKind, value: number): void {
    const now = this.timers.now();
    const last = this.lastSent.get(kind);
    const pending = this.pending.get(kind);
    if (pending !== undefined) {
      pending.value = value;
      return;
    }
    if (last === undefined || now - last >= INJECT_INTERVAL_MS) {
      this.sendInject(kind, value, now);
      return;
    }
    const wait = INJECT_INTERVAL_MS - (now - last);
    const entry: PendingSteer = { value, handle: null };
    entry.handle = this.timers.setTimeout(() => {
      this.pending.delete(kind);
      this.sendInject(kind, entry.value, this.timers.now());
    }, wait);
    this.pending.set(kind, entry);
  }

  private sendInject(kind: InjectKind, value: number, now: number): void {
    if (!this.open || this.ws === null) return;
    this.ws.send(injectMessage(kind, value));
    this.lastSent.set(kind, now);
    this.sent++;
  }

  close(): void {
    this.closed = true;
    if (this.reconnectHandle !== null) {
      this.timers.clearTimeout(this.reconnectHandle);
      this.reconnectHandle = null;
    }
    for (const entry of this.pending.values()) {
      this.timers.clearTimeout(entry.handle);
    }
    this.pending.clear();
    this.ws?.close();
  }
}
