import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import {
  helloMessage,
  injectMessage,
  parseServerMessage,
} from "../src/protocol.js";

const fixture = readFileSync(
  fileURLToPath(new URL("./fixtures/winter_transcript.jsonl", import.meta.url)),
  "ascii",
).trim().split("\n");

describe("parseServerMessage", () => {
  it("accepts every state in the captured transcript", () => {
    for (const line of fixture) {
      const msg = parseServerMessage(line);
      expect(msg).not.toBeNull();
      expect(msg!.type).toBe("state");
    }
  });

  it("accepts a hello", () => {
    expect(parseServerMessage('{"type":"hello","v":1}')).toEqual({
      type: "hello",
      v: 1,
    });
  });

  it("rejects malformed payloads", () => {
    const state = JSON.parse(fixture[0]);
    const broken = [
      "not json",
      "[]",
      '{"type":"state"}',
      JSON.stringify({ ...state, season: "monsoon" }),
      JSON.stringify({ ...state, foliage_rgb: [1, 2] }),
      JSON.stringify({ ...state, foliage_rgb: [1, 2, 999] }),
      JSON.stringify({ ...state, precipitation: { kind: "hail", intensity: 0.5 } }),
      JSON.stringify({ ...state, temperature_c: "warm" }),
      JSON.stringify({ ...state, flame: 1 }),
    ];
    for (const text of broken) {
      expect(parseServerMessage(text)).toBeNull();
    }
  });
});

describe("client messages", () => {
  it("hello carries protocol version 1", () => {
    expect(JSON.parse(helloMessage())).toEqual({ type: "hello", v: 1 });
  });

  it("inject uses the wire field names", () => {
    expect(JSON.parse(injectMessage("temperature", 28))).toEqual({
      type: "inject",
      kind: "temperature",
      value: 28,
    });
  });
});
