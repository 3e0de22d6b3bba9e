// Wire types for the bridge's stream protocol: one JSON object per text
// message, version checked through the hello exchange.

export const PROTOCOL_VERSION = 1;

export type SeasonName = "winter" | "spring" | "summer" | "autumn";
export type PrecipitationKindName = "none" | "rain" | "rainstorm" | "snow";
export type InjectKind = "temperature" | "humidity" | "flame";

export interface Precipitation {
  kind: PrecipitationKindName;
  intensity: number;
}

export interface SceneState {
  tick: number;
  season: SeasonName;
  progress: number;
  temperature_c: number;
  humidity_pct: number;
  foliage_rgb: [number, number, number];
  precipitation: Precipitation;
  flame: boolean;
}

export interface StateMessage extends SceneState {
  type: "state";
  v: number;
}

export interface HelloMessage {
  type: "hello";
  v: number;
}

export type ServerMessage = StateMessage | HelloMessage;

const SEASONS = new Set(["winter", "spring", "summer", "autumn"]);
const PRECIPITATION_KINDS = new Set(["none", "rain", "rainstorm", "snow"]);

function isFiniteNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function isRgb(x: unknown): x is [number, number, number] {
  return (
    Array.isArray(x) &&
    x.length === 3 &&
    x.every((c) => isFiniteNumber(c) && c >= 0 && c <= 255)
  );
}

function isPrecipitation(x: unknown): x is Precipitation {
  if (typeof x !== "object" || x === null) return false;
  const p = x as Record<string, unknown>;
  return (
    typeof p.kind === "string" &&
    PRECIPITATION_KINDS.has(p.kind) &&
    isFiniteNumber(p.intensity) &&
    p.intensity >= 0 &&
    p.intensity <= 1
  );
}

export function isStateMessage(x: unknown): x is StateMessage {
  if (typeof x !== "object" || x === null) return false;
  const m = x as Record<string, unknown>;
  return (
    m.type === "state" &&
    isFiniteNumber(m.v) &&
    isFiniteNumber(m.tick) &&
    typeof m.season === "string" &&
    SEASONS.has(m.season) &&
    isFiniteNumber(m.progress) &&
    isFiniteNumber(m.temperature_c) &&
    isFiniteNumber(m.humidity_pct) &&
    isRgb(m.foliage_rgb) &&
    isPrecipitation(m.precipitation) &&
    typeof m.flame === "boolean"
  );
}

export function isHelloMessage(x: unknown): x is HelloMessage {
  if (typeof x !== "object" || x === null) return false;
  const m = x as Record<string, unknown>;
  return m.type === "hello" && isFiniteNumber(m.v);
}

/** Parse one server message; anything malformed becomes null (callers
 * count and drop it). */
export function parseServerMessage(text: string): ServerMessage | null {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch {
    return null;
  }
  if (isStateMessage(doc)) return doc;
  if (isHelloMessage(doc)) return doc;
  return null;
}

export function helloMessage(): string {
  return JSON.stringify({ type: "hello", v: PROTOCOL_VERSION });
}

export function injectMessage(kind: InjectKind, value: number): string {
  return JSON.stringify({ type: "inject", kind, value });
}
