// Stylized point-scatter forest driven entirely by the latest scene
// state: ground and canopy carry the broadcast foliage tint exactly,
// precipitation density follows intensity, a flame badge mirrors the
// flame flag. Animation time comes in as a parameter, so a frame is a
// pure function of (state minus tick, timeMs).

import type { SceneState } from "./protocol.js";
import type { Raster, RGB } from "./raster.js";

export const SKY_RGB: RGB = [203, 216, 228];
export const SNOW_RGB: RGB = [255, 255, 255];
export const RAIN_RGB: RGB = [110, 150, 215];
export const RAINSTORM_RGB: RGB = [70, 105, 185];
export const FLAME_RGB: RGB = [235, 120, 30];

export const HORIZON = 0.35; // sky fraction of the frame height
export const TREE_COUNT = 90;
export const MAX_PARTICLES = 150;

// Deterministic coordinate hash (xorshift-style avalanche over 32 bits):
// the scatter layout must be stable across frames and clients.
function hash01(i: number, salt: number): number {
  let x = (i * 0x9e3779b9 + salt * 0x85ebca6b) >>> 0;
  x ^= x >>> 16;
  x = (x * 0x7feb352d) >>> 0;
  x ^= x >>> 15;
  x = (x * 0x846ca68b) >>> 0;
  x ^= x >>> 16;
  return x / 0x100000000;
}

export function particleCount(state: SceneState): number {
  if (state.precipitation.kind === "none") return 0;
  return Math.round(state.precipitation.intensity * MAX_PARTICLES);
}

export function renderScene(state: SceneState, raster: Raster, timeMs = 0): void {
  const w = raster.width;
  const h = raster.height;
  const horizon = Math.floor(h * HORIZON);
  const foliage = state.foliage_rgb;

  raster.fillRect(0, 0, w, horizon, SKY_RGB);
  raster.fillRect(0, horizon, w, h - horizon, foliage);

  for (let i = 0; i < TREE_COUNT; i++) {
    const x = hash01(i, 1) * w;
    const y = horizon + hash01(i, 2) * (h - horizon);
    const r = 2 + hash01(i, 3) * 5;
    raster.fillCircle(x, y, r, foliage);
  }

  const particles = particleCount(state);
  const kind = state.precipitation.kind;
  for (let i = 0; i < particles; i++) {
    const x = hash01(i, 4) * w;
    const fall = (hash01(i, 5) + timeMs / 1500) % 1;
    const y = fall * h;
    if (kind === "snow") {
      raster.fillCircle(x, y, 1.5, SNOW_RGB);
    } else if (kind === "rain") {
      raster.fillRect(x, y, 1, 6, RAIN_RGB);
    } else {
      raster.fillRect(x, y, 2, 10, RAINSTORM_RGB);
    }
  }

  if (state.flame) {
    raster.fillCircle(24, 24, 12, FLAME_RGB);
  }
}
