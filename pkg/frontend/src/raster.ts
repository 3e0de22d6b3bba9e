// Minimal draw surface behind the renderer, so frames can be produced
// and pixel-sampled headlessly (tests) or on a real canvas (browser).

export type RGB = [number, number, number];

export interface Raster {
  readonly width: number;
  readonly height: number;
  clear(color: RGB): void;
  fillRect(x: number, y: number, w: number, h: number, color: RGB): void;
  fillCircle(cx: number, cy: number, r: number, color: RGB): void;
}

/** Software raster over an RGBA byte buffer; no anti-aliasing, so tests
 * can compare and count pixels exactly. */
export class BufferRaster implements Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8ClampedArray;

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.data = new Uint8ClampedArray(width * height * 4);
  }

  private set(x: number, y: number, color: RGB): void {
    const i = (y * this.width + x) * 4;
    this.data[i] = color[0];
    this.data[i + 1] = color[1];
    this.data[i + 2] = color[2];
    this.data[i + 3] = 255;
  }

  clear(color: RGB): void {
    this.fillRect(0, 0, this.width, this.height, color);
  }

  fillRect(x: number, y: number, w: number, h: number, color: RGB): void {
    const x0 = Math.max(0, Math.floor(x));
    const y0 = Math.max(0, Math.floor(y));
    const x1 = Math.min(this.width, Math.ceil(x + w));
    const y1 = Math.min(this.height, Math.ceil(y + h));
    for (let py = y0; py < y1; py++) {
      for (let px = x0; px < x1; px++) {
        this.set(px, py, color);
      }
    }
  }

  fillCircle(cx: number, cy: number, r: number, color: RGB): void {
    const y0 = Math.max(0, Math.floor(cy - r));
    const y1 = Math.min(this.height - 1, Math.ceil(cy + r));
    for (let py = y0; py <= y1; py++) {
      const dy = py - cy;
      const span = Math.sqrt(Math.max(0, r * r - dy * dy));
      const x0 = Math.max(0, Math.floor(cx - span));
      const x1 = Math.min(this.width - 1, Math.ceil(cx + span));
      for (let px = x0; px <= x1; px++) {
        const dx = px - cx;
        if (dx * dx + dy * dy <= r * r) {
          this.set(px, py, color);
        }
      }
    }
  }

  pixel(x: number, y: number): RGB {
    const i = (y * this.width + x) * 4;
    return [this.data[i], this.data[i + 1], this.data[i + 2]];
  }

  /** Count of pixels exactly matching a color. */
  count(color: RGB): number {
    let n = 0;
    for (let i = 0; i < this.data.length; i += 4) {
      if (
        this.data[i] === color[0] &&
        this.data[i + 1] === color[1] &&
        this.data[i + 2] === color[2]
      ) {
        n++;
      }
    }
    return n;
  }
}

/** Most frequent pixel color in the buffer. */
export function dominantColor(raster: BufferRaster): RGB {
  const counts = new Map<number, number>();
  const d = raster.data;
  for (let i = 0; i < d.length; i += 4) {
    const key = (d[i] << 16) | (d[i + 1] << 8) | d[i + 2];
    counts.set(key, (counts.get(key) ?? 0) + 1);
  }
  let bestKey = 0;
  let bestCount = -1;
  for (const [key, count] of counts) {
    if (count > bestCount) {
      bestKey = key;
      bestCount = count;
    }
  }
  return [(bestKey >> 16) & 0xff, (bestKey >> 8) & 0xff, bestKey & 0xff];
}

/** Adapter onto a browser 2D canvas context. */
export class CanvasRaster implements Raster {
  readonly width: number;
  readonly height: number;
  private ctx: CanvasRenderingContext2D;

  constructor(ctx: CanvasRenderingContext2D, width: number, height: number) {
    this.ctx = ctx;
    this.width = width;
    this.height = height;
  }

  private style(color: RGB): void {
    this.ctx.fillStyle = `rgb(${color[0]},${color[1]},${color[2]})`;
  }

  clear(color: RGB): void {
    this.fillRect(0, 0, this.width, this.height, color);
  }

  fillRect(x: number, y: number, w: number, h: number, color: RGB): void {
    this.style(color);
    this.ctx.fillRect(x, y, w, h);
  }

  fillCircle(cx: number, cy: number, r: number, color: RGB): void {
    this.style(color);
    this.ctx.beginPath();
    this.ctx.arc(cx, cy, r, 0, Math.PI * 2);
    this.ctx.fill();
  }
}
