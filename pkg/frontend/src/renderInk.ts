/**
 * Stroke rendering with uniform fit-to-viewport scaling.
 *
 * Ink coordinates have y pointing up; canvas y points down, so the
 * transform flips y. The drawing surface is abstracted to the handful of
 * path calls we use, which keeps the math testable without a DOM.
 */

export type Polyline = Array<[number, number]>;

export interface StrokeSurface {
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
}

export interface Viewport {
  width: number;
  height: number;
  padding?: number;
}

export interface InkTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

export class InkRenderError extends Error {}

function inkBounds(strokes: Polyline[]): [number, number, number, number] {
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  for (const stroke of strokes) {
    for (const [x, y] of stroke) {
      if (!Number.isFinite(x) || !Number.isFinite(y)) {
        throw new InkRenderError(`non-finite coordinate (${x}, ${y})`);
      }
      minX = Math.min(minX, x);
      maxX = Math.max(maxX, x);
      minY = Math.min(minY, y);
      maxY = Math.max(maxY, y);
    }
  }
  if (!Number.isFinite(minX)) {
    throw new InkRenderError("ink has no points");
  }
  return [minX, minY, maxX, maxY];
}

/**
 * Aspect-preserving transform that centers the ink's bounding box in the
 * viewport. Degenerate extents (single point, flat line) fall back to a
 * unit scale on the degenerate axis.
 */
export function fitTransform(strokes: Polyline[], viewport: Viewport): InkTransform {
  const pad = viewport.padding ?? 8;
  const [minX, minY, maxX, maxY] = inkBounds(strokes);
  const spanX = maxX - minX;
  const spanY = maxY - minY;
  const availW = Math.max(viewport.width - 2 * pad, 1);
  const availH = Math.max(viewport.height - 2 * pad, 1);
  const sx = spanX > 0 ? availW / spanX : Infinity;
  const sy = spanY > 0 ? availH / spanY : Infinity;
  let scale = Math.min(sx, sy);
  if (!Number.isFinite(scale)) {
    scale = 1; // single point
  }
  const cx = (minX + maxX) / 2;
  const cy = (minY + maxY) / 2;
  return {
    scale,
    offsetX: viewport.width / 2 - cx * scale,
    offsetY: viewport.height / 2 + cy * scale, // y flipped
  };
}

export function applyTransform(t: InkTransform, x: number, y: number): [number, number] {
  return [t.offsetX + t.scale * x, t.offsetY - t.scale * y];
}

/**
 * Draw every stroke as one path. Single-point strokes get a dot-sized
 * segment so they stay visible.
 */
export function renderInk(
  surface: StrokeSurface,
  strokes: Polyline[],
  viewport: Viewport,
): InkTransform {
  if (!Array.isArray(strokes) || strokes.length === 0 || strokes.some((s) => s.length === 0)) {
    throw new InkRenderError("empty ink payload");
  }
  const t = fitTransform(strokes, viewport);
  for (const stroke of strokes) {
    surface.beginPath();
    const [x0, y0] = applyTransform(t, stroke[0][0], stroke[0][1]);
    surface.moveTo(x0, y0);
    if (stroke.length === 1) {
      surface.lineTo(x0 + 0.5, y0);
    } else {
      for (let i = 1; i < stroke.length; i++) {
        const [x, y] = applyTransform(t, stroke[i][0], stroke[i][1]);
        surface.lineTo(x, y);
      }
    }
    surface.stroke();
  }
  return t;
}
