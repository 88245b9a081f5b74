/**
 * Level-curve (contour) figure of a grid survey over the complex plane.
 *
 * Contour polygons come from d3-contour's marching squares over the value
 * matrix; thresholds are log-spaced because the level-curve function spans
 * orders of magnitude around a root. Curves darken toward lower levels so
 * the root region reads as the darkest nest, and the grid minimum itself
 * is marked explicitly.
 */

import { contours } from "d3-contour";

import { GridData, metaTitle } from "./csv.js";
import { SvgDoc, drawFrame, linearScale } from "./svg.js";

export interface MinimumCell {
  ix: number;
  iy: number;
  re: number;
  im: number;
  value: number;
}

/** Grid cell holding the smallest value (the candidate root location). */
export function minimumCell(grid: GridData): MinimumCell {
  let best: MinimumCell | null = null;
  for (let iy = 0; iy < grid.imAxis.length; iy += 1) {
    for (let ix = 0; ix < grid.reAxis.length; ix += 1) {
      const value = grid.values[iy][ix];
      if (best === null || value < best.value) {
        best = { ix, iy, re: grid.reAxis[ix], im: grid.imAxis[iy], value };
      }
    }
  }
  return best!;
}

export function logThresholds(grid: GridData, count = 12): number[] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const row of grid.values) {
    for (const v of row) {
      if (v > 0 && v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!Number.isFinite(lo) || hi <= lo) {
    return [hi || 1];
  }
  lo = Math.max(lo, hi * 1e-9);
  const out: number[] = [];
  for (let i = 0; i < count; i += 1) {
    out.push(Math.exp(Math.log(lo) + ((i + 0.5) / count) * (Math.log(hi) - Math.log(lo))));
  }
  return out;
}

export function renderContour(
  grid: GridData,
  opts: { title?: string; xlabel?: string; ylabel?: string } = {},
): string {
  const nx = grid.reAxis.length;
  const ny = grid.imAxis.length;
  const svg = new SvgDoc(640, 480);
  const frame = drawFrame(
    svg,
    [grid.reAxis[0], grid.reAxis[nx - 1]],
    [grid.imAxis[0], grid.imAxis[ny - 1]],
    opts.title ?? metaTitle(grid.meta),
    opts.xlabel ?? "Re eta",
    opts.ylabel ?? "Im eta",
  );
  // Contour coordinates live in grid-index space [0, nx] x [0, ny].
  const gx = linearScale([0, nx - 1], [frame.x(grid.reAxis[0]), frame.x(grid.reAxis[nx - 1])]);
  const gy = linearScale([0, ny - 1], [frame.y(grid.imAxis[0]), frame.y(grid.imAxis[ny - 1])]);
  const thresholds = logThresholds(grid);
  const generator = contours().size([nx, ny]).thresholds(thresholds).smooth(true);
  const levels = generator(grid.values.flat());
  levels.forEach((level, idx) => {
    // darkest for the lowest level
    const shade = Math.round(20 + (idx / Math.max(levels.length - 1, 1)) * 200);
    const color = `rgb(${shade},${shade},${shade})`;
    const pieces: string[] = [];
    for (const polygon of level.coordinates) {
      for (const ring of polygon) {
        const d = ring
          .map(([i, j], n) => `${n === 0 ? "M" : "L"}${gx(i - 0.5).toFixed(2)},${gy(j - 0.5).toFixed(2)}`)
          .join("");
        pieces.push(`${d}Z`);
      }
    }
    if (pieces.length > 0) {
      svg.path(pieces.join(""), {
        fill: "none",
        stroke: color,
        "stroke-width": 1,
        class: "level",
        "data-level": level.value.toExponential(3),
      });
    }
  });
  const minimum = minimumCell(grid);
  svg.circle(frame.x(minimum.re), frame.y(minimum.im), 4, {
    fill: "crimson",
    stroke: "black",
    class: "minimum",
  });
  svg.text(frame.x(minimum.re) + 7, frame.y(minimum.im) - 6,
           `min ${minimum.value.toExponential(2)}`, { "font-size": 10 });
  return svg.toString();
}
