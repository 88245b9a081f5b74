/**
 * Isometric surface figure of a grid survey: the level-curve function as a
 * height field, painter-sorted quads shaded by height. The surface dips to
 * the plane wherever the underlying relation has a root.
 */

import { GridData, metaTitle } from "./csv.js";
import { SvgDoc, escapeXml } from "./svg.js";

const MAX_SIDE = 61;

function downsample(grid: GridData): { values: number[][]; nx: number; ny: number } {
  const ny0 = grid.imAxis.length;
  const nx0 = grid.reAxis.length;
  const sy = Math.max(1, Math.ceil(ny0 / MAX_SIDE));
  const sx = Math.max(1, Math.ceil(nx0 / MAX_SIDE));
  const values: number[][] = [];
  for (let iy = 0; iy < ny0; iy += sy) {
    const row: number[] = [];
    for (let ix = 0; ix < nx0; ix += sx) {
      row.push(grid.values[iy][ix]);
    }
    values.push(row);
  }
  return { values, nx: values[0].length, ny: values.length };
}

export function renderSurface(
  grid: GridData,
  opts: { title?: string } = {},
): string {
  const { values, nx, ny } = downsample(grid);
  let vmax = -Infinity;
  let vmin = Infinity;
  for (const row of values) {
    for (const v of row) {
      if (v > vmax) vmax = v;
      if (v < vmin) vmin = v;
    }
  }
  const span = vmax - vmin || 1;

  const width = 640;
  const height = 480;
  const svg = new SvgDoc(width, height);
  svg.text(16, 20, opts.title ?? metaTitle(grid.meta), { "font-size": 12 });

  // Isometric projection: u spreads the two grid axes apart, v adds depth
  // and subtracts height.
  const zScale = 150;
  const project = (ix: number, iy: number, z: number): [number, number] => {
    const a = ix / (nx - 1);
    const b = iy / (ny - 1);
    const u = (a - b) * 0.5 + 0.5;
    const v = (a + b) * 0.5;
    const zn = (z - vmin) / span;
    return [40 + u * (width - 80), 120 + v * (height - 200) - zn * zScale + zScale * 0.35];
  };

  // Painter order: back rows (small ix+iy) first.
  const order: [number, number][] = [];
  for (let iy = 0; iy < ny - 1; iy += 1) {
    for (let ix = 0; ix < nx - 1; ix += 1) {
      order.push([ix, iy]);
    }
  }
  order.sort((p, q) => p[0] + p[1] - (q[0] + q[1]));
  for (const [ix, iy] of order) {
    const corners: [number, number][] = [
      project(ix, iy, values[iy][ix]),
      project(ix + 1, iy, values[iy][ix + 1]),
      project(ix + 1, iy + 1, values[iy + 1][ix + 1]),
      project(ix, iy + 1, values[iy + 1][ix]),
    ];
    const mean =
      (values[iy][ix] + values[iy][ix + 1] + values[iy + 1][ix + 1] + values[iy + 1][ix]) / 4;
    const shade = Math.round(40 + ((mean - vmin) / span) * 200);
    svg.polygon(corners, {
      fill: `rgb(${shade},${shade},${Math.min(shade + 25, 255)})`,
      stroke: "rgb(30,30,30)",
      "stroke-width": 0.3,
      class: "quad",
    });
  }
  svg.add(`<desc>${escapeXml(`surface of ${nx}x${ny} downsampled grid`)}</desc>`);
  return svg.toString();
}
