/** Figure dispatch: input CSV + kind + output image path. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { renderContour } from "./contour.js";
import { renderCurve } from "./curve.js";
import { readGridFile, readSweepFile } from "./csv.js";
import { renderSurface } from "./surface.js";

export type FigureKind = "contour" | "surface" | "curve";

export const FIGURE_KINDS: FigureKind[] = ["contour", "surface", "curve"];

export interface FigureSpec {
  input: string;
  kind: FigureKind;
  output: string;
  title?: string;
  xlabel?: string;
  ylabel?: string;
}

/** Render the figure and write the SVG; returns the SVG text. */
export function render(spec: FigureSpec): string {
  let svg: string;
  if (spec.kind === "contour") {
    svg = renderContour(readGridFile(spec.input), spec);
  } else if (spec.kind === "surface") {
    svg = renderSurface(readGridFile(spec.input), spec);
  } else if (spec.kind === "curve") {
    svg = renderCurve(readSweepFile(spec.input), spec);
  } else {
    throw new Error(`unknown figure kind ${JSON.stringify(spec.kind)}; expected ${FIGURE_KINDS.join("|")}`);
  }
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, svg, "utf-8");
  return svg;
}
