/**
 * Attenuation curve figure: Im(eta) of the tracked corrugation root against
 * the crack speed V/b. Found roots get one marker each; consecutive found
 * points are joined, and gaps where the track lost the root stay open.
 */

import { SweepData, metaTitle } from "./csv.js";
import { SvgDoc, drawFrame } from "./svg.js";

export function renderCurve(
  sweep: SweepData,
  opts: { title?: string; xlabel?: string; ylabel?: string } = {},
): string {
  const found = sweep.points.filter((p) => p.found);
  const svg = new SvgDoc(640, 480);
  const vs = sweep.points.map((p) => p.vOverB);
  const ys = found.map((p) => p.imEta as number);
  const xDomain: [number, number] =
    vs.length > 0 ? [Math.min(...vs), Math.max(...vs)] : [0, 1];
  let yLo = ys.length > 0 ? Math.min(...ys) : -1;
  let yHi = ys.length > 0 ? Math.max(...ys) : 0;
  if (yLo === yHi) {
    yLo -= 0.05;
    yHi += 0.05;
  }
  const frame = drawFrame(
    svg,
    xDomain,
    [yLo, yHi],
    opts.title ?? metaTitle(sweep.meta),
    opts.xlabel ?? "V/b",
    opts.ylabel ?? "Im eta",
  );
  if (yLo < 0 && yHi > 0) {
    svg.line(frame.plotLeft, frame.y(0), frame.plotRight, frame.y(0), {
      stroke: "rgb(180,180,180)",
      "stroke-dasharray": "4 3",
    });
  }
  let run: [number, number][] = [];
  const flushRun = () => {
    if (run.length > 1) {
      const d = run.map(([x, y], i) => `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`).join("");
      svg.path(d, { fill: "none", stroke: "steelblue", "stroke-width": 1.5, class: "track" });
    }
    run = [];
  };
  for (const p of sweep.points) {
    if (p.found) {
      run.push([frame.x(p.vOverB), frame.y(p.imEta as number)]);
    } else {
      flushRun();
    }
  }
  flushRun();
  for (const p of found) {
    svg.circle(frame.x(p.vOverB), frame.y(p.imEta as number), 3.5, {
      fill: "steelblue",
      stroke: "black",
      class: "marker",
    });
  }
  return svg.toString();
}
