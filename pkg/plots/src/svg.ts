/** Minimal DOM-free SVG assembly: element strings, scales, axis frames. */

export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((x: number) => r0 + ((x - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function fmt(x: number): string {
  return Number.isInteger(x) ? String(x) : x.toPrecision(6).replace(/\.?0+($|e)/, "$1");
}

export class SvgDoc {
  readonly width: number;
  readonly height: number;
  private readonly parts: string[] = [];

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
  }

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  path(d: string, attrs: Record<string, string | number>): void {
    this.add(`<path d="${d}"${attrString(attrs)}/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, attrs: Record<string, string | number>): void {
    this.add(`<line x1="${r2(x1)}" y1="${r2(y1)}" x2="${r2(x2)}" y2="${r2(y2)}"${attrString(attrs)}/>`);
  }

  circle(cx: number, cy: number, radius: number, attrs: Record<string, string | number>): void {
    this.add(`<circle cx="${r2(cx)}" cy="${r2(cy)}" r="${radius}"${attrString(attrs)}/>`);
  }

  polygon(points: [number, number][], attrs: Record<string, string | number>): void {
    const pts = points.map(([x, y]) => `${r2(x)},${r2(y)}`).join(" ");
    this.add(`<polygon points="${pts}"${attrString(attrs)}/>`);
  }

  text(x: number, y: number, content: string, attrs: Record<string, string | number> = {}): void {
    this.add(`<text x="${r2(x)}" y="${r2(y)}"${attrString(attrs)}>${escapeXml(content)}</text>`);
  }

  toString(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" `
        + `viewBox="0 0 ${this.width} ${this.height}" font-family="sans-serif" font-size="11">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

function r2(x: number): string {
  return (Math.round(x * 100) / 100).toString();
}

function attrString(attrs: Record<string, string | number>): string {
  return Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${v}"`)
    .join("");
}

export interface Frame {
  x: Scale;
  y: Scale;
  plotLeft: number;
  plotRight: number;
  plotTop: number;
  plotBottom: number;
}

/** Draw the plot frame with min/max tick labels and axis names. */
export function drawFrame(
  svg: SvgDoc,
  xDomain: [number, number],
  yDomain: [number, number],
  title: string,
  xlabel: string,
  ylabel: string,
): Frame {
  const margin = { left: 58, right: 16, top: 34, bottom: 42 };
  const plotLeft = margin.left;
  const plotRight = svg.width - margin.right;
  const plotTop = margin.top;
  const plotBottom = svg.height - margin.bottom;
  const x = linearScale(xDomain, [plotLeft, plotRight]);
  // SVG y grows downward
  const y = linearScale(yDomain, [plotBottom, plotTop]);
  svg.add(
    `<rect x="${plotLeft}" y="${plotTop}" width="${plotRight - plotLeft}" `
      + `height="${plotBottom - plotTop}" fill="none" stroke="black"/>`,
  );
  svg.text(plotLeft, plotTop - 14, title, { "font-size": 12 });
  svg.text((plotLeft + plotRight) / 2, svg.height - 10, xlabel, { "text-anchor": "middle" });
  svg.text(14, (plotTop + plotBottom) / 2, ylabel, {
    "text-anchor": "middle",
    transform: `rotate(-90 14 ${(plotTop + plotBottom) / 2})`,
  });
  svg.text(plotLeft, plotBottom + 16, fmt(xDomain[0]), { "text-anchor": "start" });
  svg.text(plotRight, plotBottom + 16, fmt(xDomain[1]), { "text-anchor": "end" });
  svg.text(plotLeft - 4, plotBottom, fmt(yDomain[0]), { "text-anchor": "end" });
  svg.text(plotLeft - 4, plotTop + 10, fmt(yDomain[1]), { "text-anchor": "end" });
  return { x, y, plotLeft, plotRight, plotTop, plotBottom };
}
