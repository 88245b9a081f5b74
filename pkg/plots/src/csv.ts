/**
 * Parsers for the crackwave CLI CSV formats.
 *
 * Files start with `#`-prefixed metadata lines (`# key=value`, including a
 * `columns=` line naming the data columns), followed by comma-separated
 * data rows. Every parse failure carries the 1-based line number.
 */

import { readFileSync } from "node:fs";

export class CsvFormatError extends Error {
  readonly line: number;

  constructor(line: number, message: string) {
    super(`line ${line}: ${message}`);
    this.name = "CsvFormatError";
    this.line = line;
  }
}

export interface ParsedCsv {
  meta: Record<string, string>;
  columns: string[];
  rows: { line: number; fields: string[] }[];
}

export interface GridData {
  meta: Record<string, string>;
  reAxis: number[];
  imAxis: number[];
  /** values[iy][ix], rows along the imaginary axis (ascending). */
  values: number[][];
}

export interface SweepPoint {
  vOverB: number;
  reEta: number | null;
  imEta: number | null;
  found: boolean;
}

export interface SweepData {
  meta: Record<string, string>;
  points: SweepPoint[];
}

const FLOAT_RE = /^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$/;

function parseNumber(text: string, line: number, what: string): number {
  if (!FLOAT_RE.test(text)) {
    throw new CsvFormatError(line, `cannot parse ${what} from ${JSON.stringify(text)}`);
  }
  return Number(text);
}

export function parseCsv(text: string): ParsedCsv {
  const meta: Record<string, string> = {};
  let columns: string[] | null = null;
  const rows: { line: number; fields: string[] }[] = [];
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i += 1) {
    const raw = lines[i];
    const lineNo = i + 1;
    if (raw.trim() === "") continue;
    if (raw.startsWith("#")) {
      const body = raw.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq < 0) {
        throw new CsvFormatError(lineNo, `metadata line without '=': ${JSON.stringify(raw)}`);
      }
      const key = body.slice(0, eq);
      const value = body.slice(eq + 1);
      if (key === "columns") {
        columns = value.split(",");
      } else {
        meta[key] = value;
      }
      continue;
    }
    if (columns === null) {
      throw new CsvFormatError(lineNo, "data row before a '# columns=' line");
    }
    const fields = raw.split(",");
    if (fields.length !== columns.length) {
      throw new CsvFormatError(
        lineNo,
        `expected ${columns.length} fields (${columns.join(",")}), got ${fields.length}`,
      );
    }
    rows.push({ line: lineNo, fields });
  }
  if (columns === null) {
    throw new CsvFormatError(lines.length || 1, "missing '# columns=' metadata line");
  }
  return { meta, columns, rows };
}

/** Parse a level-curve grid file (columns re,im,value) into axes + matrix. */
export function parseGridCsv(text: string): GridData {
  const parsed = parseCsv(text);
  const expected = ["re", "im", "value"];
  if (parsed.columns.join(",") !== expected.join(",")) {
    throw new CsvFormatError(1, `grid file must have columns ${expected.join(",")}, got ${parsed.columns.join(",")}`);
  }
  if (parsed.rows.length === 0) {
    throw new CsvFormatError(1, "grid file has no data rows");
  }
  const reSet = new Map<number, number>();
  const imSet = new Map<number, number>();
  const triples: { re: number; im: number; value: number; line: number }[] = [];
  for (const row of parsed.rows) {
    const re = parseNumber(row.fields[0], row.line, "re");
    const im = parseNumber(row.fields[1], row.line, "im");
    const value = parseNumber(row.fields[2], row.line, "value");
    triples.push({ re, im, value, line: row.line });
    reSet.set(re, 0);
    imSet.set(im, 0);
  }
  const reAxis = [...reSet.keys()].sort((a, b) => a - b);
  const imAxis = [...imSet.keys()].sort((a, b) => a - b);
  reAxis.forEach((v, i) => reSet.set(v, i));
  imAxis.forEach((v, i) => imSet.set(v, i));
  if (reAxis.length * imAxis.length !== triples.length) {
    throw new CsvFormatError(
      triples[triples.length - 1].line,
      `expected a full ${reAxis.length}x${imAxis.length} grid, got ${triples.length} rows`,
    );
  }
  const values: number[][] = imAxis.map(() => new Array<number>(reAxis.length).fill(NaN));
  for (const t of triples) {
    const ix = reSet.get(t.re)!;
    const iy = imSet.get(t.im)!;
    if (!Number.isNaN(values[iy][ix])) {
      throw new CsvFormatError(t.line, `duplicate grid point (${t.re}, ${t.im})`);
    }
    values[iy][ix] = t.value;
  }
  return { meta: parsed.meta, reAxis, imAxis, values };
}

/** Parse a root-track sweep file (columns V_over_b,re_eta,im_eta,found). */
export function parseSweepCsv(text: string): SweepData {
  const parsed = parseCsv(text);
  const expected = ["V_over_b", "re_eta", "im_eta", "found"];
  if (parsed.columns.join(",") !== expected.join(",")) {
    throw new CsvFormatError(1, `sweep file must have columns ${expected.join(",")}, got ${parsed.columns.join(",")}`);
  }
  const points: SweepPoint[] = [];
  for (const row of parsed.rows) {
    const vOverB = parseNumber(row.fields[0], row.line, "V_over_b");
    const foundText = row.fields[3];
    if (foundText !== "0" && foundText !== "1") {
      throw new CsvFormatError(row.line, `found flag must be 0 or 1, got ${JSON.stringify(foundText)}`);
    }
    const found = foundText === "1";
    let reEta: number | null = null;
    let imEta: number | null = null;
    if (found) {
      reEta = parseNumber(row.fields[1], row.line, "re_eta");
      imEta = parseNumber(row.fields[2], row.line, "im_eta");
    } else if (row.fields[1] !== "nan" || row.fields[2] !== "nan") {
      throw new CsvFormatError(row.line, "absent roots must carry nan,nan placeholders");
    }
    points.push({ vOverB, reEta, imEta, found });
  }
  return { meta: parsed.meta, points };
}

export function readGridFile(path: string): GridData {
  return parseGridCsv(readFileSync(path, "utf-8"));
}

export function readSweepFile(path: string): SweepData {
  return parseSweepCsv(readFileSync(path, "utf-8"));
}

/** Short human-readable run descriptor from the metadata echo. */
export function metaTitle(meta: Record<string, string>): string {
  const parts: string[] = [];
  if (meta.relation) parts.push(meta.relation);
  if (meta.V_over_b) parts.push(`V/b=${meta.V_over_b}`);
  if (meta.nu) parts.push(`nu=${meta.nu}`);
  if (meta.provider) parts.push(`kernel=${meta.provider}`);
  return parts.join("  ");
}
