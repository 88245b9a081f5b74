#!/usr/bin/env node
/**
 * Render a crackwave survey CSV as an SVG figure.
 *
 * Usage: node dist/cli.js <input.csv> <contour|surface|curve> <output.svg>
 *        [--title T] [--xlabel X] [--ylabel Y]
 *
 * Exits 2 on bad arguments, 1 on malformed input (message carries the
 * offending line number), 0 on success.
 */

import { CsvFormatError } from "./csv.js";
import { FIGURE_KINDS, FigureKind, render } from "./render.js";

export function run(argv: string[]): number {
  const positional: string[] = [];
  const options: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 1) {
    const arg = argv[i];
    if (arg === "--title" || arg === "--xlabel" || arg === "--ylabel") {
      const value = argv[i + 1];
      if (value === undefined) {
        process.stderr.write(`missing value for ${arg}\n`);
        return 2;
      }
      options[arg.slice(2)] = value;
      i += 1;
    } else if (arg.startsWith("--")) {
      process.stderr.write(`unknown option ${arg}\n`);
      return 2;
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 3) {
    process.stderr.write(
      `usage: cli.js <input.csv> <${FIGURE_KINDS.join("|")}> <output.svg> `
        + `[--title T] [--xlabel X] [--ylabel Y]\n`,
    );
    return 2;
  }
  const [input, kind, output] = positional;
  if (!FIGURE_KINDS.includes(kind as FigureKind)) {
    process.stderr.write(`unknown figure kind ${kind}; expected ${FIGURE_KINDS.join("|")}\n`);
    return 2;
  }
  try {
    render({ input, kind: kind as FigureKind, output, ...options });
  } catch (err) {
    if (err instanceof CsvFormatError) {
      process.stderr.write(`${input}:${err.line}: ${err.message}\n`);
      return 1;
    }
    if (err instanceof Error && "code" in err && (err as NodeJS.ErrnoException).code === "ENOENT") {
      process.stderr.write(`cannot read ${input}: no such file\n`);
      return 1;
    }
    throw err;
  }
  process.stdout.write(`${output}\n`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
