#!/usr/bin/env node
/**
 * plotkit <scatter|histogram|convergence> --in results.csv --out figure.svg
 *         [--include A,B] [--exclude C] [--bin-width N] [--max-iteration N]
 *         [--width N] [--height N]
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { SchemaError } from "./csv.js";
import { FigureKind, renderFigure } from "./figures.js";

const KINDS: FigureKind[] = ["scatter", "histogram", "convergence"];

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string" },
        out: { type: "string" },
        include: { type: "string" },
        exclude: { type: "string" },
        "bin-width": { type: "string" },
        "max-iteration": { type: "string" },
        width: { type: "string" },
        height: { type: "string" },
      },
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  const [kind] = parsed.positionals;
  if (!kind || !KINDS.includes(kind as FigureKind)) {
    console.error(`error: first argument must be one of ${KINDS.join(", ")}`);
    return 2;
  }
  const { in: input, out } = parsed.values;
  if (!input || !out) {
    console.error("error: --in and --out are required");
    return 2;
  }
  const splitList = (value?: string) =>
    value === undefined
      ? undefined
      : value
          .split(",")
          .map((s) => s.trim())
          .filter((s) => s.length > 0);
  const parseNum = (value: string | undefined, flag: string): number | undefined => {
    if (value === undefined) return undefined;
    const num = Number(value);
    if (!Number.isFinite(num) || num <= 0) {
      throw new SchemaError(`${flag} must be a positive number, got '${value}'`);
    }
    return num;
  };

  try {
    const svg = renderFigure({
      kind: kind as FigureKind,
      csvText: readFileSync(input, "utf8"),
      source: input,
      include: splitList(parsed.values.include),
      exclude: splitList(parsed.values.exclude),
      binWidth: parseNum(parsed.values["bin-width"], "--bin-width"),
      maxIteration: parseNum(parsed.values["max-iteration"], "--max-iteration"),
      width: parseNum(parsed.values.width, "--width"),
      height: parseNum(parsed.values.height, "--height"),
    });
    writeFileSync(out, svg);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    console.error(`failure: ${(err as Error).message}`);
    return 3;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
