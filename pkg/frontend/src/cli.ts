#!/usr/bin/env node
/**
 * Command line for rendering figures from exported CSV directories.
 *
 *   plotkit render --figure fig_biomass_vs_mu --in runs/biomass --out biomass.svg
 *
 * Exit codes mirror the solver CLI: 2 for usage errors, 3 for malformed
 * input data (missing columns), 4 for filesystem failures.
 */

import { writeFileSync, mkdirSync } from "fs";
import { dirname } from "path";
import { MissingColumn, IoError } from "./csv.js";
import { buildFigure, UnknownFigure, FIGURES } from "./figures.js";
import { renderFigure } from "./svg.js";

const USAGE = `usage: plotkit render --figure NAME --in DIR --out PATH

figures: ${Object.keys(FIGURES).join(", ")}`;

interface RenderArgs {
  figure: string;
  inDir: string;
  outPath: string;
}

function parseArgs(argv: string[]): RenderArgs {
  if (argv[0] !== "render") {
    throw new UsageError(argv.length ? `unknown command '${argv[0]}'` : "no command given");
  }
  const opts: Record<string, string> = {};
  for (let i = 1; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (!flag.startsWith("--")) throw new UsageError(`unexpected argument '${flag}'`);
    if (value === undefined) throw new UsageError(`flag '${flag}' needs a value`);
    opts[flag.slice(2)] = value;
  }
  for (const required of ["figure", "in", "out"]) {
    if (!(required in opts)) throw new UsageError(`missing --${required}`);
  }
  return { figure: opts["figure"], inDir: opts["in"], outPath: opts["out"] };
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  let args: RenderArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    console.error(USAGE);
    return 2;
  }
  try {
    const figure = buildFigure(args.figure, args.inDir);
    const svg = renderFigure(figure);
    try {
      mkdirSync(dirname(args.outPath), { recursive: true });
      writeFileSync(args.outPath, svg, "utf8");
    } catch (err) {
      throw new IoError(args.outPath, err);
    }
    console.log(`wrote ${args.outPath}`);
    return 0;
  } catch (err) {
    if (err instanceof UnknownFigure) {
      console.error(err.message);
      return 2;
    }
    if (err instanceof MissingColumn) {
      console.error(`bad input data: ${err.message}`);
      return 3;
    }
    if (err instanceof IoError) {
      console.error(`i/o error: ${err.message}`);
      return 4;
    }
    throw err;
  }
}

const entry = process.argv[1];
if (entry && (entry.endsWith("cli.js") || entry.endsWith("plotkit"))) {
  process.exit(main(process.argv.slice(2)));
}
