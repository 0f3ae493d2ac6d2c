#!/usr/bin/env node
/** figures: render rtneq outputs as deterministic SVG files.
 *
 *   figures timeseries --series series.csv --summary summary.json --out fig1b.svg
 *   figures hierarchy  --csv hierarchy.csv --out fig3f.svg
 */

import { readFileSync, writeFileSync } from "fs";
import { renderHierarchy } from "./hierarchy.js";
import { renderTimeseries } from "./timeseries.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`malformed flag pair near ${key}`);
    }
    flags.set(key.slice(2), value);
  }
  return flags;
}

function need(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) {
    throw new Error(`missing required flag --${name}`);
  }
  return value;
}

export function run(argv: string[]): number {
  try {
    const [command, ...rest] = argv;
    if (command === "timeseries") {
      const flags = parseFlags(rest);
      const svg = renderTimeseries(
        readFileSync(need(flags, "series"), "utf8"),
        readFileSync(need(flags, "summary"), "utf8"),
      );
      writeFileSync(need(flags, "out"), svg);
      return 0;
    }
    if (command === "hierarchy") {
      const flags = parseFlags(rest);
      const svg = renderHierarchy(readFileSync(need(flags, "csv"), "utf8"));
      writeFileSync(need(flags, "out"), svg);
      return 0;
    }
    throw new Error(`unknown subcommand ${command ?? "(none)"}; use timeseries or hierarchy`);
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
}

const isDirectRun = process.argv[1]?.endsWith("cli.js");
if (isDirectRun) {
  process.exit(run(process.argv.slice(2)));
}
