#!/usr/bin/env node
/**
 * q4nl-plots: figures from simulator CSV output.
 *
 * Usage:
 *   q4nl-plots plot-conservation <series.csv> --out fig.svg [--format svg|json]
 *   q4nl-plots plot-decay <series.csv> --q 4 --out fig.svg [--format svg|json]
 *   q4nl-plots plot-scattering <scatter_report.csv> --out fig.svg [--format svg|json]
 *
 * A config.yaml sidecar next to the series CSV is picked up automatically
 * for the figure subtitle. --format json writes the embedded data arrays
 * instead of the SVG.
 */

import { existsSync, readFileSync, writeFileSync } from "fs";
import { dirname, join } from "path";

import { plotConservation, plotDecay, plotScattering, Figure } from "./plots.js";
import { parseScatterCsv, parseSeriesCsv, parseSidecarConfig, SchemaError } from "./schema.js";
import { embeddedData } from "./svg.js";

interface Args {
  command: string;
  input: string;
  out: string;
  format: "svg" | "json";
  q: string;
}

function parseArgs(argv: string[]): Args {
  const [command, ...rest] = argv;
  const args: Args = { command: command ?? "", input: "", out: "", format: "svg", q: "4" };
  for (let i = 0; i < rest.length; i += 1) {
    const a = rest[i];
    if (a === "--out") args.out = rest[++i] ?? "";
    else if (a === "--format") args.format = (rest[++i] ?? "svg") as Args["format"];
    else if (a === "--q") args.q = rest[++i] ?? "4";
    else if (!a.startsWith("--") && !args.input) args.input = a;
    else throw new SchemaError(`unknown argument '${a}'`);
  }
  return args;
}

function loadBundle(path: string) {
  const text = readFileSync(path, "utf-8");
  const sidecar = join(dirname(path), "config.yaml");
  const metadata = existsSync(sidecar)
    ? parseSidecarConfig(readFileSync(sidecar, "utf-8"))
    : {};
  return parseSeriesCsv(text, metadata);
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err));
    return 1;
  }
  if (!args.command || !args.input || !args.out) {
    console.error(
      "usage: q4nl-plots <plot-conservation|plot-decay|plot-scattering> " +
        "<input.csv> --out <figure> [--format svg|json] [--q <q>]",
    );
    return 1;
  }
  if (args.format !== "svg" && args.format !== "json") {
    console.error(`unknown format '${args.format}' (svg or json)`);
    return 1;
  }
  let figure: Figure;
  try {
    if (args.command === "plot-conservation") {
      figure = plotConservation(loadBundle(args.input));
    } else if (args.command === "plot-decay") {
      figure = plotDecay(loadBundle(args.input), args.q);
    } else if (args.command === "plot-scattering") {
      figure = plotScattering(parseScatterCsv(readFileSync(args.input, "utf-8")));
    } else {
      console.error(`unknown command '${args.command}'`);
      return 1;
    }
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && "code" in err) {
      console.error(String(err));
      return 1;
    }
    throw err;
  }
  const payload = args.format === "svg" ? figure.svg : embeddedData(figure.svg);
  writeFileSync(args.out, payload, "utf-8");
  const stats = Object.entries(figure.stats)
    .map(([k, v]) => `${k}=${v.toExponential(3)}`)
    .join(" ");
  console.log(`wrote ${args.out} (${stats})`);
  return 0;
}

const isMain = process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
