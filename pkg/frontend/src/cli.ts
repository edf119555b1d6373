#!/usr/bin/env node
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import {
  FigureError,
  FigureJob,
  figureStyles,
  normalizations,
  validateJob,
} from "./figure.js";
import { render } from "./render.js";

const USAGE = `usage: spinmem-fig --input ROLE=PATH [--input ROLE=PATH ...] \\
                   --output PATH --style {overlay|panel|kernel} \\
                   [--normalization {first-peak|none}]

Renders an SVG figure from simulator CSV outputs. Each --input names one
curve: the role becomes its legend label. Default normalization is
first-peak for overlay and panel, none for kernel.`;

/** Turn raw argv (without the node/script prefix) into a validated job. */
export function jobFromArgv(argv: string[]): FigureJob {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string", multiple: true },
      output: { type: "string", short: "o" },
      style: { type: "string" },
      normalization: { type: "string" },
      help: { type: "boolean", short: "h" },
    },
    strict: true,
  });
  if (values.help) throw new FigureError(USAGE);
  if (!values.input || values.input.length === 0) {
    throw new FigureError("at least one --input ROLE=PATH is required");
  }
  if (!values.output) throw new FigureError("--output PATH is required");
  if (!values.style) {
    throw new FigureError(`--style must be one of: ${figureStyles.join(", ")}`);
  }
  const inputs = values.input.map((pair) => {
    const k = pair.indexOf("=");
    if (k <= 0 || k === pair.length - 1) {
      throw new FigureError(`--input expects ROLE=PATH, got "${pair}"`);
    }
    return { role: pair.slice(0, k), path: pair.slice(k + 1) };
  });
  const normalization =
    values.normalization ?? (values.style === "kernel" ? "none" : "first-peak");
  return validateJob({
    inputs,
    output: values.output,
    style: values.style,
    normalization,
  });
}

/** CLI body; returns the process exit code. */
export function main(argv: string[]): number {
  if (argv.includes("--help") || argv.includes("-h")) {
    console.log(USAGE);
    return 0;
  }
  let job: FigureJob;
  try {
    job = jobFromArgv(argv);
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    console.error(`valid styles: ${figureStyles.join(", ")}; normalizations: ${normalizations.join(", ")}`);
    return 2;
  }
  try {
    const out = render(job);
    console.log(`wrote ${out}`);
    return 0;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exitCode = main(process.argv.slice(2));
}
