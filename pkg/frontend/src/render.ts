import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { column, CsvError, readSeriesFile } from "./csv.js";
import { FigureError, FigureJob, validateJob } from "./figure.js";
import {
  Curve,
  defaultPeakSearch,
  normalizeFirstPeak,
  PeakSearch,
} from "./normalize.js";
import { PlotSeries, renderPlot } from "./svg.js";

/** Spectra axes always span at least this frequency range, in THz. */
export const SPECTRUM_AXIS_MAX_THZ = 6;

function loadCurves(
  job: FigureJob,
  xColumn: string,
  yColumn: (columns: string[]) => string,
): Curve[] {
  const curves: Curve[] = [];
  const failures: string[] = [];
  for (const input of job.inputs) {
    try {
      const file = readSeriesFile(input.path);
      const yName = yColumn(file.columns);
      curves.push({
        role: input.role,
        path: input.path,
        freqs: column(file, xColumn),
        amps: column(file, yName),
      });
    } catch (err) {
      if (err instanceof CsvError) failures.push(err.message);
      else if (err instanceof Error) failures.push(`${input.path}: ${err.message}`);
      else failures.push(`${input.path}: ${String(err)}`);
    }
  }
  if (failures.length > 0) {
    throw new FigureError(
      `unusable input${failures.length > 1 ? "s" : ""}:\n${failures.join("\n")}`,
    );
  }
  return curves;
}

function clip(curve: Curve, xMax: number): Curve {
  const freqs: number[] = [];
  const amps: number[] = [];
  for (let i = 0; i < curve.freqs.length; i++) {
    if (curve.freqs[i] >= 0 && curve.freqs[i] <= xMax) {
      freqs.push(curve.freqs[i]);
      amps.push(curve.amps[i]);
    }
  }
  return { ...curve, freqs, amps };
}

function spectraFigure(job: FigureJob, search: PeakSearch): string {
  let curves = loadCurves(
    job,
    "freq_thz",
    () => "amplitude",
  );
  const rootAttrs: Record<string, string> = { "data-style": job.style };
  const seriesAttrs = new Map<string, Record<string, string>>();
  if (job.normalization === "first-peak") {
    const normalized = normalizeFirstPeak(curves, search);
    curves = normalized.curves;
    rootAttrs["data-designated-peak-thz"] = String(normalized.freqThz);
    rootAttrs["data-normalization"] = "first-peak";
    for (const c of curves) {
      seriesAttrs.set(c.role, {
        "data-peak-amplitude": String(c.amps[normalized.bin]),
      });
    }
  }
  const clipped = curves.map((c) => clip(c, SPECTRUM_AXIS_MAX_THZ));
  let yMax = 0;
  for (const c of clipped) {
    for (const a of c.amps) yMax = Math.max(yMax, a);
  }
  if (yMax <= 0) yMax = 1;
  const series: PlotSeries[] = clipped.map((c) => ({
    label: c.role,
    xs: c.freqs,
    ys: c.amps,
    attrs: seriesAttrs.get(c.role),
  }));
  return renderPlot({
    xDomain: [0, SPECTRUM_AXIS_MAX_THZ],
    yDomain: [0, 1.05 * yMax],
    xLabel: "frequency (THz)",
    yLabel: "amplitude (arb. units)",
    series,
    legendTitle: job.style === "panel" ? "temperature" : undefined,
    rootAttrs,
  });
}

function kernelFigure(job: FigureJob): string {
  const curves = loadCurves(job, "time_ps", (columns) => {
    if (columns.length !== 2) {
      throw new Error(
        `kernel style needs a two-column time series, got columns: ${columns.join(", ")}`,
      );
    }
    return columns[1];
  });
  const c = curves[0];
  if (c.freqs.length < 2) {
    throw new FigureError(`${c.path}: kernel trace needs at least two samples`);
  }
  const t0 = c.freqs[0];
  const t1 = c.freqs[c.freqs.length - 1];
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const v of c.amps) {
    yMin = Math.min(yMin, v);
    yMax = Math.max(yMax, v);
  }
  const pad = yMax > yMin ? 0.05 * (yMax - yMin) : 1;
  return renderPlot({
    xDomain: [t0, t1],
    yDomain: [yMin - pad, yMax + pad],
    xLabel: "time (ps)",
    yLabel: "kernel amplitude",
    series: [{ label: c.role, xs: c.freqs, ys: c.amps }],
    zeroLine: true,
    rootAttrs: { "data-style": "kernel" },
  });
}

/** Build the SVG text for a validated job without touching the filesystem output. */
export function buildFigure(
  job: FigureJob,
  search: PeakSearch = defaultPeakSearch,
): string {
  if (job.style === "kernel") return kernelFigure(job);
  return spectraFigure(job, search);
}

/** Validate a job description, render it, and write the SVG. Returns the output path. */
export function render(
  raw: unknown,
  search: PeakSearch = defaultPeakSearch,
): string {
  const job = validateJob(raw);
  const svg = buildFigure(job, search);
  const dir = dirname(job.output);
  if (dir !== "") mkdirSync(dir, { recursive: true });
  writeFileSync(job.output, svg, "utf8");
  return job.output;
}
