import { spawnSync } from "node:child_process";
import {
  mkdtempSync,
  readFileSync,
  rmSync,
  writeFileSync,
} from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, describe, expect, it } from "vitest";
import { column, readSeriesFile } from "../src/csv.js";
import { FigureError, FigureJob } from "../src/figure.js";
import { normalizeFirstPeak } from "../src/normalize.js";
import { buildFigure, render } from "../src/render.js";

const fixture = (name: string) =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

const workDir = mkdtempSync(join(tmpdir(), "spinmem-figures-"));
afterAll(() => rmSync(workDir, { recursive: true, force: true }));

const overlayJob: FigureJob = {
  inputs: [
    { role: "nmllg", path: fixture("spectrum-nmllg.csv") },
    { role: "illg", path: fixture("spectrum-illg.csv") },
    { role: "llg", path: fixture("spectrum-llg.csv") },
  ],
  output: join(workDir, "overlay.svg"),
  style: "overlay",
  normalization: "first-peak",
};

const panelJob: FigureJob = {
  inputs: [
    { role: "20", path: fixture("spectrum_T20.csv") },
    { role: "220", path: fixture("spectrum_T220.csv") },
    { role: "300", path: fixture("spectrum_T300.csv") },
  ],
  output: join(workDir, "panel.svg"),
  style: "panel",
  normalization: "first-peak",
};

function xTickLabels(svg: string): string[] {
  return [...svg.matchAll(/class="x-tick"[^>]*>([^<]+)</g)].map((m) => m[1]);
}

function curvePaths(svg: string): Array<{ role: string; d: string }> {
  return [...svg.matchAll(/<path class="curve"[^>]*data-role="([^"]+)"[^>]*d="([^"]+)"/g)].map(
    (m) => ({ role: m[1], d: m[2] }),
  );
}

function pathPoints(d: string): Array<[number, number]> {
  return [...d.matchAll(/[ML]([-\d.]+),([-\d.]+)/g)].map((m) => [
    Number(m[1]),
    Number(m[2]),
  ]);
}

/**
 * Damped oscillation in the simulator's CSV dialect: decay time 1.59 ps,
 * period 0.24 ps, so a 1.2 ps trace holds five full periods.
 */
function writeOscillationCsv(path: string): void {
  const lines = [
    "# spinmem 0.1.0",
    "# config-hash 000000000000",
    "# nu0_thz = 4.2",
    "time_ps,kernel",
  ];
  for (let i = 0; i <= 600; i++) {
    const t = i * 0.002;
    const v = 950 * Math.exp(-0.6283 * t) * Math.sin(26.36 * t);
    lines.push(`${t},${v.toPrecision(17)}`);
  }
  writeFileSync(path, lines.join("\n") + "\n");
}

describe("overlay figure from simulator outputs", () => {
  it("renders three labeled curves", () => {
    const out = render(overlayJob);
    const svg = readFileSync(out, "utf8");
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(curvePaths(svg).map((c) => c.role)).toEqual([
      "nmllg",
      "illg",
      "llg",
    ]);
  });

  it("spans the frequency axis from 0 to 6 THz", () => {
    const svg = buildFigure(overlayJob);
    const labels = xTickLabels(svg);
    expect(labels).toContain("0");
    expect(labels).toContain("6");
    expect(svg).toContain("frequency (THz)");
  });

  it("equalizes the designated peak bin to machine precision", () => {
    const svg = buildFigure(overlayJob);
    const peakAmps = [...svg.matchAll(/data-peak-amplitude="([^"]+)"/g)].map(
      (m) => m[1],
    );
    expect(peakAmps).toEqual(["1", "1", "1"]);

    const curves = overlayJob.inputs.map((input) => {
      const file = readSeriesFile(input.path);
      return {
        role: input.role,
        path: input.path,
        freqs: column(file, "freq_thz"),
        amps: column(file, "amplitude"),
      };
    });
    const { bin, curves: scaled } = normalizeFirstPeak(curves);
    for (const c of scaled) expect(c.amps[bin]).toBe(1.0);

    const pixel = curvePaths(svg).map((c) => pathPoints(c.d)[bin]);
    expect(pixel[1]).toEqual(pixel[0]);
    expect(pixel[2]).toEqual(pixel[0]);
  });

  it("skips scaling when normalization is none", () => {
    const svg = buildFigure({ ...overlayJob, normalization: "none" });
    expect(svg).not.toContain("data-peak-amplitude");
    expect(svg).not.toContain("data-designated-peak-thz");
  });
});

describe("temperature panel from sweep outputs", () => {
  it("renders three curves with a temperature legend", () => {
    const out = render(panelJob);
    const svg = readFileSync(out, "utf8");
    expect(curvePaths(svg).map((c) => c.role)).toEqual(["20", "220", "300"]);
    expect(svg).toContain('>temperature<');
    const legendLabels = [...svg.matchAll(/class="legend-label"[^>]*>([^<]+)</g)].map(
      (m) => m[1],
    );
    expect(legendLabels).toEqual(["20", "220", "300"]);
  });

  it("keeps the designated first line near its thermal position", () => {
    const svg = buildFigure(panelJob);
    const m = /data-designated-peak-thz="([^"]+)"/.exec(svg);
    expect(m).not.toBeNull();
    expect(Number(m![1])).toBeGreaterThan(1.2);
    expect(Number(m![1])).toBeLessThan(1.5);
  });

  it("spans the frequency axis from 0 to 6 THz", () => {
    const labels = xTickLabels(buildFigure(panelJob));
    expect(labels).toContain("0");
    expect(labels).toContain("6");
  });
});

describe("kernel figure", () => {
  const kernelCsv = join(workDir, "kernel.csv");
  writeOscillationCsv(kernelCsv);
  const kernelJob: FigureJob = {
    inputs: [{ role: "memory-kernel", path: kernelCsv }],
    output: join(workDir, "kernel.svg"),
    style: "kernel",
    normalization: "none",
  };

  it("shows a decaying oscillation over at least three periods", () => {
    const out = render(kernelJob);
    const svg = readFileSync(out, "utf8");
    const zero = /class="zero"[^>]*y1="([^"]+)"/.exec(svg);
    expect(zero).not.toBeNull();
    const baseline = Number(zero![1]);
    const ys = pathPoints(curvePaths(svg)[0].d).map(([, y]) => y - baseline);
    let crossings = 0;
    for (let i = 1; i < ys.length; i++) {
      if (ys[i - 1] !== 0 && Math.sign(ys[i]) !== Math.sign(ys[i - 1])) {
        crossings++;
      }
    }
    expect(crossings).toBeGreaterThanOrEqual(6);
    expect(svg).toContain("time (ps)");
  });

  it("rejects inputs that are not a two-column time series", () => {
    const trajectory = join(workDir, "trajectory-like.csv");
    writeFileSync(
      trajectory,
      "time_ps,mx,my,mz\n0,1,0,0\n0.5,0.9,0.1,0\n",
    );
    expect(() =>
      buildFigure({
        ...kernelJob,
        inputs: [{ role: "memory-kernel", path: trajectory }],
      }),
    ).toThrowError(/two-column time series/);
  });
});

describe("rendering invariants", () => {
  it("is deterministic for identical inputs", () => {
    expect(buildFigure(overlayJob)).toBe(buildFigure(overlayJob));
    const out = join(workDir, "repeat.svg");
    render({ ...overlayJob, output: out });
    const first = readFileSync(out);
    render({ ...overlayJob, output: out });
    expect(readFileSync(out).equals(first)).toBe(true);
  });

  it("leaves input files untouched", () => {
    const before = overlayJob.inputs.map((i) => readFileSync(i.path));
    render({ ...overlayJob, output: join(workDir, "readonly.svg") });
    overlayJob.inputs.forEach((input, i) => {
      expect(readFileSync(input.path).equals(before[i])).toBe(true);
    });
  });

  it("creates missing output directories", () => {
    const nested = join(workDir, "deep", "nested", "figure.svg");
    render({ ...overlayJob, output: nested });
    expect(readFileSync(nested, "utf8")).toContain("<svg ");
  });

  it("reports every unusable input in one error", () => {
    const corrupt = join(workDir, "corrupt.csv");
    writeFileSync(corrupt, "freq_thz,amplitude\n0,not-a-number\n");
    const missing = join(workDir, "absent.csv");
    const job: FigureJob = {
      ...overlayJob,
      inputs: [
        { role: "good", path: fixture("spectrum-nmllg.csv") },
        { role: "bad", path: corrupt },
        { role: "gone", path: missing },
      ],
    };
    let caught: unknown;
    try {
      buildFigure(job);
    } catch (err) {
      caught = err;
    }
    expect(caught).toBeInstanceOf(FigureError);
    const message = (caught as FigureError).message;
    expect(message).toContain(corrupt);
    expect(message).toContain(missing);
    expect(message).not.toContain("spectrum-nmllg.csv");
  });
});

describe("command line", () => {
  const cliPath = fileURLToPath(new URL("../dist/cli.js", import.meta.url));

  function runCli(args: string[]) {
    return spawnSync(process.execPath, [cliPath, ...args], {
      encoding: "utf8",
    });
  }

  it("renders an overlay end to end", () => {
    const out = join(workDir, "cli-overlay.svg");
    const res = runCli([
      "--input",
      `nmllg=${fixture("spectrum-nmllg.csv")}`,
      "--input",
      `llg=${fixture("spectrum-llg.csv")}`,
      "--output",
      out,
      "--style",
      "overlay",
    ]);
    expect(res.status).toBe(0);
    expect(res.stdout).toContain(`wrote ${out}`);
    expect(readFileSync(out, "utf8")).toContain('data-peak-amplitude="1"');
  });

  it("exits 2 on a malformed invocation", () => {
    const res = runCli(["--style", "overlay"]);
    expect(res.status).toBe(2);
    expect(res.stderr).toContain("--input");
  });

  it("exits 1 and names the file when an input is unreadable", () => {
    const res = runCli([
      "--input",
      "nmllg=/definitely/absent.csv",
      "--output",
      join(workDir, "never.svg"),
      "--style",
      "overlay",
    ]);
    expect(res.status).toBe(1);
    expect(res.stderr).toContain("/definitely/absent.csv");
  });
});
