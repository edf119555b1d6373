import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { column, CsvError, parseSeriesCsv, readSeriesFile } from "../src/csv.js";

const fixture = (name: string) =>
  fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));

const SAMPLE = [
  "# spinmem 0.1.0",
  "# config-hash 1f7c07f0b84d",
  "# model = nmllg",
  "# alpha = None",
  "freq_thz,amplitude",
  "0,0.019230393844189234",
  "0.056792367105860969,0.018649609271984034",
  "",
].join("\n");

describe("parseSeriesCsv", () => {
  it("captures key = value metadata and skips bare comment lines", () => {
    const file = parseSeriesCsv(SAMPLE, "sample.csv");
    expect(file.meta["model"]).toBe("nmllg");
    expect(file.meta["alpha"]).toBe("None");
    expect(file.meta).not.toHaveProperty("config-hash");
  });

  it("round-trips 17-significant-digit values exactly", () => {
    const file = parseSeriesCsv(SAMPLE, "sample.csv");
    expect(file.columns).toEqual(["freq_thz", "amplitude"]);
    expect(file.rows[1][0]).toBe(0.056792367105860969);
    expect(file.rows[1][1]).toBe(0.018649609271984034);
  });

  it("rejects non-numeric cells with column, row, and path", () => {
    const bad = SAMPLE.replace("0.018649609271984034", "off-scale");
    expect(() => parseSeriesCsv(bad, "bad.csv")).toThrowError(
      /bad\.csv: non-numeric value "off-scale" in column amplitude, data row 2/,
    );
  });

  it("rejects empty cells", () => {
    const bad = SAMPLE.replace("0.019230393844189234", "");
    expect(() => parseSeriesCsv(bad, "bad.csv")).toThrow(CsvError);
  });

  it("rejects ragged rows", () => {
    const bad = SAMPLE.replace("0,0.019230393844189234", "0,1,2");
    expect(() => parseSeriesCsv(bad, "bad.csv")).toThrowError(
      /row 1 has 3 cells, expected 2/,
    );
  });

  it("rejects comment-only input", () => {
    expect(() => parseSeriesCsv("# spinmem 0.1.0\n", "empty.csv")).toThrowError(
      /missing column header row/,
    );
  });

  it("rejects a header with no data rows", () => {
    expect(() =>
      parseSeriesCsv("freq_thz,amplitude\n", "hollow.csv"),
    ).toThrowError(/no data rows/);
  });
});

describe("readSeriesFile", () => {
  it("loads a real simulator spectrum", () => {
    const file = readSeriesFile(fixture("spectrum-nmllg.csv"));
    expect(file.columns).toEqual(["freq_thz", "amplitude"]);
    expect(file.rows.length).toBeGreaterThan(4000);
    expect(file.rows[0][0]).toBe(0);
    expect(file.meta["model"]).toBe("nmllg");
    expect(file.meta["window_start_ps"]).toBe("2.2999999999999998");
  });

  it("reports a missing file by path", () => {
    expect(() => readSeriesFile(fixture("absent.csv"))).toThrowError(
      /absent\.csv: no such file/,
    );
  });
});

describe("column", () => {
  it("extracts a named column", () => {
    const file = parseSeriesCsv(SAMPLE, "sample.csv");
    expect(column(file, "freq_thz")).toEqual([0, 0.056792367105860969]);
  });

  it("lists available columns when the name is unknown", () => {
    const file = parseSeriesCsv(SAMPLE, "sample.csv");
    expect(() => column(file, "time_ps")).toThrowError(
      /missing column "time_ps" \(columns: freq_thz, amplitude\)/,
    );
  });
});
