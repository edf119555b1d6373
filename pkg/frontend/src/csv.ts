import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** One parsed CSV artifact: leading `# key = value` metadata plus numeric columns. */
export interface SeriesFile {
  path: string;
  meta: Record<string, string>;
  columns: string[];
  rows: number[][];
}

/** Failure tied to one input file; render jobs aggregate these per file. */
export class CsvError extends Error {
  constructor(
    readonly path: string,
    reason: string,
  ) {
    super(`${path}: ${reason}`);
    this.name = "CsvError";
  }
}

const META_LINE = /^#\s*([^=\s][^=]*?)\s*=\s*(.*)\s*$/;

/**
 * Parse the simulator's CSV dialect: `#` comment lines carrying `key = value`
 * metadata, then a column-header row, then numeric rows.
 */
export function parseSeriesCsv(text: string, path: string): SeriesFile {
  const meta: Record<string, string> = {};
  for (const line of text.split(/\r?\n/)) {
    if (!line.startsWith("#")) break;
    const m = META_LINE.exec(line);
    if (m) meta[m[1]] = m[2];
  }
  const parsed = Papa.parse<string[]>(text, {
    comments: "#",
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    const where = e.row === undefined ? "" : ` near row ${e.row}`;
    throw new CsvError(path, `malformed CSV (${e.message}${where})`);
  }
  const [header, ...body] = parsed.data;
  if (!header || header.length < 2) {
    throw new CsvError(path, "missing column header row");
  }
  const rows = body.map((cells, i) => {
    if (cells.length !== header.length) {
      throw new CsvError(
        path,
        `row ${i + 1} has ${cells.length} cells, expected ${header.length}`,
      );
    }
    return cells.map((cell, j) => {
      const v = cell.trim() === "" ? NaN : Number(cell);
      if (!Number.isFinite(v)) {
        throw new CsvError(
          path,
          `non-numeric value "${cell}" in column ${header[j]}, data row ${i + 1}`,
        );
      }
      return v;
    });
  });
  if (rows.length === 0) throw new CsvError(path, "no data rows");
  return { path, meta, columns: header, rows };
}

/** Read one CSV from disk and parse it. */
export function readSeriesFile(path: string): SeriesFile {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    const code = (err as NodeJS.ErrnoException).code;
    throw new CsvError(path, code === "ENOENT" ? "no such file" : String(err));
  }
  return parseSeriesCsv(text, path);
}

/** Extract a named column as a numeric vector. */
export function column(file: SeriesFile, name: string): number[] {
  const j = file.columns.indexOf(name);
  if (j < 0) {
    throw new CsvError(
      file.path,
      `missing column "${name}" (columns: ${file.columns.join(", ")})`,
    );
  }
  return file.rows.map((r) => r[j]);
}
