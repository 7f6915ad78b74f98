/** Strict reader for the simulation CSV exports (numeric tables with a
 * one-line header, comma-separated, no quoting). */
import { readFileSync } from "fs";

export interface Table {
  header: string[];
  rows: number[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) throw new SchemaError("empty CSV");
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(`row ${i + 1} has ${parts.length} fields, header has ${header.length}`);
    }
    return parts.map((p) => Number(p));
  });
  return { header, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Column accessor; throws SchemaError when a required column is missing. */
export function column(t: Table, name: string): number[] {
  const i = t.header.indexOf(name);
  if (i < 0) throw new SchemaError(`missing column ${name}; have ${t.header.join(",")}`);
  return t.rows.map((r) => r[i]);
}

export function requireColumns(t: Table, names: string[]): void {
  for (const n of names) {
    if (t.header.indexOf(n) < 0) throw new SchemaError(`missing column ${n}`);
  }
}

/** Distinct values of a column, in order of first appearance. */
export function distinct(values: number[]): number[] {
  const out: number[] = [];
  for (const v of values) if (out.length === 0 || out[out.length - 1] !== v) out.push(v);
  return out;
}
