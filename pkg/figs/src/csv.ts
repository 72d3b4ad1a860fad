/**
 * Minimal CSV access for the simulator's artifacts: a header row of plain
 * column names followed by comma-separated cells, no quoting, no escapes.
 */

import * as fs from "fs";

export interface Table {
  path: string;
  columns: string[];
  /** row-major cells, same length as columns in every row */
  rows: string[][];
}

export class SchemaError extends Error {}

export function readCsv(path: string): Table {
  const text = fs.readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: file is empty`);
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `${path}: row ${i + 1} has ${cells.length} cells, ` +
          `header has ${columns.length}`,
      );
    }
    return cells;
  });
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return { path, columns, rows };
}

/** Numeric column lookup; raises naming the missing column. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(
      `${table.path}: missing column '${name}' ` +
        `(has: ${table.columns.join(", ")})`,
    );
  }
  return table.rows.map((row, i) => {
    const value = Number(row[idx]);
    if (!Number.isFinite(value)) {
      throw new SchemaError(
        `${table.path}: non-numeric value '${row[idx]}' in '${name}' row ${i + 1}`,
      );
    }
    return value;
  });
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(
        `${table.path}: missing column '${name}' ` +
          `(has: ${table.columns.join(", ")})`,
      );
    }
  }
}
