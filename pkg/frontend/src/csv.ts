/**
 * Strict reader for the simulator's CSV outputs (schema version 1).
 *
 * The files are plain RFC-4180 tables without quoting: a header row and
 * numeric cells (or bare strings for status columns, "nan" for missing).
 * Column access is validated up front so a schema mismatch fails with the
 * offending column named.
 */

export interface Table {
  columns: string[];
  /** row-major cells; numbers where parseable, otherwise the raw string */
  rows: (number | string)[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV input");
  }
  const columns = lines[0].split(",");
  const width = columns.length;
  const rows: (number | string)[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== width) {
      throw new SchemaError(
        `row ${i} has ${cells.length} cells, header has ${width}`,
      );
    }
    rows.push(
      cells.map((cell) => {
        const value = Number(cell);
        return Number.isNaN(value) && cell !== "nan" ? cell : value;
      }),
    );
  }
  return { columns, rows };
}

export function columnIndex(table: Table, name: string): number {
  const index = table.columns.indexOf(name);
  if (index < 0) {
    throw new SchemaError(
      `column '${name}' not present; file has [${table.columns.join(", ")}]`,
    );
  }
  return index;
}

export function numericColumn(table: Table, name: string): number[] {
  const index = columnIndex(table, name);
  return table.rows.map((row) => {
    const cell = row[index];
    return typeof cell === "number" ? cell : Number.NaN;
  });
}

/** Distinct values in first-appearance order, then sorted ascending. */
export function sortedUnique(values: number[]): number[] {
  const seen = new Set<number>();
  for (const v of values) {
    if (!Number.isNaN(v)) seen.add(v);
  }
  return [...seen].sort((a, b) => a - b);
}
