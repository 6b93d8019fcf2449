import { readFileSync } from "node:fs";

import { IoError, SchemaError } from "./errors.js";

export interface Table {
  path: string;
  columns: string[];
  /** One array per column, all the same length. */
  values: number[][];
}

function readText(path: string): string {
  try {
    return readFileSync(path, "utf8");
  } catch (err) {
    const code = (err as NodeJS.ErrnoException).code ?? "unknown";
    throw new IoError(`cannot read ${path} (${code})`);
  }
}

/** Parse a numeric CSV and check its header against the expected columns. */
export function readTable(path: string, expected: string[]): Table {
  const text = readText(path);
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: empty CSV`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  for (let i = 0; i < expected.length; i++) {
    if (header[i] !== expected[i]) {
      throw new SchemaError(
        `${path}: column ${i + 1} is "${header[i] ?? ""}", expected "${expected[i]}"`,
      );
    }
  }
  if (header.length !== expected.length) {
    throw new SchemaError(
      `${path}: ${header.length} columns, expected ${expected.length} (${expected.join(",")})`,
    );
  }
  if (lines.length === 1) {
    throw new SchemaError(`${path}: no data rows`);
  }
  const values: number[][] = expected.map(() => new Array(lines.length - 1));
  for (let r = 1; r < lines.length; r++) {
    const cells = lines[r].split(",");
    if (cells.length !== expected.length) {
      throw new SchemaError(`${path}: row ${r} has ${cells.length} cells, expected ${expected.length}`);
    }
    for (let c = 0; c < cells.length; c++) {
      const v = Number(cells[c]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${path}: row ${r}, column "${expected[c]}" is not a finite number: "${cells[c]}"`);
      }
      values[c][r - 1] = v;
    }
  }
  return { path, columns: expected, values };
}
