import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { readTable } from "../src/csv.js";
import { IoError, SchemaError } from "../src/errors.js";

const dir = mkdtempSync(join(tmpdir(), "plotkit-csv-"));

function tmpCsv(name: string, text: string): string {
  const path = join(dir, name);
  writeFileSync(path, text);
  return path;
}

describe("readTable", () => {
  it("parses a valid two-column table", () => {
    const path = tmpCsv("ok.csv", "t,td\n0,0.5\n0.1,0.25\n");
    const table = readTable(path, ["t", "td"]);
    expect(table.columns).toEqual(["t", "td"]);
    expect(table.values[0]).toEqual([0, 0.1]);
    expect(table.values[1]).toEqual([0.5, 0.25]);
  });

  it("rejects an empty file", () => {
    const path = tmpCsv("empty.csv", "");
    expect(() => readTable(path, ["t", "td"])).toThrow(SchemaError);
    expect(() => readTable(path, ["t", "td"])).toThrow(/empty CSV/);
  });

  it("names the offending column on a header mismatch", () => {
    const path = tmpCsv("badhead.csv", "t,negativity\n0,1\n");
    expect(() => readTable(path, ["t", "td"])).toThrow(/column 2 is "negativity", expected "td"/);
  });

  it("rejects extra columns", () => {
    const path = tmpCsv("extra.csv", "t,td,junk\n0,1,2\n");
    expect(() => readTable(path, ["t", "td"])).toThrow(/3 columns, expected 2/);
  });

  it("rejects a header-only file", () => {
    const path = tmpCsv("norows.csv", "t,td\n");
    expect(() => readTable(path, ["t", "td"])).toThrow(/no data rows/);
  });

  it("names the column holding a non-numeric cell", () => {
    const path = tmpCsv("nonnum.csv", "t,td\n0,0.5\n0.1,oops\n");
    expect(() => readTable(path, ["t", "td"])).toThrow(/row 2, column "td" is not a finite number/);
  });

  it("rejects ragged rows", () => {
    const path = tmpCsv("ragged.csv", "t,td\n0,0.5\n0.1\n");
    expect(() => readTable(path, ["t", "td"])).toThrow(/row 2 has 1 cells/);
  });

  it("raises an I/O error for a missing file", () => {
    expect(() => readTable(join(dir, "nope.csv"), ["t", "td"])).toThrow(IoError);
  });
});
