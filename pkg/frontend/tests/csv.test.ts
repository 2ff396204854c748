import { describe, it, expect } from "vitest";
import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import {
  parseCsv,
  readCsv,
  numericColumn,
  stringColumn,
  commentValue,
  MissingColumn,
  IoError,
} from "../src/csv.js";

const SAMPLE = `# model.q=0.11
# outcome=Extinct
t,biomass_u,biomass_v
0,0.5,1
1,0.25,0.5

2,0.125,0.25
`;

describe("parseCsv", () => {
  it("separates comments, header, and rows", () => {
    const table = parseCsv(SAMPLE);
    expect(table.comments).toEqual(["model.q=0.11", "outcome=Extinct"]);
    expect(table.header).toEqual(["t", "biomass_u", "biomass_v"]);
    expect(table.rows).toHaveLength(3); // blank line skipped
    expect(table.rows[2]).toEqual(["2", "0.125", "0.25"]);
  });

  it("handles empty text", () => {
    const table = parseCsv("");
    expect(table.comments).toEqual([]);
    expect(table.header).toEqual([]);
    expect(table.rows).toEqual([]);
  });

  it("handles a header-only file", () => {
    const table = parseCsv("# note\nx,u,v\n");
    expect(table.header).toEqual(["x", "u", "v"]);
    expect(table.rows).toEqual([]);
  });

  it("tolerates CRLF endings", () => {
    const table = parseCsv("a,b\r\n1,2\r\n");
    expect(table.header).toEqual(["a", "b"]);
    expect(table.rows).toEqual([["1", "2"]]);
  });
});

describe("column access", () => {
  const table = parseCsv(SAMPLE);

  it("parses numeric columns", () => {
    expect(numericColumn(table, "biomass_u")).toEqual([0.5, 0.25, 0.125]);
  });

  it("returns raw strings for string columns", () => {
    expect(stringColumn(table, "t")).toEqual(["0", "1", "2"]);
  });

  it("raises MissingColumn with the offending name", () => {
    expect(() => numericColumn(table, "biomass_w")).toThrowError(MissingColumn);
    try {
      stringColumn(table, "nope");
    } catch (err) {
      expect((err as MissingColumn).column).toBe("nope");
      expect((err as Error).message).toContain("nope");
    }
  });

  it("finds key=value comments", () => {
    expect(commentValue(table, "outcome")).toBe("Extinct");
    expect(commentValue(table, "model.q")).toBe("0.11");
    expect(commentValue(table, "absent")).toBeUndefined();
  });
});

describe("readCsv", () => {
  it("reads a file from disk", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotkit-"));
    const path = join(dir, "t.csv");
    writeFileSync(path, SAMPLE);
    expect(readCsv(path).rows).toHaveLength(3);
  });

  it("wraps filesystem failures in IoError", () => {
    expect(() => readCsv("/no/such/file.csv")).toThrowError(IoError);
  });
});
