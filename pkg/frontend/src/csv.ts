/**
 * Reader for the solver's CSV exports.
 *
 * The format is deliberately small: zero or more comment lines prefixed
 * with "# ", then a comma-separated header row, then data rows.  Cells
 * are plain text; numeric columns are parsed on access so a table can
 * carry mixed string/number columns (e.g. an `outcome` column next to
 * biomass values).
 */

import { readFileSync } from "fs";

/** A parsed CSV file: stripped comments, header names, string cells. */
export interface Table {
  comments: string[];
  header: string[];
  rows: string[][];
}

/** Requested column is absent from the header. */
export class MissingColumn extends Error {
  readonly column: string;
  constructor(column: string, header: string[]) {
    super(`missing column '${column}' (header: ${header.join(", ") || "<empty>"})`);
    this.name = "MissingColumn";
    this.column = column;
  }
}

/** File could not be read. */
export class IoError extends Error {
  constructor(path: string, cause: unknown) {
    super(`cannot read '${path}': ${cause instanceof Error ? cause.message : String(cause)}`);
    this.name = "IoError";
  }
}

/** Parse CSV text into a Table.  Blank lines are skipped. */
export function parseCsv(text: string): Table {
  const comments: string[] = [];
  const header: string[] = [];
  const rows: string[][] = [];
  let seenHeader = false;
  for (const raw of text.split("\n")) {
    const line = raw.endsWith("\r") ? raw.slice(0, -1) : raw;
    if (line === "") continue;
    if (line.startsWith("#")) {
      comments.push(line.replace(/^#\s?/, ""));
      continue;
    }
    const cells = line.split(",").map((c) => c.trim());
    if (!seenHeader) {
      header.push(...cells);
      seenHeader = true;
    } else {
      rows.push(cells);
    }
  }
  return { comments, header, rows };
}

/** Read and parse a CSV file; wraps filesystem failures in IoError. */
export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new IoError(path, err);
  }
  return parseCsv(text);
}

/** Extract one column as numbers.  Throws MissingColumn if absent. */
export function numericColumn(table: Table, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) throw new MissingColumn(name, table.header);
  return table.rows.map((row) => Number(row[idx] ?? "nan"));
}

/** Extract one column as raw strings.  Throws MissingColumn if absent. */
export function stringColumn(table: Table, name: string): string[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) throw new MissingColumn(name, table.header);
  return table.rows.map((row) => row[idx] ?? "");
}

/** Look up a `key=value` comment (e.g. "outcome=Extinct"); undefined if absent. */
export function commentValue(table: Table, key: string): string | undefined {
  const prefix = `${key}=`;
  for (const c of table.comments) {
    if (c.startsWith(prefix)) return c.slice(prefix.length);
  }
  return undefined;
}
