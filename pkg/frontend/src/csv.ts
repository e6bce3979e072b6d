/**
 * Minimal CSV reader for the experiment runner's output files, with strict
 * schema checks: a figure should fail loudly, naming the offending column,
 * rather than render nonsense from a mismatched file.
 */

export type Row = Record<string, string>;

export class SchemaError extends Error {}

/** Parse CSV text (RFC-style quoting) into header + rows. */
export function parseCsv(text: string): { header: string[]; rows: string[][] } {
  const records: string[][] = [];
  let field = "";
  let record: string[] = [];
  let inQuotes = false;
  let i = 0;
  const push = () => {
    record.push(field);
    field = "";
  };
  const endRecord = () => {
    push();
    records.push(record);
    record = [];
  };
  while (i < text.length) {
    const ch = text[i];
    if (inQuotes) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        inQuotes = false;
        i += 1;
        continue;
      }
      field += ch;
      i += 1;
      continue;
    }
    if (ch === '"') {
      inQuotes = true;
      i += 1;
    } else if (ch === ",") {
      push();
      i += 1;
    } else if (ch === "\r") {
      i += 1;
    } else if (ch === "\n") {
      endRecord();
      i += 1;
    } else {
      field += ch;
      i += 1;
    }
  }
  if (field.length > 0 || record.length > 0) {
    endRecord();
  }
  const nonEmpty = records.filter((r) => !(r.length === 1 && r[0] === ""));
  if (nonEmpty.length === 0) {
    throw new SchemaError("empty CSV");
  }
  const [header, ...rows] = nonEmpty;
  return { header, rows };
}

/** Parse and validate against an exact column list. */
export function readTable(text: string, expectedColumns: string[], source = "input"): Row[] {
  const { header, rows } = parseCsv(text);
  for (const column of expectedColumns) {
    if (!header.includes(column)) {
      throw new SchemaError(`${source}: missing column '${column}'`);
    }
  }
  for (const column of header) {
    if (!expectedColumns.includes(column)) {
      throw new SchemaError(`${source}: unexpected column '${column}'`);
    }
  }
  return rows.map((cells) => {
    const row: Row = {};
    header.forEach((name, idx) => {
      row[name] = cells[idx] ?? "";
    });
    return row;
  });
}

export function toNumber(row: Row, column: string, source = "input"): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`${source}: column '${column}' holds non-numeric '${row[column]}'`);
  }
  return value;
}

export const SUMMARY_COLUMNS = [
  "method",
  "run",
  "seed",
  "wall_time_s",
  "final_score",
  "total_sims",
];

export const HISTOGRAM_COLUMNS = ["method", "sims_per_iteration", "frequency"];

export const CONVERGENCE_COLUMNS = ["method", "run", "iteration", "audited_best_score"];
