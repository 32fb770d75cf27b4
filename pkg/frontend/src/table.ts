/** Change-record table: column texts, sorting, footer, and the detail
 * pane content for a selected row. Pure functions; DOM assembly lives in
 * app.ts. */

import type { ContentJson, RecordJson, SummaryJson } from "./types.js";

export const COLUMNS = [
  "Change",
  "Sheet",
  "Address",
  "Author",
  "Date",
  "Time",
  "Status",
  "Change Details",
] as const;

const KIND_DISPLAY: Record<string, string> = {
  "cell-content": "Cell content",
  "row-insertion": "Insertion",
  "column-insertion": "Insertion",
  "row-deletion": "Deletion",
  "column-deletion": "Deletion",
};

export function columnLetters(index: number): string {
  let s = "";
  let n = index + 1;
  while (n > 0) {
    const rem = (n - 1) % 26;
    s = String.fromCharCode(65 + rem) + s;
    n = Math.floor((n - 1) / 26);
  }
  return s;
}

export function addressDisplay(record: RecordJson): string {
  if (record.address !== undefined) {
    return record.address;
  }
  const pos = record.position!;
  return pos.axis === "row" ? String(pos.index + 1) : columnLetters(pos.index);
}

export function rowCells(record: RecordJson): string[] {
  const [date = "", time = ""] = record.timestamp.split("T");
  return [
    KIND_DISPLAY[record.kind] ?? record.kind,
    record.sheet,
    addressDisplay(record),
    record.author,
    date,
    time,
    record.state,
    record.detail,
  ];
}

/** Stable sort on one column; Date/Time columns compare the full
 * timestamp so rows within a day order correctly. */
export function sortRecords(
  records: RecordJson[],
  column: number,
  ascending: boolean,
): RecordJson[] {
  const keyed = records.map((record, index) => {
    const key =
      column === 4 || column === 5 ? record.timestamp : rowCells(record)[column] ?? "";
    return { record, key, index };
  });
  keyed.sort((a, b) => {
    const cmp = a.key < b.key ? -1 : a.key > b.key ? 1 : a.index - b.index;
    return ascending ? cmp : -cmp;
  });
  return keyed.map((k) => k.record);
}

export function footerText(summary: SummaryJson): string {
  if (summary.total === 0) {
    return "0 Change Records";
  }
  return `${summary.total} Change Records between: ${summary.min_date} and ${summary.max_date}`;
}

function contentText(content: ContentJson): string {
  if (content.kind === "empty") return "<empty>";
  if (content.kind === "static") return `${content.lexical} (${content.type})`;
  const cached = content.cached;
  if (!cached) return content.formula ?? "";
  const result = cached.type === "error" ? `${cached.token} (error)` : `${cached.lexical} (${cached.type})`;
  return `${content.formula} {${result}}`;
}

export interface DetailPane {
  title: string;
  /** label/value pairs; structural records carry no before/after */
  rows: [string, string][];
}

export function detailPane(record: RecordJson): DetailPane {
  const rows: [string, string][] = [
    ["Record", record.id],
    ["Kind", KIND_DISPLAY[record.kind] ?? record.kind],
    ["Sheet", record.sheet],
    ["Address", addressDisplay(record)],
    ["Author", record.author],
    ["Timestamp", record.timestamp.replace("T", " ")],
    ["Status", record.state],
  ];
  if (record.kind === "cell-content") {
    rows.push(["Before", contentText(record.before)]);
    rows.push(["After", contentText(record.after)]);
  } else {
    rows.push(["Change", record.detail]);
  }
  return { title: `${record.sheet} ${addressDisplay(record)}`, rows };
}
