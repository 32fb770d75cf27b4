/** The filter panel model: rows of action + predicate, their text form
 * for the service, and the active-filter summary line. */

export type FilterAction = "include" | "exclude" | "disabled";
export type FilterField = "transition" | "author" | "date" | "range" | "kind";

/** Content kinds as the panel shows them. */
export const KIND_LABELS: Record<string, string> = {
  empty: "<empty>",
  static: "static value",
  formula: "formula",
  any: "don't care",
};

export const CONTENT_KINDS = ["any", "empty", "static", "formula"] as const;

export const RECORD_KINDS = [
  "content",
  "row-insert",
  "row-delete",
  "col-insert",
  "col-delete",
] as const;

export interface FilterRow {
  action: FilterAction;
  field: FilterField;
  /* transition */
  before: string;
  after: string;
  /* author */
  pattern: string;
  ignoreCase: boolean;
  /* date */
  from: string;
  to: string;
  /* range */
  range: string;
  /* kind */
  kind: string;
}

export function emptyRow(): FilterRow {
  return {
    action: "disabled",
    field: "transition",
    before: "any",
    after: "any",
    pattern: "",
    ignoreCase: false,
    from: "",
    to: "",
    range: "",
    kind: "content",
  };
}

/** The panel opens with six rows, all disabled. */
export function defaultRows(): FilterRow[] {
  return Array.from({ length: 6 }, emptyRow);
}

/** The service text form for one row, or null when the row is disabled
 * or has nothing to say. */
export function rowToSpec(row: FilterRow): string | null {
  if (row.action === "disabled") {
    return null;
  }
  const sign = row.action === "include" ? "+" : "-";
  switch (row.field) {
    case "transition":
      return `${sign}transition=${row.before}->${row.after}`;
    case "author":
      if (!row.pattern) return null;
      return `${sign}author=${row.pattern}${row.ignoreCase ? ",ci" : ""}`;
    case "date":
      if (!row.from && !row.to) return null;
      return `${sign}date=${row.from}..${row.to}`;
    case "range":
      if (!row.range) return null;
      return `${sign}range=${row.range}`;
    case "kind":
      return `${sign}kind=${row.kind}`;
  }
}

export function activeSpecs(rows: FilterRow[]): string[] {
  return rows.map(rowToSpec).filter((spec): spec is string => spec !== null);
}

function describe(row: FilterRow): string {
  switch (row.field) {
    case "transition":
      return `Contents= "${KIND_LABELS[row.before]}" -> "${KIND_LABELS[row.after]}"`;
    case "author":
      return `Author= "${row.pattern}"${row.ignoreCase ? " (ignore case)" : ""}`;
    case "date":
      return `Date= ${row.from || "..."} .. ${row.to || "..."}`;
    case "range":
      return `Range= ${row.range}`;
    case "kind":
      return `Kind= ${row.kind}`;
  }
}

/** One line mirroring the panel: exclusions first, transition clauses of
 * one action merged after a single "Contents=" prefix. */
export function activeFilterSummary(rows: FilterRow[]): string {
  const parts: string[] = [];
  for (const action of ["exclude", "include"] as const) {
    const live = rows.filter((r) => r.action === action && rowToSpec(r) !== null);
    if (live.length === 0) continue;
    const clauses: string[] = [];
    for (const row of live) {
      const text = describe(row);
      const previous = clauses[clauses.length - 1];
      if (
        row.field === "transition" &&
        previous !== undefined &&
        previous.startsWith("Contents= ")
      ) {
        clauses[clauses.length - 1] = `${previous}, ${text.slice("Contents= ".length)}`;
      } else {
        clauses.push(text);
      }
    }
    const label = action === "exclude" ? "Exclude" : "Include";
    parts.push(`${label}: ${clauses.join("; ")}`);
  }
  return parts.length ? parts.join(" | ") : "No active filters";
}
