/** Filter presets persist in the browser only; the service stays
 * stateless. Absent or broken storage degrades to defaults. */

import { FilterRow, defaultRows } from "./filters.js";

const KEY = "sheetaudit.filters";

export function loadRows(): FilterRow[] {
  try {
    const raw = globalThis.localStorage?.getItem(KEY);
    if (!raw) return defaultRows();
    const parsed = JSON.parse(raw) as FilterRow[];
    if (!Array.isArray(parsed) || parsed.length === 0) return defaultRows();
    return parsed;
  } catch {
    return defaultRows();
  }
}

export function saveRows(rows: FilterRow[]): void {
  try {
    globalThis.localStorage?.setItem(KEY, JSON.stringify(rows));
  } catch {
    /* private mode etc.; presets just don't persist */
  }
}
