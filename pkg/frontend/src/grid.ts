/** Snapshot grid helpers: findings keyed by cell, severity ranking. */

import type { FindingJson } from "./types.js";

const SEVERITY_RANK: Record<string, number> = { info: 1, warn: 2, alert: 3 };

export function findingsByCell(findings: FindingJson[]): Map<string, FindingJson[]> {
  const map = new Map<string, FindingJson[]>();
  for (const finding of findings) {
    if (finding.address === null) continue; // sheet-level
    const key = `${finding.sheet}!${finding.address}`;
    const bucket = map.get(key);
    if (bucket) {
      bucket.push(finding);
    } else {
      map.set(key, [finding]);
    }
  }
  return map;
}

/** The CSS class for a cell: its worst finding's severity. */
export function severityClass(findings: FindingJson[]): string {
  let worst = "";
  let rank = 0;
  for (const finding of findings) {
    const r = SEVERITY_RANK[finding.severity] ?? 0;
    if (r > rank) {
      rank = r;
      worst = finding.severity;
    }
  }
  return worst ? `finding-${worst}` : "";
}

export function cellTooltip(findings: FindingJson[]): string {
  return findings.map((f) => `${f.check}: ${f.message}`).join("\n");
}
