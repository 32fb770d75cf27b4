/** Wires the panels together against the audit service. The page only
 * reads: there is no affordance that could modify the audited file. */

import { ApiError, AuditApi } from "./api.js";
import {
  CONTENT_KINDS,
  FilterRow,
  KIND_LABELS,
  RECORD_KINDS,
  activeFilterSummary,
  activeSpecs,
  emptyRow,
} from "./filters.js";
import { cellTooltip, findingsByCell, severityClass } from "./grid.js";
import { LatestWins } from "./state.js";
import { loadRows, saveRows } from "./storage.js";
import { COLUMNS, columnLetters, detailPane, footerText, rowCells, sortRecords } from "./table.js";
import type { RecordJson, TimelineInstant } from "./types.js";

const BASE_CHECKPOINT = "1900-01-01T00:00:00";

const api = new AuditApi("");
const tableRequests = new LatestWins();
const checkpointRequests = new LatestWins();

let sessionId: string | null = null;
let rows: FilterRow[] = loadRows();
let records: RecordJson[] = [];
let sortColumn = 5; // Time
let sortAscending = true;
let timeline: TimelineInstant[] = [];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

// ---------------------------------------------------------------------------
// Session

async function openSession(): Promise<void> {
  const path = byId<HTMLInputElement>("path-input").value.trim();
  const status = byId<HTMLElement>("session-status");
  if (!path) {
    status.textContent = "enter a file path inside the served root";
    return;
  }
  status.textContent = "opening...";
  try {
    const session = await api.openSession(path);
    sessionId = session.session_id;
    status.textContent =
      `recording: ${session.recording_enabled} | ` +
      `sha256:${session.source_digest.slice(0, 12)}... | ` +
      `${session.summary.total} records`;
    const response = await api.timeline(sessionId);
    timeline = response.instants;
    setupSlider();
    await refreshTable();
    await refreshCheckpoint();
  } catch (error) {
    sessionId = null;
    status.textContent = error instanceof ApiError ? `error: ${error.message}` : String(error);
  }
}

// ---------------------------------------------------------------------------
// Filter panel

function option(value: string, label: string, selected: boolean): HTMLOptionElement {
  const node = el("option", undefined, label);
  node.value = value;
  node.selected = selected;
  return node;
}

function select(
  values: [string, string][],
  current: string,
  onChange: (value: string) => void,
): HTMLSelectElement {
  const node = el("select");
  for (const [value, label] of values) {
    node.appendChild(option(value, label, value === current));
  }
  node.addEventListener("change", () => onChange(node.value));
  return node;
}

function textInput(
  value: string,
  placeholder: string,
  onChange: (value: string) => void,
): HTMLInputElement {
  const node = el("input");
  node.type = "text";
  node.value = value;
  node.placeholder = placeholder;
  node.addEventListener("change", () => onChange(node.value));
  return node;
}

function editorFor(row: FilterRow, rerender: () => void): HTMLElement {
  const zone = el("span", "editor");
  const kindOptions: [string, string][] = CONTENT_KINDS.map((k) => [k, KIND_LABELS[k] ?? k]);
  switch (row.field) {
    case "transition": {
      zone.appendChild(select(kindOptions, row.before, (v) => { row.before = v; rerender(); }));
      zone.appendChild(el("span", "arrow", "->"));
      zone.appendChild(select(kindOptions, row.after, (v) => { row.after = v; rerender(); }));
      break;
    }
    case "author": {
      zone.appendChild(
        textInput(row.pattern, 'pattern, e.g. J* Doe', (v) => { row.pattern = v; rerender(); }),
      );
      const label = el("label", "ci");
      const box = el("input");
      box.type = "checkbox";
      box.checked = row.ignoreCase;
      box.addEventListener("change", () => { row.ignoreCase = box.checked; rerender(); });
      label.appendChild(box);
      label.appendChild(document.createTextNode("ignore case"));
      zone.appendChild(label);
      break;
    }
    case "date": {
      zone.appendChild(textInput(row.from, "from (2001-12-24)", (v) => { row.from = v; rerender(); }));
      zone.appendChild(el("span", "arrow", ".."));
      zone.appendChild(textInput(row.to, "to (2002-01-01)", (v) => { row.to = v; rerender(); }));
      break;
    }
    case "range": {
      zone.appendChild(
        textInput(row.range, "Sheet!A1:C9", (v) => { row.range = v; rerender(); }),
      );
      break;
    }
    case "kind": {
      zone.appendChild(
        select(RECORD_KINDS.map((k) => [k, k]), row.kind, (v) => { row.kind = v; rerender(); }),
      );
      break;
    }
  }
  return zone;
}

function renderFilterPanel(): void {
  const panel = byId<HTMLElement>("filter-rows");
  panel.replaceChildren();
  rows.forEach((row, index) => {
    const line = el("div", "filter-row");
    line.appendChild(
      select(
        [
          ["include", "include"],
          ["exclude", "exclude"],
          ["disabled", "disable"],
        ],
        row.action,
        (v) => { row.action = v as FilterRow["action"]; onFiltersEdited(); },
      ),
    );
    line.appendChild(
      select(
        [
          ["transition", "contents"],
          ["author", "author"],
          ["date", "date"],
          ["range", "cell range"],
          ["kind", "change kind"],
        ],
        row.field,
        (v) => { row.field = v as FilterRow["field"]; onFiltersEdited(); },
      ),
    );
    line.appendChild(editorFor(row, onFiltersEdited));
    if (index >= 6) {
      const remove = el("button", "remove", "x");
      remove.title = "remove this row";
      remove.addEventListener("click", () => {
        rows.splice(index, 1);
        onFiltersEdited();
      });
      line.appendChild(remove);
    }
    panel.appendChild(line);
  });
  byId<HTMLElement>("filter-summary").textContent = activeFilterSummary(rows);
}

function onFiltersEdited(): void {
  saveRows(rows);
  renderFilterPanel();
  void refreshTable();
}

// ---------------------------------------------------------------------------
// Change table

async function refreshTable(): Promise<void> {
  if (!sessionId) return;
  const token = tableRequests.next();
  const footer = byId<HTMLElement>("table-footer");
  try {
    const response = await api.changes(sessionId, activeSpecs(rows));
    if (!tableRequests.isCurrent(token)) return; // superseded
    records = response.records;
    renderTable();
    footer.textContent = footerText(response.summary);
  } catch (error) {
    if (!tableRequests.isCurrent(token)) return;
    footer.textContent = error instanceof ApiError ? `error: ${error.message}` : String(error);
  }
}

function renderTable(): void {
  const head = byId<HTMLTableRowElement>("table-head");
  head.replaceChildren();
  COLUMNS.forEach((name, index) => {
    const th = el("th", undefined, name);
    if (index === sortColumn) {
      th.textContent = `${name} ${sortAscending ? "▲" : "▼"}`;
    }
    th.addEventListener("click", () => {
      if (sortColumn === index) {
        sortAscending = !sortAscending;
      } else {
        sortColumn = index;
        sortAscending = true;
      }
      renderTable();
    });
    head.appendChild(th);
  });
  const body = byId<HTMLTableSectionElement>("table-body");
  body.replaceChildren();
  for (const record of sortRecords(records, sortColumn, sortAscending)) {
    const tr = el("tr");
    for (const cell of rowCells(record)) {
      tr.appendChild(el("td", undefined, cell));
    }
    tr.addEventListener("click", () => showDetail(record, tr));
    body.appendChild(tr);
  }
}

function showDetail(record: RecordJson, row: HTMLTableRowElement): void {
  document.querySelectorAll("#table-body tr.selected").forEach((tr) =>
    tr.classList.remove("selected"),
  );
  row.classList.add("selected");
  const pane = byId<HTMLElement>("detail-pane");
  pane.replaceChildren();
  const detail = detailPane(record);
  pane.appendChild(el("h3", undefined, detail.title));
  const list = el("dl");
  for (const [label, value] of detail.rows) {
    list.appendChild(el("dt", undefined, label));
    list.appendChild(el("dd", undefined, value));
  }
  pane.appendChild(list);
}

// ---------------------------------------------------------------------------
// Checkpoint view

function setupSlider(): void {
  const slider = byId<HTMLInputElement>("checkpoint-slider");
  slider.min = "0";
  slider.max = String(timeline.length);
  slider.value = String(timeline.length);
  slider.disabled = timeline.length === 0;
  slider.addEventListener("input", () => void refreshCheckpoint());
}

function checkpointAt(): { at: string | undefined; label: string } {
  const slider = byId<HTMLInputElement>("checkpoint-slider");
  const position = Number(slider.value);
  if (timeline.length === 0 || position >= timeline.length) {
    return { at: undefined, label: "current document" };
  }
  if (position === 0) {
    return { at: BASE_CHECKPOINT, label: "base document (before any change)" };
  }
  const instant = timeline[position - 1]!;
  return { at: instant.id, label: `after ${instant.id} at ${instant.timestamp.replace("T", " ")}` };
}

async function refreshCheckpoint(): Promise<void> {
  if (!sessionId) return;
  const token = checkpointRequests.next();
  const { at, label } = checkpointAt();
  byId<HTMLElement>("checkpoint-label").textContent = label;
  try {
    const [snapshot, findings] = await Promise.all([
      api.snapshot(sessionId, at),
      api.findings(sessionId, at),
    ]);
    if (!checkpointRequests.isCurrent(token)) return; // a newer slide won
    renderGrid(snapshot.sheets, findings.findings);
    renderFindings(findings.findings);
  } catch (error) {
    if (!checkpointRequests.isCurrent(token)) return;
    byId<HTMLElement>("checkpoint-label").textContent =
      error instanceof ApiError ? `error: ${error.message}` : String(error);
  }
}

function renderGrid(
  sheets: import("./types.js").SheetJson[],
  findings: import("./types.js").FindingJson[],
): void {
  const host = byId<HTMLElement>("grid-host");
  host.replaceChildren();
  const byCell = findingsByCell(findings);
  for (const sheet of sheets) {
    host.appendChild(el("h3", undefined, sheet.name));
    const table = el("table", "grid");
    const headRow = el("tr");
    headRow.appendChild(el("th"));
    for (let c = 0; c < sheet.n_cols; c++) {
      headRow.appendChild(el("th", undefined, columnLetters(c)));
    }
    table.appendChild(headRow);
    for (let r = 0; r < sheet.n_rows; r++) {
      const tr = el("tr");
      tr.appendChild(el("th", undefined, String(r + 1)));
      for (let c = 0; c < sheet.n_cols; c++) {
        const cell = sheet.cells[r]?.[c];
        const td = el("td", undefined, cell ? cell.text : "");
        if (cell && cell.result && cell.kind === "formula") {
          td.title = cell.result;
        }
        const key = `${sheet.name}!${columnLetters(c)}${r + 1}`;
        const hits = byCell.get(key);
        if (hits) {
          td.className = severityClass(hits);
          td.title = cellTooltip(hits);
        }
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
    host.appendChild(table);
  }
}

function renderFindings(findings: import("./types.js").FindingJson[]): void {
  const host = byId<HTMLElement>("findings-list");
  host.replaceChildren();
  if (findings.length === 0) {
    host.appendChild(el("p", "empty", "no findings at this checkpoint"));
    return;
  }
  for (const finding of findings) {
    const line = el("div", `finding finding-${finding.severity}`);
    const place = finding.address ? `${finding.sheet}!${finding.address}` : finding.sheet;
    line.appendChild(el("span", "check", finding.check));
    line.appendChild(el("span", "place", place));
    line.appendChild(el("span", "message", finding.message));
    host.appendChild(line);
  }
}

// ---------------------------------------------------------------------------

export function start(): void {
  byId<HTMLButtonElement>("open-button").addEventListener("click", () => void openSession());
  byId<HTMLInputElement>("path-input").addEventListener("keydown", (event) => {
    if (event.key === "Enter") void openSession();
  });
  byId<HTMLButtonElement>("add-filter-row").addEventListener("click", () => {
    rows.push(emptyRow());
    onFiltersEdited();
  });
  renderFilterPanel();
}

if (typeof document !== "undefined" && document.getElementById("open-button")) {
  start();
}
