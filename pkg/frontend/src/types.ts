/** Shapes of the audit-service responses (schema_version 1). */

export interface CachedResult {
  type: string;
  lexical?: string;
  token?: string;
  numeric?: number;
  currency?: string;
}

export interface ContentJson {
  kind: "empty" | "static" | "formula";
  type?: string;
  lexical?: string;
  numeric?: number;
  currency?: string;
  formula?: string;
  cached?: CachedResult;
}

export interface PositionJson {
  axis: "row" | "column";
  index: number;
  count: number;
}

export interface RecordJson {
  id: string;
  kind: string;
  sheet: string;
  address?: string;
  position?: PositionJson;
  author: string;
  timestamp: string;
  state: string;
  before: ContentJson;
  after: ContentJson;
  detail: string;
}

export interface SummaryJson {
  total: number;
  by_kind: Record<string, number>;
  by_author: Record<string, number>;
  by_date: Record<string, number>;
  min_date: string | null;
  max_date: string | null;
}

export interface ChangesResponse {
  schema_version: number;
  records: RecordJson[];
  summary: SummaryJson;
}

export interface SessionResponse {
  schema_version: number;
  session_id: string;
  recording_enabled: string;
  summary: SummaryJson;
  sheets: string[];
  notices: string[];
  source_digest: string;
}

export interface FindingJson {
  check: string;
  severity: "info" | "warn" | "alert";
  sheet: string;
  address: string | null;
  message: string;
  evidence: Record<string, unknown>;
}

export interface FindingsResponse {
  schema_version: number;
  at: string | null;
  findings: FindingJson[];
}

export interface CellJson {
  kind: "empty" | "static" | "formula";
  text: string;
  result: string | null;
}

export interface SheetJson {
  name: string;
  n_rows: number;
  n_cols: number;
  cells: CellJson[][];
}

export interface SnapshotResponse {
  schema_version: number;
  sheets: SheetJson[];
  as_of?: string | null;
  applied_count?: number;
  unrecoverable?: { sheet: string; axis: string; index: number }[];
}

export interface TimelineInstant {
  id: string;
  timestamp: string;
  kind: string;
}

export interface TimelineResponse {
  schema_version: number;
  instants: TimelineInstant[];
}
