"""Local read-only HTTP service exposing audit sessions to the companion UI.

Sessions wrap an immutable loaded workbook; the only mutation anywhere is
the insert into the session cache. Files must live under the configured
allow-list root (paths are canonicalized before the check), and nothing is
ever opened for writing. Binds to loopback by default; authentication and
transport security are deployment concerns, deliberately out of scope.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import load_workbook
from .checks import CheckConfig, scan
from .errors import AuditError, CheckpointNotFound, InvalidFilter, UnreplayableRecord
from .filters import apply_filters, parse_filters, summarize
from .model import Workbook, record_to_json
from .rebuild import GridSnapshot, parse_checkpoint, replay_to, revert_all
from .report import finding_to_json, summary_to_json
from .values import render_result

SCHEMA_VERSION = 1


class SessionRequest(BaseModel):
    path: str


@dataclass
class _Session:
    id: str
    path: Path
    workbook: Workbook
    lock: threading.Lock = field(default_factory=threading.Lock)
    base: Optional[GridSnapshot] = None

    def base_snapshot(self) -> GridSnapshot:
        with self.lock:
            if self.base is None:
                self.base = revert_all(self.workbook)
            return self.base


def _normalize_filter(text: str) -> str:
    # query-string decoding turns "+" into a space; recover the prefix
    if text.startswith(" "):
        return "+" + text[1:]
    return text


def _cell_json(content) -> dict:
    if content.kind == "formula":
        result = content.cached_result
        return {
            "kind": "formula",
            "text": content.formula_source,
            "result": render_result(result) if result is not None else None,
        }
    if content.kind == "static":
        v = content.static_value
        return {"kind": "static", "text": v.lexical, "result": f"{v.lexical} ({v.value_type})"}
    return {"kind": "empty", "text": "", "result": None}


def _snapshot_json(snapshot) -> dict:
    sheets = []
    for sheet in snapshot.sheets:
        n_rows, n_cols = sheet.n_rows, sheet.n_cols
        sheets.append(
            {
                "name": sheet.name,
                "n_rows": n_rows,
                "n_cols": n_cols,
                "cells": [
                    [_cell_json(sheet.cell(r, c)) for c in range(n_cols)]
                    for r in range(n_rows)
                ],
            }
        )
    out = {"schema_version": SCHEMA_VERSION, "sheets": sheets}
    if isinstance(snapshot, GridSnapshot):
        out["as_of"] = snapshot.as_of.isoformat() if snapshot.as_of else None
        out["applied_count"] = snapshot.applied_count
        out["unrecoverable"] = [
            {"sheet": s, "axis": a, "index": i}
            for s, a, i in sorted(snapshot.unrecoverable)
        ]
    return out


def create_app(
    root: Path | str = ".",
    ui_dir: Path | str | None = None,
    config: CheckConfig | None = None,
) -> FastAPI:
    root = Path(root).resolve()
    config = config or CheckConfig()
    app = FastAPI(title="sheetaudit service", version="0.1.0")
    sessions: dict[str, _Session] = {}
    sessions_lock = threading.Lock()

    def get_session(session_id: str) -> _Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    def snapshot_for(session: _Session, at: str | None):
        if at is None:
            return session.workbook
        if session.workbook.recording_enabled != "enabled":
            raise HTTPException(status_code=400, detail="file has no change history")
        try:
            checkpoint = parse_checkpoint(at)
            return replay_to(session.base_snapshot(), session.workbook, checkpoint)
        except (CheckpointNotFound, UnreplayableRecord) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/sessions", status_code=201)
    def create_session(request: SessionRequest):
        candidate = Path(request.path)
        if not candidate.is_absolute():
            candidate = root / candidate
        resolved = candidate.resolve()
        if root not in (resolved, *resolved.parents):
            raise HTTPException(status_code=404, detail="path outside the allowed root")
        if not resolved.is_file():
            raise HTTPException(status_code=404, detail="no such file")
        try:
            workbook = load_workbook(resolved)
        except AuditError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        session = _Session(id=uuid.uuid4().hex, path=resolved, workbook=workbook)
        with sessions_lock:
            sessions[session.id] = session
        return {
            "schema_version": SCHEMA_VERSION,
            "session_id": session.id,
            "recording_enabled": workbook.recording_enabled,
            "summary": summary_to_json(summarize(workbook.changes)),
            "sheets": workbook.sheet_names(),
            "notices": workbook.notices,
            "source_digest": workbook.manifest.source_digest,
        }

    @app.get("/sessions/{session_id}/changes")
    def get_changes(session_id: str, filter: list[str] = Query(default=[])):
        session = get_session(session_id)
        try:
            specs = parse_filters([_normalize_filter(f) for f in filter])
            records = apply_filters(specs, session.workbook)
        except InvalidFilter as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "schema_version": SCHEMA_VERSION,
            "records": [record_to_json(r) for r in records],
            "summary": summary_to_json(summarize(records)),
        }

    @app.get("/sessions/{session_id}/summary")
    def get_summary(session_id: str):
        session = get_session(session_id)
        return {
            "schema_version": SCHEMA_VERSION,
            "summary": summary_to_json(summarize(session.workbook.changes)),
        }

    @app.get("/sessions/{session_id}/findings")
    def get_findings(session_id: str, at: str | None = None):
        session = get_session(session_id)
        snapshot = snapshot_for(session, at)
        findings = scan(snapshot, config)
        return {
            "schema_version": SCHEMA_VERSION,
            "at": at,
            "findings": [finding_to_json(f) for f in findings],
        }

    @app.get("/sessions/{session_id}/snapshot")
    def get_snapshot(session_id: str, at: str | None = None):
        session = get_session(session_id)
        snapshot = snapshot_for(session, at)
        return _snapshot_json(snapshot)

    @app.get("/sessions/{session_id}/timeline")
    def get_timeline(session_id: str):
        """Checkpoint candidates for the UI slider: every record instant."""
        session = get_session(session_id)
        return {
            "schema_version": SCHEMA_VERSION,
            "instants": [
                {"id": r.id, "timestamp": r.timestamp.isoformat(), "kind": r.kind}
                for r in session.workbook.changes
            ],
        }

    _mount_ui(app, ui_dir)
    return app


def _mount_ui(app: FastAPI, ui_dir: Path | str | None) -> None:
    if ui_dir is None:
        default = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = default if default.is_dir() else None
    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=Path(ui_dir), html=True), name="ui")
    else:

        @app.get("/")
        def index():
            return JSONResponse(
                {"service": "sheetaudit", "schema_version": SCHEMA_VERSION}
            )
