"""Command-line interface. Strictly read-only with respect to input files.

Exit codes: 0 success (an empty result is not an error), 2 file or
configuration errors, 3 invalid filters, 4 checkpoint not reconstructable,
5 change recording not found (verify).
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import load_workbook
from .checks import CheckConfig, load_config, scan
from .errors import AuditError, CheckpointNotFound, InvalidFilter, UnreplayableRecord
from .filters import apply_filters, parse_filters, summarize
from .rebuild import export_changes_file, parse_checkpoint, replay_to, revert_all
from .report import (
    FORMATS,
    render_change_table,
    render_findings,
    render_summary,
    summary_to_json,
)

EXIT_OK = 0
EXIT_FILE = 2
EXIT_FILTER = 3
EXIT_CHECKPOINT = 4
EXIT_NO_HISTORY = 5


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", type=Path, help="spreadsheet file to audit")
    common.add_argument(
        "--format", choices=FORMATS, default="table", help="output format"
    )
    common.add_argument("--config", type=Path, help="check configuration file")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheetaudit",
        description="Read-only change-record and static analysis for "
        "OpenDocument spreadsheets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("changes", parents=[common], help="list (filtered) change records")
    p.add_argument(
        "--filter",
        action="append",
        default=[],
        metavar="SPEC",
        help="filter row, e.g. '+author=J* Doe,ci' or '-transition=empty->any'; repeatable",
    )

    p = sub.add_parser("scan", parents=[common], help="run static checks")
    p.add_argument("--at", help="checkpoint (ISO date-time or record id)")

    sub.add_parser("summary", parents=[common], help="change-log summary footer")

    p = sub.add_parser("reconstruct", parents=[common], help="write a snapshot as CSV per sheet")
    p.add_argument("--at", help="checkpoint (ISO date-time or record id)")
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("export-changes", parents=[common], help="write the changes file")
    p.add_argument("--out", type=Path, required=True, help="output path")

    sub.add_parser("verify", parents=[common], help="report change-recording status")

    p = sub.add_parser("serve", help="serve audit sessions over HTTP")
    p.add_argument("--root", type=Path, default=Path("."), help="allow-list root directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8754)
    p.add_argument("--ui", type=Path, default=None, help="built UI bundle directory")
    return parser


def _load(args):
    workbook = load_workbook(args.file)
    for notice in workbook.notices:
        print(f"notice: {notice}", file=sys.stderr)
    return workbook


def _config(args) -> CheckConfig:
    if getattr(args, "config", None):
        return load_config(args.config)
    return CheckConfig()


def _snapshot_at(workbook, at_text: str):
    if workbook.recording_enabled != "enabled":
        raise CheckpointNotFound("no change history to reconstruct from")
    checkpoint = parse_checkpoint(at_text)
    return replay_to(revert_all(workbook), workbook, checkpoint)


def cmd_changes(args) -> int:
    specs = parse_filters(args.filter)
    workbook = _load(args)
    records = apply_filters(specs, workbook)
    print(render_change_table(records, args.format), end="")
    return EXIT_OK


def cmd_scan(args) -> int:
    workbook = _load(args)
    snapshot = _snapshot_at(workbook, args.at) if args.at else workbook
    findings = scan(snapshot, _config(args))
    print(render_findings(findings, args.format), end="")
    return EXIT_OK


def cmd_summary(args) -> int:
    workbook = _load(args)
    summary = summarize(workbook.changes)
    if args.format == "ndjson":
        import json

        print(json.dumps(summary_to_json(summary), ensure_ascii=False))
    elif args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["dimension", "key", "count"])
        for kind, count in summary.by_kind.items():
            writer.writerow(["kind", kind, count])
        for author, count in summary.by_author.items():
            writer.writerow(["author", author, count])
        for day, count in summary.by_date.items():
            writer.writerow(["date", day.isoformat(), count])
    else:
        print(render_summary(summary), end="")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    workbook = _load(args)
    if args.at:
        snapshot = _snapshot_at(workbook, args.at)
    else:
        snapshot = workbook  # current document
    args.out.mkdir(parents=True, exist_ok=True)
    for sheet in snapshot.sheets:
        safe = "".join(c if c.isalnum() or c in "-_ " else "_" for c in sheet.name)
        target = args.out / f"{safe}.csv"
        with open(target, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            for r in range(sheet.n_rows):
                writer.writerow(
                    [_cell_text(sheet.cell(r, c)) for c in range(sheet.n_cols)]
                )
    for mark in sorted(getattr(snapshot, "unrecoverable", ())):
        print(
            f"note: {mark[0]}: {mark[1]} {mark[2] + 1} is a blank placeholder "
            "for content the log does not preserve",
            file=sys.stderr,
        )
    print(f"wrote {len(snapshot.sheets)} sheet(s) to {args.out}")
    return EXIT_OK


def _cell_text(content) -> str:
    if content.kind == "formula":
        return content.formula_source
    if content.kind == "static":
        return content.static_value.lexical
    return ""


def cmd_export_changes(args) -> int:
    workbook = _load(args)
    count = export_changes_file(workbook, args.out)
    print(f"wrote {count} change record(s) to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    workbook = _load(args)
    print(f"change recording: {workbook.recording_enabled}")
    print(f"source digest: sha256:{workbook.manifest.source_digest}")
    if workbook.recording_setting is not None:
        state = "on" if workbook.recording_setting else "off"
        print(f"recording switch (settings.xml): {state}")
    if workbook.recording_enabled != "enabled":
        return EXIT_NO_HISTORY
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(root=args.root, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "changes": cmd_changes,
    "scan": cmd_scan,
    "summary": cmd_summary,
    "reconstruct": cmd_reconstruct,
    "export-changes": cmd_export_changes,
    "verify": cmd_verify,
    "serve": cmd_serve,
}


def _merge_filter_values(argv: list[str]) -> list[str]:
    """Join "--filter -transition=..." into one token: exclude filters
    begin with "-", which argparse would otherwise read as an option."""
    out = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token == "--filter" and i + 1 < len(argv):
            out.append(f"--filter={argv[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_merge_filter_values(list(argv)))
    try:
        return _COMMANDS[args.command](args)
    except InvalidFilter as exc:
        print(f"error: invalid filter: {exc}", file=sys.stderr)
        return EXIT_FILTER
    except (CheckpointNotFound, UnreplayableRecord) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except (AuditError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FILE


if __name__ == "__main__":
    sys.exit(main())
