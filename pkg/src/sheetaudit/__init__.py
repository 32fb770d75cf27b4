"""sheetaudit: read-only audit toolkit for spreadsheets with tracked changes.

Load a file, list and filter its change records, run static checks, and
rebuild the document at any checkpoint. The audited file is only ever
opened for reading.
"""

from __future__ import annotations

from pathlib import Path

from .container import ContainerManifest, file_digest, open_container, read_part
from .model import ChangeRecord, Workbook, build_workbook, render_change_detail
from .filters import FilterSpec, Summary, apply_filters, parse_filter, parse_filters, summarize
from .checks import CheckConfig, Finding, load_config, scan
from .rebuild import (
    Checkpoint,
    GridSnapshot,
    export_changes_file,
    import_changes_file,
    parse_checkpoint,
    replay_records,
    replay_to,
    revert_all,
)
from .formulas import (
    FormulaAst,
    classify_content,
    extract_references,
    fold_constant,
    parse_formula,
    print_canonical,
    relative_shape,
)
from .wildcards import match_wildcard

__version__ = "0.1.0"

__all__ = [
    "load_workbook",
    "open_container",
    "read_part",
    "file_digest",
    "ContainerManifest",
    "Workbook",
    "ChangeRecord",
    "build_workbook",
    "render_change_detail",
    "FilterSpec",
    "Summary",
    "apply_filters",
    "parse_filter",
    "parse_filters",
    "summarize",
    "CheckConfig",
    "Finding",
    "load_config",
    "scan",
    "Checkpoint",
    "GridSnapshot",
    "parse_checkpoint",
    "revert_all",
    "replay_to",
    "replay_records",
    "export_changes_file",
    "import_changes_file",
    "FormulaAst",
    "parse_formula",
    "print_canonical",
    "extract_references",
    "classify_content",
    "fold_constant",
    "relative_shape",
    "match_wildcard",
]


def load_workbook(path: Path | str) -> Workbook:
    """Open a spreadsheet container and build its workbook."""
    manifest = open_container(path)
    content = read_part(manifest, manifest.content_part)
    settings = None
    if manifest.settings_part is not None:
        settings = read_part(manifest, manifest.settings_part)
    return build_workbook(content, settings, manifest)
