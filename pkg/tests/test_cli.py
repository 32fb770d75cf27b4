from __future__ import annotations

import csv
import io
import json

from conftest import run_cli, unchanged


def test_changes_lists_all_records(fixture_path):
    with unchanged(fixture_path):
        result = run_cli("changes", str(fixture_path))
    assert result.code == 0
    body = [l for l in result.out.splitlines()[2:] if l]
    assert len(body) == 23


def test_changes_with_filters(fixture_path):
    with unchanged(fixture_path):
        result = run_cli("changes", str(fixture_path), "--filter", "+kind=row-insert")
        assert result.code == 0
        assert result.out.count("1 row at row 17") == 1
        assert len(result.out.splitlines()) == 3

        result = run_cli(
            "changes", str(fixture_path), "--filter", "-transition=empty->any",
            "--format", "ndjson",
        )
        assert result.code == 0
        assert len(result.out.splitlines()) == 15


def test_changes_scenario_flags(fixture_path):
    result = run_cli(
        "changes", str(fixture_path),
        "--filter", "+author=J* Doe,ci",
        "--filter", "+date=2001-12-24..2002-01-01",
        "--filter", "-transition=empty->any",
        "--format", "ndjson",
    )
    assert result.code == 0
    assert result.out == ""  # the sample has no J* Doe in that window; empty is not an error


def test_empty_result_is_exit_zero(fixture_path):
    result = run_cli("changes", str(fixture_path), "--filter", "+author=Nobody")
    assert result.code == 0


def test_invalid_filter_exit_code(fixture_path):
    result = run_cli("changes", str(fixture_path), "--filter", "+bogus=1")
    assert result.code == 3
    assert "invalid filter" in result.err


def test_missing_file_exit_code(tmp_path):
    result = run_cli("changes", str(tmp_path / "missing.ods"))
    assert result.code == 2
    result = run_cli("changes", str(tmp_path))  # a directory is a file error too
    assert result.code == 2


def test_scan_constant(data_dir):
    with unchanged(data_dir / "constant.ods"):
        result = run_cli("scan", str(data_dir / "constant.ods"))
    assert result.code == 0
    assert "SA1-constant-equation" in result.out
    assert "constant formula evaluates to 6" in result.out


def test_scan_at_checkpoint(fixture_path):
    with unchanged(fixture_path):
        result = run_cli("scan", str(fixture_path), "--at", "2003-03-28T21:55:00")
    assert result.code == 0
    assert "SA4-range-boundary" in result.out
    assert "N18" in result.out
    now = run_cli("scan", str(fixture_path))
    assert "SA4-range-boundary" not in now.out


def test_scan_no_history_checkpoint_is_exit_4(data_dir):
    result = run_cli("scan", str(data_dir / "nohistory.ods"), "--at", "2003-03-28T21:55:00")
    assert result.code == 4
    result = run_cli("scan", str(data_dir / "nohistory.ods"))
    assert result.code == 0


def test_unknown_checkpoint_is_exit_4(fixture_path):
    result = run_cli("scan", str(fixture_path), "--at", "ct999")
    assert result.code == 4


def test_scan_with_config(fixture_path, tmp_path):
    cfg = tmp_path / "strict.cfg"
    cfg.write_text("require_protection = true\n", encoding="utf-8")
    result = run_cli("scan", str(fixture_path), "--config", str(cfg))
    assert result.code == 0
    assert "SA8-protection-hole" in result.out
    bad = tmp_path / "broken.cfg"
    bad.write_text("nope = 1\n", encoding="utf-8")
    assert run_cli("scan", str(fixture_path), "--config", str(bad)).code == 2


def test_summary_command(fixture_path):
    with unchanged(fixture_path):
        result = run_cli("summary", str(fixture_path))
    assert result.code == 0
    assert result.out.splitlines()[0] == "23 Change Records between: 2003-03-28 and 2003-03-28"
    nd = run_cli("summary", str(fixture_path), "--format", "ndjson")
    assert json.loads(nd.out)["total"] == 23


def test_verify_command(fixture_path, data_dir):
    with unchanged(fixture_path):
        result = run_cli("verify", str(fixture_path))
    assert result.code == 0
    assert "change recording: enabled" in result.out
    assert "source digest: sha256:" in result.out
    result = run_cli("verify", str(data_dir / "nohistory.ods"))
    assert result.code == 5
    assert "no-history-found" in result.out


def test_reconstruct_writes_csv(fixture_path, tmp_path):
    out = tmp_path / "snapshot"
    with unchanged(fixture_path):
        result = run_cli(
            "reconstruct", str(fixture_path), "--at", "2003-03-28T21:55:00",
            "--out", str(out),
        )
    assert result.code == 0
    target = out / "Cash Flow.csv"
    rows = list(csv.reader(io.StringIO(target.read_text(encoding="utf-8"))))
    assert rows[16][0] == "Travel"
    assert rows[17][4] == "=SUM(E11:E16)"
    # full reconstruction (no --at) equals the stored document
    result = run_cli("reconstruct", str(fixture_path), "--out", str(tmp_path / "now"))
    assert result.code == 0
    now_rows = list(
        csv.reader(io.StringIO((tmp_path / "now" / "Cash Flow.csv").read_text("utf-8")))
    )
    assert now_rows[17][4] == "=SUM(E11:E17)"


def test_export_changes_cli(fixture_path, tmp_path):
    out = tmp_path / "changes.ndjson"
    with unchanged(fixture_path):
        result = run_cli("export-changes", str(fixture_path), "--out", str(out))
    assert result.code == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 23


def test_every_command_leaves_input_untouched(fixture_path, tmp_path):
    commands = [
        ("changes", str(fixture_path)),
        ("changes", str(fixture_path), "--filter", "-transition=empty->any"),
        ("scan", str(fixture_path)),
        ("scan", str(fixture_path), "--at", "2003-03-28T21:55:00"),
        ("summary", str(fixture_path)),
        ("verify", str(fixture_path)),
        ("reconstruct", str(fixture_path), "--out", str(tmp_path / "r")),
        ("export-changes", str(fixture_path), "--out", str(tmp_path / "c.ndjson")),
    ]
    for argv in commands:
        with unchanged(fixture_path):
            assert run_cli(*argv).code == 0
