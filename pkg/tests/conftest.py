from __future__ import annotations

import contextlib
import io
from dataclasses import dataclass
from pathlib import Path

import pytest

from sheetaudit import load_workbook
from sheetaudit.container import file_digest
from sheetaudit.sample import write_constant, write_fixture, write_no_history


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("fixtures")
    write_fixture(root / "fixture.ods")
    write_fixture(root / "fixture.sxc", namespace="openoffice1")
    write_no_history(root / "nohistory.ods")
    write_constant(root / "constant.ods")
    return root


@pytest.fixture(scope="session")
def fixture_path(data_dir) -> Path:
    return data_dir / "fixture.ods"


@pytest.fixture(scope="session")
def fixture_workbook(fixture_path):
    return load_workbook(fixture_path)


@pytest.fixture()
def workbook(fixture_path):
    """A freshly loaded workbook for tests that poke at its internals."""
    return load_workbook(fixture_path)


@contextlib.contextmanager
def unchanged(*paths: Path):
    """Assert the SHA-256 of every path is identical before and after."""
    before = {p: file_digest(p) for p in paths}
    yield
    for p, digest in before.items():
        assert file_digest(p) == digest, f"{p} was modified"


@dataclass
class CliResult:
    code: int
    out: str
    err: str


def run_cli(*argv: str) -> CliResult:
    from sheetaudit.cli import main

    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return CliResult(code, out.getvalue(), err.getvalue())
