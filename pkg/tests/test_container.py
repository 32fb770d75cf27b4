from __future__ import annotations

import zipfile

import pytest

from conftest import unchanged
from sheetaudit.container import (
    file_digest,
    local,
    normalized,
    open_container,
    read_part,
)
from sheetaudit.errors import (
    EncryptedContainer,
    MalformedXml,
    MissingContentPart,
    NotAZipArchive,
    UnknownPart,
)


def test_manifest_of_fixture(fixture_path):
    manifest = open_container(fixture_path)
    assert manifest.content_part == "content.xml"
    assert "content.xml" in manifest.part_names
    assert manifest.settings_part == "settings.xml"
    assert manifest.source_digest == file_digest(fixture_path)


def test_empty_file_is_not_an_archive(tmp_path):
    target = tmp_path / "empty.ods"
    target.write_bytes(b"")
    with pytest.raises(NotAZipArchive):
        open_container(target)


def test_text_file_is_not_an_archive(tmp_path):
    target = tmp_path / "plain.ods"
    target.write_text("just text")
    with pytest.raises(NotAZipArchive):
        open_container(target)


def test_missing_content_part(tmp_path):
    target = tmp_path / "hollow.ods"
    with zipfile.ZipFile(target, "w") as zf:
        zf.writestr("mimetype", "application/something")
    with pytest.raises(MissingContentPart):
        open_container(target)


def test_unknown_part(fixture_path):
    manifest = open_container(fixture_path)
    with pytest.raises(UnknownPart):
        read_part(manifest, "styles.xml")


def test_content_root_local_name(fixture_path):
    tree = read_part(open_container(fixture_path), "content.xml")
    assert local(tree.tag) == "document-content"


def test_truncated_xml_reports_offset(tmp_path):
    target = tmp_path / "broken.ods"
    with zipfile.ZipFile(target, "w") as zf:
        zf.writestr("content.xml", "<office:document-content xmlns:office='u'><tabl")
    with pytest.raises(MalformedXml) as info:
        read_part(open_container(target), "content.xml")
    assert info.value.offset >= 0


def test_encrypted_entry_rejected(fixture_path, tmp_path):
    target = tmp_path / "locked.ods"
    data = bytearray(fixture_path.read_bytes())
    # set the encryption bit in the first central-directory entry
    index = data.find(b"PK\x01\x02")
    assert index != -1
    data[index + 8] |= 0x1
    target.write_bytes(bytes(data))
    with pytest.raises(EncryptedContainer):
        open_container(target)


def test_namespace_twins_normalize_identically(data_dir):
    ods = read_part(open_container(data_dir / "fixture.ods"), "content.xml")
    sxc = read_part(open_container(data_dir / "fixture.sxc"), "content.xml")
    assert ods.tag != sxc.tag  # different URI families on the wire
    assert normalized(ods) == normalized(sxc)


def test_read_part_is_deterministic(fixture_path):
    manifest = open_container(fixture_path)
    first = read_part(manifest, "content.xml")
    second = read_part(manifest, "content.xml")
    assert normalized(first) == normalized(second)


def test_reading_never_modifies_the_file(fixture_path):
    with unchanged(fixture_path):
        manifest = open_container(fixture_path)
        read_part(manifest, "content.xml")
        read_part(manifest, "settings.xml")
