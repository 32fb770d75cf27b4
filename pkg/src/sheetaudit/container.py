"""Read-only access to the spreadsheet container (a ZIP of XML parts).

Both namespace families are accepted: the OpenOffice-1.0 one used by .sxc
files and the ODF 1.x one used by .ods. Downstream code matches elements
and attributes by local name, so the two families normalize to the same
vocabulary.
"""

from __future__ import annotations

import hashlib
import xml.etree.ElementTree as ET
import xml.parsers.expat
import zipfile
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    EncryptedContainer,
    MalformedXml,
    MissingContentPart,
    NotAZipArchive,
    UnknownPart,
    UnreadableEntry,
)

CONTENT_PART = "content.xml"
SETTINGS_PART = "settings.xml"


@dataclass(frozen=True)
class ContainerManifest:
    """What the archive contains, plus a digest of the input bytes."""

    path: Path
    part_names: tuple[str, ...]
    content_part: str
    settings_part: str | None
    source_digest: str


def file_digest(path: Path | str) -> str:
    """SHA-256 of a file's bytes, hex encoded."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def open_container(path: Path | str) -> ContainerManifest:
    """Open a spreadsheet container read-only and record its digest.

    The file is never modified and no temporary copy is written.
    """
    path = Path(path)
    digest = file_digest(path)
    if not zipfile.is_zipfile(path):
        raise NotAZipArchive(f"{path} is not a ZIP archive")
    with zipfile.ZipFile(path, "r") as zf:
        infos = zf.infolist()
        for info in infos:
            if info.flag_bits & 0x1:
                raise EncryptedContainer(f"{path} entry {info.filename} is encrypted")
        names = tuple(info.filename for info in infos)
    if CONTENT_PART not in names:
        raise MissingContentPart(f"{path} has no {CONTENT_PART} entry")
    return ContainerManifest(
        path=path,
        part_names=names,
        content_part=CONTENT_PART,
        settings_part=SETTINGS_PART if SETTINGS_PART in names else None,
        source_digest=digest,
    )


def read_part(manifest: ContainerManifest, part: str) -> ET.Element:
    """Parse one archive entry into an XML tree (namespace URIs kept)."""
    if part not in manifest.part_names:
        raise UnknownPart(f"{part} is not in the archive")
    try:
        with zipfile.ZipFile(manifest.path, "r") as zf:
            data = zf.read(part)
    except (zipfile.BadZipFile, OSError) as exc:
        raise UnreadableEntry(f"{part}: {exc}") from exc
    try:
        return ET.fromstring(data)
    except ET.ParseError as exc:
        raise MalformedXml(part, str(exc), _error_byte_offset(data)) from exc


def _error_byte_offset(data: bytes) -> int:
    parser = xml.parsers.expat.ParserCreate()
    try:
        parser.Parse(data, True)
    except xml.parsers.expat.ExpatError:
        return parser.ErrorByteIndex
    return -1


def local(tag: str) -> str:
    """Local name of a possibly namespace-qualified tag or attribute."""
    if tag.startswith("{"):
        return tag.rsplit("}", 1)[1]
    return tag


def attr(element: ET.Element, name: str, default: str | None = None) -> str | None:
    """Attribute lookup by local name, namespace-agnostic."""
    for key, value in element.attrib.items():
        if local(key) == name:
            return value
    return default


def children(element: ET.Element, name: str):
    """Direct children whose local name matches."""
    return [child for child in element if local(child.tag) == name]


def find(element: ET.Element, name: str) -> ET.Element | None:
    for child in element:
        if local(child.tag) == name:
            return child
    return None


def text_content(element: ET.Element) -> str:
    """All text beneath an element, concatenated."""
    return "".join(element.itertext())


def normalized(element: ET.Element):
    """Namespace-free comparable form: (localname, attrs, text, children).

    Two trees that differ only in their namespace URI family normalize to
    equal values.
    """
    attrs = {local(k): v for k, v in element.attrib.items()}
    text = (element.text or "").strip()
    return (
        local(element.tag),
        tuple(sorted(attrs.items())),
        text,
        tuple(normalized(child) for child in element),
    )
