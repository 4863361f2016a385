"""Template descriptors and tabular documents.

A template is a (descriptor.json, table.csv) pair: the descriptor fixes column
names and validation ranges, the CSV holds the populated cells. Descriptors use
a strict schema; unknown fields are rejected with their path.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from .model import PrefixMap, is_valid_iri
from .sources import OntologySource, SourceFormat

DESCRIPTOR_VERSION = "1"


class DescriptorError(Exception):
    """Schema violation; message carries the offending field path."""


class CsvError(Exception):
    pass


class CellSplitError(Exception):
    pass


class RangeKind(Enum):
    ALL_SUBCLASSES = "AllSubClasses"
    DIRECT_SUBCLASSES = "DirectSubClasses"
    ALL_INDIVIDUALS = "AllIndividuals"
    DIRECT_INDIVIDUALS = "DirectIndividuals"
    FREE_TEXT = "FreeText"

    def is_subclass_kind(self) -> bool:
        return self in (RangeKind.ALL_SUBCLASSES, RangeKind.DIRECT_SUBCLASSES)


@dataclass(frozen=True)
class RangeSpec:
    kind: RangeKind
    ontology_id: Optional[str] = None
    root: Optional[str] = None
    follow_properties: frozenset[str] = frozenset()
    include_root: bool = False

    def __post_init__(self) -> None:
        if self.kind is RangeKind.FREE_TEXT:
            if self.ontology_id is not None or self.root is not None:
                raise DescriptorError("FreeText ranges take no ontologyId or root")
        else:
            if not self.ontology_id or not self.root:
                raise DescriptorError(f"{self.kind.value} range needs ontologyId and root")
        if self.follow_properties and not self.kind.is_subclass_kind():
            raise DescriptorError("followProperties only applies to subclass ranges")


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    range: RangeSpec
    multi_valued: bool = False
    delimiter: str = ","
    mint_unknown: bool = False
    relationship_note: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            raise DescriptorError("column name must be non-empty")
        if len(self.delimiter) != 1:
            raise DescriptorError(f"column {self.name!r}: delimiter must be a single character")
        if self.delimiter == '"':
            raise DescriptorError(f"column {self.name!r}: delimiter cannot be the quote character")


@dataclass(frozen=True)
class TemplateDescriptor:
    columns: tuple[ColumnSpec, ...]
    prefixes: PrefixMap
    ontology_sources: tuple[OntologySource, ...]
    version: str = DESCRIPTOR_VERSION

    def column(self, name: str) -> Optional[ColumnSpec]:
        for col in self.columns:
            if col.name == name:
                return col
        return None

    def column_names(self) -> list[str]:
        return [c.name for c in self.columns]


def _expect_keys(obj: dict, allowed: set[str], required: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise DescriptorError(f"{path}: unknown field {key!r}")
    for key in required:
        if key not in obj:
            raise DescriptorError(f"{path}: missing field {key!r}")


def _expect_type(value: Any, types: tuple[type, ...], path: str, what: str) -> Any:
    if not isinstance(value, types) or isinstance(value, bool) and bool not in types:
        raise DescriptorError(f"{path}: expected {what}")
    return value


def _expand_term_ref(text: str, prefixes: PrefixMap, path: str) -> str:
    """Descriptor term references are full IRIs or prefixed names."""
    if not isinstance(text, str) or not text:
        raise DescriptorError(f"{path}: expected an IRI or prefixed name")
    if ":" in text:
        expanded = prefixes.expand(text)
        if expanded is not None and "://" not in text:
            return expanded
    if is_valid_iri(text) and "://" in text:
        return text
    raise DescriptorError(f"{path}: cannot resolve {text!r} (unknown prefix?)")


def _parse_range(obj: Any, prefixes: PrefixMap, source_ids: set[str], path: str) -> RangeSpec:
    _expect_type(obj, (dict,), path, "an object")
    _expect_keys(
        obj,
        {"kind", "ontologyId", "root", "followProperties", "includeRoot"},
        {"kind"},
        path,
    )
    kind_text = _expect_type(obj["kind"], (str,), f"{path}.kind", "a string")
    try:
        kind = RangeKind(kind_text)
    except ValueError:
        raise DescriptorError(f"{path}.kind: unknown range kind {kind_text!r}") from None
    if kind is RangeKind.FREE_TEXT:
        for key in ("ontologyId", "root", "followProperties", "includeRoot"):
            if key in obj:
                raise DescriptorError(f"{path}.{key}: not allowed for FreeText ranges")
        return RangeSpec(kind)
    _expect_keys(
        obj,
        {"kind", "ontologyId", "root", "followProperties", "includeRoot"},
        {"ontologyId", "root"},
        path,
    )
    ontology_id = _expect_type(obj["ontologyId"], (str,), f"{path}.ontologyId", "a string")
    if ontology_id not in source_ids:
        raise DescriptorError(f"{path}.ontologyId: {ontology_id!r} is not a listed ontology source")
    root = _expand_term_ref(obj["root"], prefixes, f"{path}.root")
    follow: list[str] = []
    if "followProperties" in obj:
        raw = _expect_type(obj["followProperties"], (list,), f"{path}.followProperties", "a list")
        follow = [
            _expand_term_ref(item, prefixes, f"{path}.followProperties[{i}]")
            for i, item in enumerate(raw)
        ]
    include_root = False
    if "includeRoot" in obj:
        include_root = _expect_type(obj["includeRoot"], (bool,), f"{path}.includeRoot", "a boolean")
    return RangeSpec(kind, ontology_id, root, frozenset(follow), include_root)


def parse_descriptor(document: str) -> TemplateDescriptor:
    """Parse and validate a descriptor JSON document (strict schema)."""
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"descriptor is not valid JSON: {exc}") from None
    _expect_type(data, (dict,), "descriptor", "an object")
    _expect_keys(
        data,
        {"version", "prefixes", "ontologySources", "columns"},
        {"version", "columns", "ontologySources"},
        "descriptor",
    )
    version = _expect_type(data["version"], (str,), "descriptor.version", "a string")
    if version != DESCRIPTOR_VERSION:
        raise DescriptorError(f"descriptor.version: unsupported version {version!r}")

    prefixes = PrefixMap()
    if "prefixes" in data:
        raw_prefixes = _expect_type(data["prefixes"], (dict,), "descriptor.prefixes", "an object")
        for name, ns in raw_prefixes.items():
            ns = _expect_type(ns, (str,), f"descriptor.prefixes.{name}", "a string")
            try:
                prefixes.add(name, ns)
            except Exception as exc:
                raise DescriptorError(f"descriptor.prefixes.{name}: {exc}") from None

    raw_sources = _expect_type(
        data["ontologySources"], (list,), "descriptor.ontologySources", "a list"
    )
    sources: list[OntologySource] = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(raw_sources):
        path = f"descriptor.ontologySources[{i}]"
        _expect_type(raw, (dict,), path, "an object")
        _expect_keys(raw, {"id", "origin", "format"}, {"id", "origin"}, path)
        source_id = _expect_type(raw["id"], (str,), f"{path}.id", "a string")
        if not source_id:
            raise DescriptorError(f"{path}.id: must be non-empty")
        if source_id in seen_ids:
            raise DescriptorError(f"{path}.id: duplicate ontology id {source_id!r}")
        seen_ids.add(source_id)
        origin = _expect_type(raw["origin"], (str,), f"{path}.origin", "a string")
        fmt = SourceFormat.AUTO
        if "format" in raw:
            fmt_text = _expect_type(raw["format"], (str,), f"{path}.format", "a string")
            try:
                fmt = SourceFormat(fmt_text)
            except ValueError:
                raise DescriptorError(f"{path}.format: unknown format {fmt_text!r}") from None
        sources.append(OntologySource(source_id, origin, fmt))

    raw_columns = _expect_type(data["columns"], (list,), "descriptor.columns", "a list")
    if not raw_columns:
        raise DescriptorError("descriptor.columns: at least one column is required")
    columns: list[ColumnSpec] = []
    seen_names: set[str] = set()
    for i, raw in enumerate(raw_columns):
        path = f"descriptor.columns[{i}]"
        _expect_type(raw, (dict,), path, "an object")
        _expect_keys(
            raw,
            {"name", "range", "multiValued", "delimiter", "mintUnknown", "relationshipNote"},
            {"name", "range"},
            path,
        )
        name = _expect_type(raw["name"], (str,), f"{path}.name", "a string")
        if name in seen_names:
            raise DescriptorError(f"{path}.name: duplicate column name {name!r}")
        seen_names.add(name)
        spec_range = _parse_range(raw["range"], prefixes, seen_ids, f"{path}.range")
        kwargs: dict[str, Any] = {}
        if "multiValued" in raw:
            kwargs["multi_valued"] = _expect_type(
                raw["multiValued"], (bool,), f"{path}.multiValued", "a boolean"
            )
        if "delimiter" in raw:
            kwargs["delimiter"] = _expect_type(
                raw["delimiter"], (str,), f"{path}.delimiter", "a string"
            )
        if "mintUnknown" in raw:
            kwargs["mint_unknown"] = _expect_type(
                raw["mintUnknown"], (bool,), f"{path}.mintUnknown", "a boolean"
            )
        if "relationshipNote" in raw:
            kwargs["relationship_note"] = _expect_type(
                raw["relationshipNote"], (str,), f"{path}.relationshipNote", "a string"
            )
        try:
            columns.append(ColumnSpec(name, spec_range, **kwargs))
        except DescriptorError as exc:
            raise DescriptorError(f"{path}: {exc}") from None
    return TemplateDescriptor(tuple(columns), prefixes, tuple(sources), version)


def descriptor_to_dict(descriptor: TemplateDescriptor) -> dict[str, Any]:
    """Inverse of parse_descriptor, for persistence and the service API."""
    columns = []
    for col in descriptor.columns:
        r: dict[str, Any] = {"kind": col.range.kind.value}
        if col.range.kind is not RangeKind.FREE_TEXT:
            r["ontologyId"] = col.range.ontology_id
            r["root"] = col.range.root
            if col.range.follow_properties:
                r["followProperties"] = sorted(col.range.follow_properties)
            if col.range.include_root:
                r["includeRoot"] = True
        entry: dict[str, Any] = {"name": col.name, "range": r}
        if col.multi_valued:
            entry["multiValued"] = True
        if col.delimiter != ",":
            entry["delimiter"] = col.delimiter
        if col.mint_unknown:
            entry["mintUnknown"] = True
        if col.relationship_note:
            entry["relationshipNote"] = col.relationship_note
        columns.append(entry)
    return {
        "version": descriptor.version,
        "prefixes": descriptor.prefixes.entries(),
        "ontologySources": [
            {"id": s.id, "origin": s.origin, "format": s.format.value}
            for s in descriptor.ontology_sources
        ],
        "columns": columns,
    }


def load_descriptor(path: Path) -> TemplateDescriptor:
    return parse_descriptor(Path(path).read_text(encoding="utf-8"))


# -- tabular documents ---------------------------------------------------------


@dataclass
class TableDoc:
    header: list[str]
    rows: list[list[str]]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    @property
    def col_count(self) -> int:
        return len(self.header)

    def column_index(self, name: str) -> int:
        try:
            return self.header.index(name)
        except ValueError:
            raise CsvError(f"no column named {name!r}") from None

    def cell(self, row: int, column: str) -> str:
        return self.rows[row][self.column_index(column)]

    def set_cell(self, row: int, column: str, text: str) -> None:
        self.rows[row][self.column_index(column)] = text


def _has_unterminated_quote(text: str) -> bool:
    in_quotes = False
    at_field_start = True
    i = 0
    while i < len(text):
        ch = text[i]
        if in_quotes:
            if ch == '"':
                if i + 1 < len(text) and text[i + 1] == '"':
                    i += 2
                    continue
                in_quotes = False
            i += 1
            continue
        if ch == '"' and at_field_start:
            in_quotes = True
            at_field_start = False
        else:
            at_field_start = ch in ',\r\n'
        i += 1
    return in_quotes


def load_csv(document: str, descriptor: TemplateDescriptor) -> TableDoc:
    """First record is the header; names must match the descriptor's columns
    exactly (any order). Short rows are padded; trailing all-empty rows drop."""
    if document.startswith("﻿"):
        document = document[1:]
    if _has_unterminated_quote(document):
        raise CsvError("unterminated quote in CSV document")
    try:
        records = list(csv.reader(io.StringIO(document, newline="")))
    except csv.Error as exc:
        raise CsvError(f"malformed CSV: {exc}") from None
    if not records:
        raise CsvError("CSV document has no header row")
    header = [name.strip() for name in records[0]]
    expected = set(descriptor.column_names())
    got = set(header)
    if len(header) != len(got):
        raise CsvError("CSV header repeats a column name")
    extra = sorted(got - expected)
    missing = sorted(expected - got)
    if extra:
        raise CsvError(f"CSV has columns not in the descriptor: {', '.join(extra)}")
    if missing:
        raise CsvError(f"CSV is missing descriptor columns: {', '.join(missing)}")
    width = len(header)
    rows = []
    for record in records[1:]:
        if len(record) > width:
            raise CsvError(f"row {len(rows) + 1} has {len(record)} fields, expected {width}")
        rows.append(list(record) + [""] * (width - len(record)))
    while rows and all(cell.strip() == "" for cell in rows[-1]):
        rows.pop()
    return TableDoc(header, rows)


def render_csv(table: TableDoc) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(table.header)
    writer.writerows(table.rows)
    return out.getvalue()


def split_multi_value(cell_text: str, spec: ColumnSpec) -> list[str]:
    """Cell text into its ordered values.

    Single-valued columns give the whole trimmed text (or nothing when blank).
    Multi-valued columns split on the column delimiter outside double-quoted
    segments; the quotes themselves are protection markers and are dropped.
    """
    if not spec.multi_valued:
        trimmed = cell_text.strip()
        return [trimmed] if trimmed else []
    values: list[str] = []
    current: list[str] = []
    in_quotes = False
    for ch in cell_text:
        if ch == '"':
            in_quotes = not in_quotes
            continue
        if ch == spec.delimiter and not in_quotes:
            values.append("".join(current))
            current = []
            continue
        current.append(ch)
    if in_quotes:
        raise CellSplitError(f"unterminated quote in cell {cell_text!r}")
    values.append("".join(current))
    return [v.strip() for v in values if v.strip()]
