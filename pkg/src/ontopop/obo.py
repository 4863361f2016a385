"""OBO 1.2 flat-file parser (subset): [Term] and [Typedef] stanzas into an OntologyGraph.

Total on arbitrary text: always returns a graph plus diagnostics, never raises.
An error diagnostic means the parse is unreliable; warnings are informational.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    KindConflictError,
    OntologyError,
    OntologyGraph,
    PrefixMap,
    Term,
    TermKind,
    is_valid_iri,
)

OBO_PURL_BASE = "http://purl.obolibrary.org/obo/"

_OBO_ID = re.compile(r"^([A-Za-z_][A-Za-z0-9_.-]*):(\S+)$")


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    severity: str  # "warning" | "error"
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.severity}: {self.message}"


def expand_obo_id(raw: str) -> str | None:
    """CL:0000113 -> http://purl.obolibrary.org/obo/CL_0000113; full IRIs pass through."""
    raw = raw.strip()
    if not raw:
        return None
    if "://" in raw:
        return raw if is_valid_iri(raw) else None
    m = _OBO_ID.match(raw)
    if m:
        return f"{OBO_PURL_BASE}{m.group(1)}_{m.group(2)}"
    # bare names like part_of map into the PURL namespace
    if re.match(r"^[A-Za-z_][A-Za-z0-9_.-]*$", raw):
        return OBO_PURL_BASE + raw
    return None


_HEADER_TAGS = {"format-version", "ontology"}
_TERM_TAGS = {"id", "name", "is_a", "relationship", "is_obsolete"}
_TYPEDEF_TAGS = {"id", "name"}


def _strip_comment(value: str) -> str:
    # trailing "! human readable comment" per the OBO convention
    return value.split("!", 1)[0].strip()


def parse_obo(text: str, graph_id: str = "") -> tuple[OntologyGraph, list[ParseDiagnostic]]:
    diagnostics: list[ParseDiagnostic] = []

    def warn(line: int, msg: str) -> None:
        diagnostics.append(ParseDiagnostic(line, "warning", msg))

    def err(line: int, msg: str) -> None:
        diagnostics.append(ParseDiagnostic(line, "error", msg))

    if text.startswith("﻿"):
        text = text[1:]

    # first pass: stanza dictionaries with line numbers
    stanzas: list[tuple[str, int, list[tuple[int, str, str]]]] = []
    current: list[tuple[int, str, str]] | None = None
    stanza_kind = ""
    header_id = graph_id
    in_header = True
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("!"):
            continue
        if line.startswith("[") and line.endswith("]"):
            stanza_kind = line[1:-1].strip()
            current = []
            stanzas.append((stanza_kind, lineno, current))
            in_header = False
            if stanza_kind not in ("Term", "Typedef"):
                warn(lineno, f"unknown stanza [{stanza_kind}] skipped")
            continue
        if ":" not in line:
            warn(lineno, f"unparseable line skipped: {line!r}")
            continue
        tag, value = line.split(":", 1)
        tag = tag.strip()
        value = value.strip()
        if in_header:
            if tag == "ontology":
                header_id = value
            elif tag not in _HEADER_TAGS:
                warn(lineno, f"unknown header tag {tag!r} ignored")
            continue
        assert current is not None
        current.append((lineno, tag, value))

    graph = OntologyGraph(header_id, PrefixMap({"obo": OBO_PURL_BASE}))

    def declare(iri: str, kind: TermKind, label: str | None, obsolete: bool, line: int) -> bool:
        try:
            graph.add_term(Term(iri, kind, label=label, source_ontology=header_id, obsolete=obsolete))
            return True
        except KindConflictError as exc:
            err(line, str(exc))
            return False

    # second pass: declarations, deferring edges so forward references work
    pending_isa: list[tuple[int, str, str]] = []
    pending_rel: list[tuple[int, str, str, str]] = []
    for kind_name, stanza_line, tags in stanzas:
        if kind_name not in ("Term", "Typedef"):
            continue
        known_tags = _TERM_TAGS if kind_name == "Term" else _TYPEDEF_TAGS
        stanza_id: str | None = None
        name: str | None = None
        obsolete = False
        entries: list[tuple[int, str, str]] = []
        for lineno, tag, value in tags:
            if tag == "id":
                stanza_id = value
            elif tag == "name":
                name = value
            elif tag == "is_obsolete":
                obsolete = _strip_comment(value).lower() == "true"
            elif tag in known_tags:
                entries.append((lineno, tag, value))
            else:
                warn(lineno, f"unknown tag {tag!r} ignored")
        if stanza_id is None:
            err(stanza_line, f"[{kind_name}] stanza has no id")
            continue
        iri = expand_obo_id(stanza_id)
        if iri is None:
            err(stanza_line, f"malformed id {stanza_id!r}")
            continue
        kind = TermKind.CLASS if kind_name == "Term" else TermKind.OBJECT_PROPERTY
        if not declare(iri, kind, name, obsolete, stanza_line):
            continue
        for lineno, tag, value in entries:
            if tag == "is_a":
                target = expand_obo_id(_strip_comment(value))
                if target is None:
                    warn(lineno, f"malformed is_a target {value!r} skipped")
                else:
                    pending_isa.append((lineno, iri, target))
            elif tag == "relationship":
                parts = _strip_comment(value).split()
                if len(parts) != 2:
                    warn(lineno, f"malformed relationship {value!r} skipped")
                    continue
                prop = expand_obo_id(parts[0])
                target = expand_obo_id(parts[1])
                if prop is None or target is None:
                    warn(lineno, f"malformed relationship {value!r} skipped")
                else:
                    pending_rel.append((lineno, iri, prop, target))

    # third pass: edges, auto-declaring unresolved references
    def ensure(iri: str, kind: TermKind, line: int, what: str) -> bool:
        if graph.term(iri) is None:
            warn(line, f"{what} {iri} not declared in this document; declared as bare {kind.value}")
            return declare(iri, kind, None, False, line)
        return True

    for lineno, child, parent in pending_isa:
        if child == parent:
            warn(lineno, f"is_a self-loop on {child} skipped")
            continue
        if not ensure(parent, TermKind.CLASS, lineno, "is_a target"):
            continue
        try:
            graph.add_subclass_edge(child, parent)
        except OntologyError as exc:
            err(lineno, str(exc))
    for lineno, subj, prop, target in pending_rel:
        if not ensure(prop, TermKind.OBJECT_PROPERTY, lineno, "relationship type"):
            continue
        if not ensure(target, TermKind.CLASS, lineno, "relationship target"):
            continue
        try:
            graph.add_property_edge(subj, prop, target)
        except OntologyError as exc:
            err(lineno, str(exc))

    return graph.freeze(), diagnostics


def has_errors(diagnostics: list[ParseDiagnostic]) -> bool:
    return any(d.severity == "error" for d in diagnostics)
