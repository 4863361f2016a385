"""OWL 2 functional-style syntax, the subset needed for graph round-trips.

Reading lowers axioms onto the graph model: SubClassOf with a named superclass
becomes a subclass edge, an existential restriction becomes a property edge,
intersections contribute one edge per conjunct. EquivalentClasses axioms are
syntax-checked but contribute no edges (equivalence plays no part in range
materialization). Parsing is total: any failure is reported as an error
diagnostic, never an exception.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .generated import GeneratedOntology
from .model import (
    KindConflictError,
    OntologyError,
    OntologyGraph,
    PrefixMap,
    Term,
    TermKind,
)
from .obo import ParseDiagnostic
from .pattern import AxiomKind, ClassExpr, Intersection, NamedRef, SomeRestriction

RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"


class _FsError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(message)
        self.line = line
        self.message = message


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<lparen>\() | (?P<rparen>\))
  | (?P<eq>=)
  | (?P<iriref><[^<>\s]*>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<pname>(?:[A-Za-z_][A-Za-z0-9_.-]*)?:(?:[A-Za-z0-9_][A-Za-z0-9_.-]*)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.-]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int


def _tokenize(text: str) -> list[_Tok]:
    if text.startswith("﻿"):
        text = text[1:]
    tokens: list[_Tok] = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise _FsError(line, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup or ""
        value = m.group(0)
        line += value.count("\n")
        pos = m.end()
        if kind in ("ws", "comment"):
            continue
        tokens.append(_Tok(kind, value, line))
    tokens.append(_Tok("eof", "", line))
    return tokens


_UNSUPPORTED = {
    "ObjectUnionOf",
    "ObjectComplementOf",
    "ObjectAllValuesFrom",
    "ObjectOneOf",
    "ObjectHasValue",
    "ObjectMinCardinality",
    "ObjectMaxCardinality",
    "ObjectExactCardinality",
    "DataSomeValuesFrom",
    "DisjointClasses",
    "ObjectPropertyAssertion",
    "SubObjectPropertyOf",
    "DataPropertyAssertion",
    "AnnotationPropertyAssertion",
}


class _FsParser:
    def __init__(self, tokens: list[_Tok]):
        self.toks = tokens
        self.pos = 0
        self.prefixes = PrefixMap()
        self.ontology_iri = ""
        self.declarations: list[tuple[int, str, TermKind]] = []
        self.labels: list[tuple[int, str, str]] = []
        self.subclass_axioms: list[tuple[int, str, ClassExpr]] = []
        self.class_assertions: list[tuple[int, str, str]] = []
        self.warnings: list[ParseDiagnostic] = []

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            if tok.kind == "eof":
                raise _FsError(tok.line, f"unexpected end of document, expected {what}")
            raise _FsError(tok.line, f"expected {what}, found {tok.text!r}")
        return self.next()

    def warn(self, line: int, message: str) -> None:
        self.warnings.append(ParseDiagnostic(line, "warning", message))

    def entity(self) -> tuple[int, str]:
        tok = self.peek()
        if tok.kind == "iriref":
            self.next()
            return tok.line, tok.text[1:-1]
        if tok.kind == "pname":
            self.next()
            iri = self.prefixes.expand(tok.text)
            if iri is None:
                raise _FsError(tok.line, f"undeclared prefix in {tok.text!r}")
            return tok.line, iri
        raise _FsError(tok.line, f"expected an IRI, found {tok.text or 'end of document'!r}")

    def parse_document(self) -> None:
        while self.peek().kind == "name" and self.peek().text == "Prefix":
            self.next()
            self.expect("lparen", "'('")
            pname = self.expect("pname", "prefix name")
            if not pname.text.endswith(":"):
                raise _FsError(pname.line, f"malformed prefix declaration {pname.text!r}")
            self.expect("eq", "'='")
            iriref = self.expect("iriref", "namespace IRI")
            try:
                self.prefixes.add(pname.text[:-1], iriref.text[1:-1])
            except OntologyError as exc:
                raise _FsError(pname.line, str(exc)) from None
            self.expect("rparen", "')'")
        head = self.peek()
        if not (head.kind == "name" and head.text == "Ontology"):
            raise _FsError(head.line, "expected Ontology(...)")
        self.next()
        self.expect("lparen", "'('")
        if self.peek().kind == "iriref":
            self.ontology_iri = self.next().text[1:-1]
        while self.peek().kind not in ("rparen", "eof"):
            self.parse_axiom()
        self.expect("rparen", "')' closing Ontology")
        self.expect("eof", "end of document")

    def parse_axiom(self) -> None:
        tok = self.expect("name", "an axiom")
        if tok.text in _UNSUPPORTED:
            raise _FsError(tok.line, f"unsupported construct {tok.text}")
        handler = {
            "Declaration": self.parse_declaration,
            "AnnotationAssertion": self.parse_annotation,
            "SubClassOf": self.parse_subclass,
            "EquivalentClasses": self.parse_equivalent,
            "ClassAssertion": self.parse_class_assertion,
        }.get(tok.text)
        if handler is None:
            raise _FsError(tok.line, f"unsupported construct {tok.text}")
        self.expect("lparen", "'('")
        handler(tok.line)
        self.expect("rparen", "')'")

    def parse_declaration(self, line: int) -> None:
        kind_tok = self.expect("name", "entity kind")
        kinds = {
            "Class": TermKind.CLASS,
            "ObjectProperty": TermKind.OBJECT_PROPERTY,
            "NamedIndividual": TermKind.NAMED_INDIVIDUAL,
        }
        kind = kinds.get(kind_tok.text)
        if kind is None:
            raise _FsError(kind_tok.line, f"unsupported construct {kind_tok.text}")
        self.expect("lparen", "'('")
        eline, iri = self.entity()
        self.expect("rparen", "')'")
        self.declarations.append((eline, iri, kind))

    def parse_annotation(self, line: int) -> None:
        prop_line, prop = self.entity()
        if prop != RDFS_LABEL:
            raise _FsError(prop_line, f"unsupported construct AnnotationAssertion({prop})")
        _, subject = self.entity()
        value = self.expect("string", "a quoted label")
        label = re.sub(r"\\(.)", r"\1", value.text[1:-1])
        self.labels.append((line, subject, label))

    def class_expr(self) -> ClassExpr:
        tok = self.peek()
        if tok.kind == "name" and tok.text == "ObjectSomeValuesFrom":
            self.next()
            self.expect("lparen", "'('")
            _, prop = self.entity()
            filler = self.class_expr()
            self.expect("rparen", "')'")
            return SomeRestriction(NamedRef(prop), filler)
        if tok.kind == "name" and tok.text == "ObjectIntersectionOf":
            self.next()
            self.expect("lparen", "'('")
            children = []
            while self.peek().kind not in ("rparen", "eof"):
                children.append(self.class_expr())
            self.expect("rparen", "')'")
            if len(children) < 2:
                raise _FsError(tok.line, "ObjectIntersectionOf needs at least two members")
            return Intersection(tuple(children))
        if tok.kind == "name":
            raise _FsError(tok.line, f"unsupported construct {tok.text}")
        _, iri = self.entity()
        return NamedRef(iri)

    def parse_subclass(self, line: int) -> None:
        sub = self.class_expr()
        if not isinstance(sub, NamedRef):
            raise _FsError(line, "SubClassOf subject must be a named class")
        sup = self.class_expr()
        self.subclass_axioms.append((line, sub.text, sup))

    def parse_equivalent(self, line: int) -> None:
        # checked for well-formedness only; equivalences carry no range semantics
        exprs = []
        while self.peek().kind not in ("rparen", "eof"):
            exprs.append(self.class_expr())
        if len(exprs) < 2:
            raise _FsError(line, "EquivalentClasses needs at least two expressions")

    def parse_class_assertion(self, line: int) -> None:
        cls = self.class_expr()
        if not isinstance(cls, NamedRef):
            raise _FsError(line, "ClassAssertion class must be named")
        _, individual = self.entity()
        self.class_assertions.append((line, cls.text, individual))


def parse_functional(text: str, graph_id: str = "") -> tuple[OntologyGraph, list[ParseDiagnostic]]:
    diagnostics: list[ParseDiagnostic] = []
    try:
        parser = _FsParser(_tokenize(text))
        parser.parse_document()
    except _FsError as exc:
        diagnostics.append(ParseDiagnostic(exc.line, "error", exc.message))
        return OntologyGraph(graph_id).freeze(), diagnostics
    except RecursionError:
        diagnostics.append(ParseDiagnostic(1, "error", "expression nesting too deep"))
        return OntologyGraph(graph_id).freeze(), diagnostics

    diagnostics.extend(parser.warnings)
    graph = OntologyGraph(parser.ontology_iri or graph_id, parser.prefixes)

    def declare(line: int, iri: str, kind: TermKind, label: Optional[str] = None) -> bool:
        try:
            graph.add_term(Term(iri, kind, label=label, source_ontology=graph.id))
            return True
        except KindConflictError as exc:
            diagnostics.append(ParseDiagnostic(line, "error", str(exc)))
            return False
        except OntologyError as exc:
            diagnostics.append(ParseDiagnostic(line, "error", str(exc)))
            return False

    for line, iri, kind in parser.declarations:
        declare(line, iri, kind)

    def ensure(line: int, iri: str, kind: TermKind) -> bool:
        if graph.term(iri) is None:
            diagnostics.append(
                ParseDiagnostic(line, "warning", f"{iri} used but never declared; assuming {kind.value}")
            )
            return declare(line, iri, kind)
        return True

    def add_edges(line: int, subject: str, expr: ClassExpr) -> None:
        if isinstance(expr, NamedRef):
            if expr.text == subject:
                diagnostics.append(
                    ParseDiagnostic(line, "warning", f"subclass self-loop on {subject} skipped")
                )
                return
            if ensure(line, expr.text, TermKind.CLASS):
                try:
                    graph.add_subclass_edge(subject, expr.text)
                except OntologyError as exc:
                    diagnostics.append(ParseDiagnostic(line, "error", str(exc)))
        elif isinstance(expr, SomeRestriction):
            if not isinstance(expr.filler, NamedRef):
                diagnostics.append(
                    ParseDiagnostic(
                        line, "warning", "existential filler is not a named class; no edge recorded"
                    )
                )
                return
            assert isinstance(expr.prop, NamedRef)
            if ensure(line, expr.prop.text, TermKind.OBJECT_PROPERTY) and ensure(
                line, expr.filler.text, TermKind.CLASS
            ):
                try:
                    graph.add_property_edge(subject, expr.prop.text, expr.filler.text)
                except OntologyError as exc:
                    diagnostics.append(ParseDiagnostic(line, "error", str(exc)))
        elif isinstance(expr, Intersection):
            for child in expr.children:
                add_edges(line, subject, child)

    for line, subject, label in parser.labels:
        if ensure(line, subject, TermKind.CLASS):
            graph.set_label(subject, label)
    for line, subject, sup in parser.subclass_axioms:
        if ensure(line, subject, TermKind.CLASS):
            add_edges(line, subject, sup)
    for line, cls, individual in parser.class_assertions:
        if ensure(line, cls, TermKind.CLASS) and ensure(line, individual, TermKind.NAMED_INDIVIDUAL):
            try:
                graph.add_instance_edge(individual, cls)
            except OntologyError as exc:
                diagnostics.append(ParseDiagnostic(line, "error", str(exc)))

    return graph.freeze(), diagnostics


# -- emission ------------------------------------------------------------------


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _fs_name(iri: str, prefixes: PrefixMap) -> str:
    compact = prefixes.compact(iri)
    if compact is not None:
        prefix, local = compact.split(":", 1)
        # only emit a compact name the tokenizer can read back
        if re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_.-]*", local):
            return compact
    return f"<{iri}>"


def _fs_expr(expr: ClassExpr, prefixes: PrefixMap) -> str:
    if isinstance(expr, NamedRef):
        return _fs_name(expr.text, prefixes)
    if isinstance(expr, SomeRestriction):
        assert isinstance(expr.prop, NamedRef)
        return (
            f"ObjectSomeValuesFrom({_fs_name(expr.prop.text, prefixes)} "
            f"{_fs_expr(expr.filler, prefixes)})"
        )
    if isinstance(expr, Intersection):
        inner = " ".join(_fs_expr(c, prefixes) for c in expr.children)
        return f"ObjectIntersectionOf({inner})"
    raise OntologyError(f"cannot emit {expr!r}")


def emit_functional(generated: GeneratedOntology) -> str:
    """Deterministic document: prefixes, declarations, labels, then axioms,
    each section alphabetically ordered. Reparses via parse_functional."""
    prefixes = PrefixMap(generated.prefixes.entries())
    if prefixes.namespace("rdfs") is None:
        prefixes.add("rdfs", RDFS_NS)
    lines = [f"Prefix({name}:=<{ns}>)" for name, ns in sorted(prefixes.entries().items())]
    lines.append(f"Ontology(<{generated.ontology_iri}>")
    by_kind = {TermKind.CLASS: [], TermKind.OBJECT_PROPERTY: [], TermKind.NAMED_INDIVIDUAL: []}
    for iri, kind in generated.declarations.items():
        by_kind[kind].append(iri)
    for kind in (TermKind.CLASS, TermKind.OBJECT_PROPERTY, TermKind.NAMED_INDIVIDUAL):
        for iri in sorted(by_kind[kind]):
            lines.append(f"Declaration({kind.value}({_fs_name(iri, prefixes)}))")
    for iri in sorted(generated.label_annotations):
        label = _escape(generated.label_annotations[iri])
        lines.append(f'AnnotationAssertion(rdfs:label {_fs_name(iri, prefixes)} "{label}")')
    rendered = []
    for axiom in generated.axioms:
        assert isinstance(axiom.subject, NamedRef)
        subject = _fs_name(axiom.subject.text, prefixes)
        obj = _fs_expr(axiom.object, prefixes)
        keyword = "SubClassOf" if axiom.kind is AxiomKind.SUBCLASS_OF else "EquivalentClasses"
        rendered.append((axiom.subject.text, f"{keyword}({subject} {obj})"))
    for _, text in sorted(rendered, key=lambda pair: (pair[0], pair[1])):
        lines.append(text)
    lines.append(")")
    return "\n".join(lines) + "\n"
