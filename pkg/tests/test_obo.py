"""OBO flat-file parsing: stanzas, edges, diagnostics, totality."""
from __future__ import annotations

import random

from ontopop.model import TermKind
from ontopop.obo import expand_obo_id, has_errors, parse_obo

PURL = "http://purl.obolibrary.org/obo/"

CL_DOC = """format-version: 1.2
ontology: cl

[Term]
id: CL:0000000
name: cell

[Term]
id: CL:0000113
name: mononuclear phagocyte
is_a: CL:0000000 ! cell
"""


def test_term_stanza():
    graph, diags = parse_obo(CL_DOC)
    assert not diags
    term = graph.term(PURL + "CL_0000113")
    assert term is not None
    assert term.label == "mononuclear phagocyte"
    assert term.kind is TermKind.CLASS
    assert (PURL + "CL_0000113", PURL + "CL_0000000") in graph.sub_class_edges
    assert graph.id == "cl"


def test_is_a_comment_stripped():
    graph, _ = parse_obo(CL_DOC)
    assert graph.descendants_of(PURL + "CL_0000000") == {PURL + "CL_0000113"}


def test_relationship_edge():
    doc = """format-version: 1.2

[Typedef]
id: part_of
name: part of

[Term]
id: MA:0002580
name: afferent arteriole
relationship: part_of MA:0000368

[Term]
id: MA:0000368
name: kidney
"""
    graph, diags = parse_obo(doc)
    assert not has_errors(diags)
    assert (PURL + "MA_0002580", PURL + "part_of", PURL + "MA_0000368") in graph.property_edges
    prop = graph.term(PURL + "part_of")
    assert prop is not None and prop.kind is TermKind.OBJECT_PROPERTY


def test_empty_document():
    graph, diags = parse_obo("")
    assert list(graph.terms()) == []
    assert diags == []


def test_obsolete_flag():
    doc = "[Term]\nid: X:1\nname: gone\nis_obsolete: true\n"
    graph, _ = parse_obo(doc)
    assert graph.term(PURL + "X_1").obsolete


def test_unknown_tag_warns_never_errors():
    doc = "[Term]\nid: X:1\nname: x\nxref: something\nsynonym: \"alias\"\n"
    graph, diags = parse_obo(doc)
    assert graph.term(PURL + "X_1") is not None
    assert all(d.severity == "warning" for d in diags)
    assert len(diags) == 2


def test_stanza_without_id_is_error():
    doc = "[Term]\nname: no id here\n"
    _, diags = parse_obo(doc)
    assert has_errors(diags)


def test_forward_and_unresolved_references():
    doc = """[Term]
id: A:1
name: a
is_a: B:2
"""
    graph, diags = parse_obo(doc)
    # B:2 never declared: auto-declared bare class with a warning
    assert graph.term(PURL + "B_2") is not None
    assert graph.term(PURL + "B_2").label is None
    assert any(d.severity == "warning" for d in diags)
    assert not has_errors(diags)


def test_undeclared_relationship_type_autodeclared():
    doc = "[Term]\nid: A:1\nname: a\nrelationship: part_of B:2\n"
    graph, diags = parse_obo(doc)
    assert graph.term(PURL + "part_of").kind is TermKind.OBJECT_PROPERTY
    assert any("relationship type" in d.message for d in diags)


def test_bom_tolerated():
    graph, diags = parse_obo("﻿format-version: 1.2\n\n[Term]\nid: X:1\nname: x\n")
    assert graph.term(PURL + "X_1") is not None
    assert not has_errors(diags)


def test_kind_conflict_reported():
    doc = "[Term]\nid: X:1\nname: x\n\n[Typedef]\nid: X:1\nname: x\n"
    _, diags = parse_obo(doc)
    assert has_errors(diags)


def test_self_loop_skipped_with_warning():
    doc = "[Term]\nid: X:1\nname: x\nis_a: X:1\n"
    graph, diags = parse_obo(doc)
    assert graph.sub_class_edges == frozenset()
    assert any("self-loop" in d.message for d in diags)


def test_expand_obo_id():
    assert expand_obo_id("CL:0000113") == PURL + "CL_0000113"
    assert expand_obo_id("part_of") == PURL + "part_of"
    assert expand_obo_id("http://example.org/x") == "http://example.org/x"
    assert expand_obo_id("") is None


def test_total_on_mutilated_documents():
    rng = random.Random(99)
    base = CL_DOC
    for _ in range(200):
        chars = list(base)
        for _ in range(rng.randint(1, 10)):
            op = rng.randrange(3)
            pos = rng.randrange(len(chars))
            if op == 0:
                chars[pos] = chr(rng.randrange(32, 127))
            elif op == 1:
                del chars[pos]
            else:
                chars.insert(pos, chr(rng.randrange(1, 1000)))
        graph, diags = parse_obo("".join(chars))
        assert graph is not None
        assert isinstance(diags, list)
