"""Shared fixtures: the cell/nucleation and KUP workspaces, toy graph builders,
and independent oracles used across the suite."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import pytest

from ontopop.expansion import MintRegistry
from ontopop.model import OntologyGraph, PrefixMap, Term, TermKind
from ontopop.pattern import parse_pattern
from ontopop.sources import load_sources
from ontopop.template import TemplateDescriptor, load_csv, load_descriptor

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@dataclass
class Workspace:
    base: Path
    descriptor: TemplateDescriptor
    graphs: dict[str, OntologyGraph]

    def table(self, name: str):
        return load_csv((self.base / name).read_text(encoding="utf-8"), self.descriptor)

    def pattern(self, name: str):
        return parse_pattern((self.base / name).read_text(encoding="utf-8"))

    def binding(self) -> dict[str, str]:
        return json.loads((self.base / "binding.json").read_text(encoding="utf-8"))

    def registry(self) -> MintRegistry:
        return MintRegistry.from_dict(
            json.loads((self.base / "registry.json").read_text(encoding="utf-8"))
        )


def _open_workspace(name: str) -> Workspace:
    base = FIXTURES / name
    descriptor = load_descriptor(base / "descriptor.json")
    graphs, _ = load_sources(descriptor.ontology_sources, base_dir=base)
    return Workspace(base, descriptor, graphs)


@pytest.fixture(scope="session")
def cellnuc() -> Workspace:
    return _open_workspace("cellnuc")


@pytest.fixture(scope="session")
def kupo() -> Workspace:
    return _open_workspace("kupo")


# -- graph building helpers ------------------------------------------------------


def build_graph(
    classes=(),
    properties=(),
    individuals=(),
    isa=(),
    prop_edges=(),
    instance_edges=(),
    labels=None,
    obsolete=(),
    graph_id="toy",
) -> OntologyGraph:
    """Toy graphs from short names: each name becomes http://toy/<name>."""
    labels = labels or {}
    graph = OntologyGraph(graph_id, PrefixMap({"t": "http://toy/"}))
    for name in classes:
        graph.add_term(
            Term(T(name), TermKind.CLASS, label=labels.get(name), obsolete=name in obsolete)
        )
    for name in properties:
        graph.add_term(Term(T(name), TermKind.OBJECT_PROPERTY, label=labels.get(name)))
    for name in individuals:
        graph.add_term(
            Term(T(name), TermKind.NAMED_INDIVIDUAL, label=labels.get(name), obsolete=name in obsolete)
        )
    for child, parent in isa:
        graph.add_subclass_edge(T(child), T(parent))
    for subj, prop, obj in prop_edges:
        graph.add_property_edge(T(subj), T(prop), T(obj))
    for ind, cls in instance_edges:
        graph.add_instance_edge(T(ind), T(cls))
    return graph.freeze()


def T(name: str) -> str:
    return f"http://toy/{name}"


# -- independent oracles -----------------------------------------------------------


def bfs_descendants(
    isa_edges,
    prop_edges,
    root,
    follow_properties=(),
    direct_only=False,
    include_root=False,
    obsolete=frozenset(),
):
    """Breadth-first reachability over raw edge lists, downward from root.

    Deliberately independent of OntologyGraph's traversal: plain queue over
    reversed adjacency built here from scratch.
    """
    follow = set(follow_properties)
    children: dict[str, set[str]] = {}
    for child, parent in isa_edges:
        children.setdefault(parent, set()).add(child)
    for subj, prop, obj in prop_edges:
        if prop in follow:
            children.setdefault(obj, set()).add(subj)
    if direct_only:
        found = set(children.get(root, set()))
    else:
        found = set()
        seen = {root}
        queue = deque([root])
        while queue:
            node = queue.popleft()
            for child in children.get(node, set()):
                if child not in seen:
                    seen.add(child)
                    found.add(child)
                    queue.append(child)
    if include_root:
        found.add(root)
    return {node for node in found if node not in obsolete}


def normalized_tokens(text: str) -> list[str]:
    """Whitespace-normalized token stream; commas separate entries and are
    dropped on both sides of a comparison."""
    return text.replace(",", " ").split()


def frame_text(document: str, subject_token: str) -> str:
    """The Manchester frame for one subject: from its Class: line to the next
    blank line or next frame."""
    lines = document.splitlines()
    start = None
    for i, line in enumerate(lines):
        if line.strip() == f"Class: {subject_token}":
            start = i
            break
    if start is None:
        raise AssertionError(f"no frame for {subject_token!r} in:\n{document}")
    end = start + 1
    while end < len(lines) and lines[end].strip() and not lines[end].startswith("Class:"):
        end += 1
    return "\n".join(lines[start:end])


def frame_tokens(document: str, subject_token: str) -> list[str]:
    return normalized_tokens(frame_text(document, subject_token))
