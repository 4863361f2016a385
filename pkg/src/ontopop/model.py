"""In-memory ontology representation: terms, edges, subsumption closure, label lookup.

Graphs are built single-threaded by the loaders, then frozen; queries are pure
and safe for concurrent readers.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Optional


class OntologyError(Exception):
    """Base class for graph construction and query errors."""


class BadIriError(OntologyError):
    pass


class KindConflictError(OntologyError):
    pass


class UndeclaredTermError(OntologyError):
    pass


class FrozenGraphError(OntologyError):
    pass


def is_valid_iri(text: str) -> bool:
    """An IRI here is any non-empty text with a scheme separator and no whitespace."""
    if not text or ":" not in text:
        return False
    return not any(c.isspace() for c in text)


def check_iri(text: str) -> str:
    if not is_valid_iri(text):
        raise BadIriError(f"not a valid IRI: {text!r}")
    return text


def iri_fragment(iri: str) -> str:
    """Text after the last '#' or '/'; falls back to after the last ':'."""
    pos = max(iri.rfind("#"), iri.rfind("/"))
    if pos >= 0:
        return iri[pos + 1 :]
    return iri.rsplit(":", 1)[-1]


class PrefixMap:
    """Prefix name -> IRI namespace. Compacting an IRI and expanding the result is identity."""

    def __init__(self, entries: Optional[dict[str, str]] = None):
        self._entries: dict[str, str] = {}
        for name, ns in (entries or {}).items():
            self.add(name, ns)

    def add(self, name: str, namespace: str) -> None:
        if not namespace or namespace[-1] not in "#/:":
            raise BadIriError(f"namespace must end with '#', '/' or ':': {namespace!r}")
        existing = self._entries.get(name)
        if existing is not None and existing != namespace:
            raise KindConflictError(f"prefix {name!r} already bound to {existing!r}")
        self._entries[name] = namespace

    def entries(self) -> dict[str, str]:
        return dict(self._entries)

    def namespace(self, name: str) -> Optional[str]:
        return self._entries.get(name)

    def compact(self, iri: str) -> Optional[str]:
        """Longest matching namespace wins; ties broken by prefix name."""
        best: Optional[tuple[int, str]] = None
        for name, ns in sorted(self._entries.items()):
            if iri.startswith(ns) and len(iri) > len(ns):
                if best is None or len(ns) > best[0]:
                    best = (len(ns), name)
        if best is None:
            return None
        _, name = best
        local = iri[len(self._entries[name]) :]
        return f"{name}:{local}"

    def expand(self, compact: str) -> Optional[str]:
        if ":" not in compact:
            return None
        name, local = compact.split(":", 1)
        ns = self._entries.get(name)
        if ns is None:
            return None
        return ns + local

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrefixMap) and self._entries == other._entries

    def __repr__(self) -> str:
        return f"PrefixMap({self._entries!r})"


class TermKind(Enum):
    CLASS = "Class"
    OBJECT_PROPERTY = "ObjectProperty"
    NAMED_INDIVIDUAL = "NamedIndividual"


@dataclass(frozen=True)
class Term:
    iri: str
    kind: TermKind
    label: Optional[str] = None
    source_ontology: str = ""
    obsolete: bool = False


@dataclass(frozen=True)
class Resolved:
    iri: str


@dataclass(frozen=True)
class Ambiguous:
    candidates: tuple[str, ...]


@dataclass(frozen=True)
class Unknown:
    pass


Resolution = Resolved | Ambiguous | Unknown


def render_term(term: Term, prefer_label: bool = True) -> str:
    """Display text for a term: its label when preferred and present, else the IRI fragment."""
    if prefer_label and term.label:
        return term.label
    return iri_fragment(term.iri)


def _norm_label(text: str) -> str:
    return text.strip().casefold()


class OntologyGraph:
    """Terms plus is_a / property / instance-of edges.

    Every IRI appearing in an edge must be a declared term. Subclass edges relate
    classes, instance edges relate individuals to classes, and subclass self-loops
    are rejected. Cycles across distinct terms are tolerated: closure queries use
    visited-set reachability and always terminate.
    """

    def __init__(self, graph_id: str = "", prefixes: Optional[PrefixMap] = None):
        self.id = graph_id
        self.prefixes = prefixes or PrefixMap()
        self._terms: dict[str, Term] = {}
        self._sub_class_edges: set[tuple[str, str]] = set()
        self._property_edges: set[tuple[str, str, str]] = set()
        self._instance_edges: set[tuple[str, str]] = set()
        # reverse adjacency, filled lazily on first closure query
        self._children: Optional[dict[str, set[str]]] = None
        self._prop_children: Optional[dict[tuple[str, str], set[str]]] = None
        self._instances: Optional[dict[str, set[str]]] = None
        self._label_index: Optional[dict[str, list[str]]] = None
        self._fragment_index: Optional[dict[str, list[str]]] = None
        self._frozen = False

    # -- construction ------------------------------------------------------

    def _check_mutable(self) -> None:
        if self._frozen:
            raise FrozenGraphError("graph is frozen; build a new one instead")

    def add_term(self, term: Term) -> None:
        """Idempotent for identical terms; a kind conflict is an error.

        Redeclaration with the same kind merges metadata: a missing label is
        filled in, obsolete status is sticky.
        """
        self._check_mutable()
        check_iri(term.iri)
        existing = self._terms.get(term.iri)
        if existing is None:
            self._terms[term.iri] = term
            return
        if existing.kind is not term.kind:
            raise KindConflictError(
                f"{term.iri} already declared as {existing.kind.value}, "
                f"cannot redeclare as {term.kind.value}"
            )
        merged = existing
        if existing.label is None and term.label is not None:
            merged = replace(merged, label=term.label)
        if term.obsolete and not existing.obsolete:
            merged = replace(merged, obsolete=True)
        self._terms[term.iri] = merged

    def set_label(self, iri: str, label: str) -> None:
        self._check_mutable()
        term = self._require(iri)
        self._terms[iri] = replace(term, label=label)

    def _require(self, iri: str) -> Term:
        term = self._terms.get(iri)
        if term is None:
            raise UndeclaredTermError(f"undeclared term: {iri}")
        return term

    def _require_kind(self, iri: str, kind: TermKind) -> Term:
        term = self._require(iri)
        if term.kind is not kind:
            raise KindConflictError(f"{iri} is a {term.kind.value}, expected {kind.value}")
        return term

    def add_subclass_edge(self, child: str, parent: str) -> None:
        self._check_mutable()
        if child == parent:
            raise OntologyError(f"subclass self-loop on {child}")
        self._require_kind(child, TermKind.CLASS)
        self._require_kind(parent, TermKind.CLASS)
        self._sub_class_edges.add((child, parent))

    def add_property_edge(self, subject: str, prop: str, obj: str) -> None:
        self._check_mutable()
        self._require(subject)
        self._require_kind(prop, TermKind.OBJECT_PROPERTY)
        self._require(obj)
        self._property_edges.add((subject, prop, obj))

    def add_instance_edge(self, individual: str, cls: str) -> None:
        self._check_mutable()
        self._require_kind(individual, TermKind.NAMED_INDIVIDUAL)
        self._require_kind(cls, TermKind.CLASS)
        self._instance_edges.add((individual, cls))

    def freeze(self) -> "OntologyGraph":
        self._frozen = True
        return self

    # -- access ------------------------------------------------------------

    def term(self, iri: str) -> Optional[Term]:
        return self._terms.get(iri)

    def terms(self) -> Iterable[Term]:
        return self._terms.values()

    @property
    def sub_class_edges(self) -> frozenset[tuple[str, str]]:
        return frozenset(self._sub_class_edges)

    @property
    def property_edges(self) -> frozenset[tuple[str, str, str]]:
        return frozenset(self._property_edges)

    @property
    def instance_edges(self) -> frozenset[tuple[str, str]]:
        return frozenset(self._instance_edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OntologyGraph):
            return NotImplemented
        return (
            self.id == other.id
            and self.prefixes == other.prefixes
            and self._terms == other._terms
            and self._sub_class_edges == other._sub_class_edges
            and self._property_edges == other._property_edges
            and self._instance_edges == other._instance_edges
        )

    def __repr__(self) -> str:
        return (
            f"OntologyGraph(id={self.id!r}, terms={len(self._terms)}, "
            f"is_a={len(self._sub_class_edges)}, prop={len(self._property_edges)}, "
            f"inst={len(self._instance_edges)})"
        )

    # -- queries -----------------------------------------------------------

    def _indexes(self) -> tuple[dict[str, set[str]], dict[tuple[str, str], set[str]], dict[str, set[str]]]:
        if self._children is None:
            children: dict[str, set[str]] = defaultdict(set)
            for child, parent in self._sub_class_edges:
                children[parent].add(child)
            prop_children: dict[tuple[str, str], set[str]] = defaultdict(set)
            for subj, prop, obj in self._property_edges:
                prop_children[(obj, prop)].add(subj)
            instances: dict[str, set[str]] = defaultdict(set)
            for ind, cls in self._instance_edges:
                instances[cls].add(ind)
            self._children = children
            self._prop_children = prop_children
            self._instances = instances
        assert self._prop_children is not None and self._instances is not None
        return self._children, self._prop_children, self._instances

    def _direct_children(self, node: str, follow_properties: frozenset[str]) -> set[str]:
        children, prop_children, _ = self._indexes()
        out = set(children.get(node, ()))
        for prop in follow_properties:
            out |= prop_children.get((node, prop), set())
        return out

    def _not_obsolete(self, iris: Iterable[str]) -> set[str]:
        return {i for i in iris if not self._terms[i].obsolete}

    def descendants_of(
        self,
        root: str,
        follow_properties: Iterable[str] = (),
        direct_only: bool = False,
        include_root: bool = False,
    ) -> set[str]:
        """Terms below root via subclass edges plus any followed property edges.

        direct_only limits to one step. Obsolete terms are traversed but never
        returned, so validation ranges never offer deprecated terms.
        """
        self._require_kind(root, TermKind.CLASS)
        follow = frozenset(follow_properties)
        if direct_only:
            found = self._direct_children(root, follow)
        else:
            found = set()
            queue = [root]
            seen = {root}
            while queue:
                node = queue.pop()
                for child in self._direct_children(node, follow):
                    if child not in seen:
                        seen.add(child)
                        found.add(child)
                        queue.append(child)
            found.discard(root)
        if include_root:
            found.add(root)
        return self._not_obsolete(found)

    def individuals_of(self, root: str, direct_only: bool = False) -> set[str]:
        """Individuals asserted into root, or into any subclass of root when not direct."""
        self._require(root)
        _, _, instances = self._indexes()
        classes = {root}
        if not direct_only:
            term = self._terms[root]
            if term.kind is TermKind.CLASS:
                classes |= self.descendants_of(root)
        found: set[str] = set()
        for cls in classes:
            found |= instances.get(cls, set())
        return self._not_obsolete(found)

    def _lookup_indexes(self) -> tuple[dict[str, list[str]], dict[str, list[str]]]:
        if self._label_index is None:
            label_index: dict[str, list[str]] = defaultdict(list)
            fragment_index: dict[str, list[str]] = defaultdict(list)
            for iri, term in self._terms.items():
                if term.label:
                    label_index[_norm_label(term.label)].append(iri)
                fragment_index[_norm_label(iri_fragment(iri))].append(iri)
            self._label_index = label_index
            self._fragment_index = fragment_index
        assert self._fragment_index is not None
        return self._label_index, self._fragment_index

    def resolve_label(self, text: str) -> Resolution:
        """Exact case-insensitive label match first, then IRI-fragment match.

        Two or more hits within the winning tier give Ambiguous. Leading and
        trailing whitespace is trimmed; internal whitespace is significant.
        """
        key = _norm_label(text)
        if not key:
            return Unknown()
        label_index, fragment_index = self._lookup_indexes()
        for index in (label_index, fragment_index):
            hits = index.get(key, [])
            if len(hits) == 1:
                return Resolved(hits[0])
            if len(hits) > 1:
                return Ambiguous(tuple(sorted(hits)))
        return Unknown()
