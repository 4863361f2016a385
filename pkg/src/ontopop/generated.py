"""Container for generated axioms: declarations, label annotations, axiom list.

Expressions here are ground pattern expressions: NamedRef nodes carry full IRIs,
never compact names or variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .model import PrefixMap, TermKind
from .pattern import AxiomKind, ClassExpr, Intersection, NamedRef, SomeRestriction, VarRef


class GenerationError(Exception):
    pass


@dataclass(frozen=True)
class GeneratedAxiom:
    kind: AxiomKind
    subject: ClassExpr
    object: ClassExpr


def make_intersection(
    children: Iterable[ClassExpr],
    sort_key: Optional[Callable[[ClassExpr], str]] = None,
) -> ClassExpr:
    """Conjunction with nested intersections spliced in and duplicates dropped.

    A single remaining conjunct is returned bare, no wrapper. sort_key, when
    given, fixes the canonical child order.
    """
    flat: list[ClassExpr] = []
    seen: set[ClassExpr] = set()
    for child in children:
        parts = child.children if isinstance(child, Intersection) else (child,)
        for part in parts:
            if part not in seen:
                seen.add(part)
                flat.append(part)
    if not flat:
        raise GenerationError("intersection over zero expressions")
    if sort_key is not None:
        flat.sort(key=sort_key)
    if len(flat) == 1:
        return flat[0]
    return Intersection(tuple(flat))


def named_iris(expr: ClassExpr) -> Iterator[tuple[str, TermKind]]:
    """Every named IRI in the expression with the kind its position implies."""
    if isinstance(expr, NamedRef):
        yield expr.text, TermKind.CLASS
    elif isinstance(expr, SomeRestriction):
        if isinstance(expr.prop, NamedRef):
            yield expr.prop.text, TermKind.OBJECT_PROPERTY
        yield from named_iris(expr.filler)
    elif isinstance(expr, Intersection):
        for child in expr.children:
            yield from named_iris(child)
    elif isinstance(expr, VarRef):
        raise GenerationError(f"unresolved variable ?{expr.name} in ground expression")


@dataclass
class GeneratedOntology:
    """Axioms produced by pattern expansion, ready for emission.

    Axiom deduplication is structural; insertion order is retained so emitted
    documents follow row order.
    """

    ontology_iri: str = "http://example.org/generated"
    prefixes: PrefixMap = field(default_factory=PrefixMap)
    declarations: dict[str, TermKind] = field(default_factory=dict)
    label_annotations: dict[str, str] = field(default_factory=dict)
    axioms: list[GeneratedAxiom] = field(default_factory=list)
    _seen: set[GeneratedAxiom] = field(default_factory=set, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self._seen = set(self.axioms)

    def declare(self, iri: str, kind: TermKind) -> None:
        existing = self.declarations.get(iri)
        if existing is not None and existing is not kind:
            raise GenerationError(
                f"{iri} already declared as {existing.value}, cannot redeclare as {kind.value}"
            )
        self.declarations[iri] = kind

    def annotate_label(self, iri: str, label: str) -> None:
        self.label_annotations[iri] = label

    def add_axiom(self, axiom: GeneratedAxiom) -> bool:
        """Returns False for a structural duplicate."""
        if axiom in self._seen:
            return False
        for iri, kind in named_iris(axiom.subject):
            self.declare(iri, kind)
        for iri, kind in named_iris(axiom.object):
            self.declare(iri, kind)
        self._seen.add(axiom)
        self.axioms.append(axiom)
        return True

    def subject_iris(self) -> list[str]:
        """Distinct axiom subjects, sorted; subjects must be named classes."""
        out: set[str] = set()
        for axiom in self.axioms:
            if not isinstance(axiom.subject, NamedRef):
                raise GenerationError("axiom subject is not a named class")
            out.add(axiom.subject.text)
        return sorted(out)

    def is_empty(self) -> bool:
        return not self.axioms and not self.declarations
