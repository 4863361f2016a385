"""Human-readable frame output: Class: / EquivalentTo: / SubClassOf: sections.

Names compact through the ontology's prefix map when a namespace matches,
otherwise the IRI fragment is shown (so minted terms render as e.g.
kupo_000027). Output is deterministic for equal inputs.
"""
from __future__ import annotations

from .generated import GeneratedOntology, GenerationError
from .model import PrefixMap, iri_fragment
from .pattern import AxiomKind, ClassExpr, Intersection, NamedRef, SomeRestriction


def render_name(iri: str, prefixes: PrefixMap) -> str:
    return prefixes.compact(iri) or iri_fragment(iri)


def render_expr(expr: ClassExpr, prefixes: PrefixMap) -> str:
    """Top-level rendering: conjuncts joined by 'and', restriction conjuncts
    and restriction fillers beyond a bare name get parentheses."""
    if isinstance(expr, NamedRef):
        return render_name(expr.text, prefixes)
    if isinstance(expr, SomeRestriction):
        prop = render_expr(expr.prop, prefixes)
        filler = render_expr(expr.filler, prefixes)
        if not isinstance(expr.filler, NamedRef):
            filler = f"({filler})"
        return f"{prop} some {filler}"
    if isinstance(expr, Intersection):
        parts = []
        for child in expr.children:
            text = render_expr(child, prefixes)
            if not isinstance(child, NamedRef):
                text = f"({text})"
            parts.append(text)
        return " and ".join(parts)
    raise GenerationError(f"cannot render {expr!r}")


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def emit_manchester(generated: GeneratedOntology, include_annotations: bool = False) -> str:
    """One frame per axiom subject, subjects ordered by IRI.

    Label annotations are carried by the functional-syntax output; they are
    only included here on request so frames match the conventional compact
    form (Class: then EquivalentTo: then SubClassOf:).
    """
    lines: list[str] = []
    for name, ns in sorted(generated.prefixes.entries().items()):
        lines.append(f"Prefix: {name}: <{ns}>")
    for subject in generated.subject_iris():
        lines.append("")
        lines.append(f"Class: {render_name(subject, generated.prefixes)}")
        label = generated.label_annotations.get(subject)
        if include_annotations and label is not None:
            lines.append("    Annotations:")
            lines.append(f'        rdfs:label "{_escape(label)}"')
        for kind, keyword in (
            (AxiomKind.EQUIVALENT_TO, "EquivalentTo:"),
            (AxiomKind.SUBCLASS_OF, "SubClassOf:"),
        ):
            entries = [
                render_expr(ax.object, generated.prefixes)
                for ax in generated.axioms
                if ax.kind is kind
                and isinstance(ax.subject, NamedRef)
                and ax.subject.text == subject
            ]
            if not entries:
                continue
            lines.append(f"    {keyword}")
            for i, entry in enumerate(entries):
                comma = "," if i < len(entries) - 1 else ""
                lines.append(f"        {entry}{comma}")
    lines.append("")
    return "\n".join(lines)
