"""Pattern expansion: bind variables to columns, instantiate per row, mint IRIs
for unknown terms, and collect axioms plus a row-by-row report.

Rows are processed in order and patterns in file order within each row; the
mint registry is shared across patterns, so counters are deterministic for
equal inputs.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .generated import GeneratedAxiom, GeneratedOntology, make_intersection
from .manchester import render_expr
from .model import OntologyGraph, PrefixMap, Resolved as ResolvedName, Ambiguous as AmbiguousName
from .model import TermKind, is_valid_iri
from .pattern import (
    AddAction,
    AxiomKind,
    ClassExpr,
    CreateIntersection,
    Intersection,
    NamedRef,
    PatternAst,
    SomeRestriction,
    VarDecl,
    VarRef,
    check_pattern,
)
from .template import TemplateDescriptor, split_multi_value
from .validation import (
    Ambiguous,
    Empty,
    OutOfRange,
    Resolved,
    Unknown,
    ValidatedTable,
)


class ExpansionError(Exception):
    pass


class BindingViolations(ExpansionError):
    """check_pattern violations; each entry names the offending variable."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


# -- identifier minting --------------------------------------------------------


def _normalize_label(label: str) -> str:
    return " ".join(label.split()).casefold()


@dataclass
class MintRegistry:
    """Deterministic label -> IRI assignment with a persistent counter."""

    base_namespace: str
    prefix_label: str
    pad_width: int = 6
    next_counter: int = 1
    assignments: dict[str, str] = field(default_factory=dict)

    def mint(self, label: str) -> tuple[str, bool]:
        """(iri, newly_assigned). The same label (case- and whitespace-folded)
        always gets the same IRI; new labels advance the counter once."""
        key = _normalize_label(label)
        if not key:
            raise ExpansionError("cannot mint an identifier for an empty label")
        existing = self.assignments.get(key)
        if existing is not None:
            return existing, False
        taken = set(self.assignments.values())
        while True:
            iri = f"{self.base_namespace}{self.prefix_label}_{self.next_counter:0{self.pad_width}d}"
            self.next_counter += 1
            # a hand-edited registry may have parked the counter behind an
            # assigned identifier; never hand the same IRI to two labels
            if iri not in taken:
                break
        self.assignments[key] = iri
        return iri, True

    def to_dict(self) -> dict:
        return {
            "baseNamespace": self.base_namespace,
            "prefixLabel": self.prefix_label,
            "padWidth": self.pad_width,
            "nextCounter": self.next_counter,
            "assignments": dict(sorted(self.assignments.items())),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MintRegistry":
        try:
            registry = cls(
                base_namespace=data["baseNamespace"],
                prefix_label=data["prefixLabel"],
                pad_width=int(data.get("padWidth", 6)),
                next_counter=int(data.get("nextCounter", 1)),
                assignments=dict(data.get("assignments", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ExpansionError(f"malformed mint registry: {exc}") from None
        values = list(registry.assignments.values())
        if len(set(values)) != len(values):
            raise ExpansionError("malformed mint registry: assignments are not injective")
        return registry

    def save(self, path: Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Path) -> "MintRegistry":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ExpansionError(f"malformed mint registry {path}: {exc}") from None
        return cls.from_dict(data)


# -- report ----------------------------------------------------------------------


@dataclass(frozen=True)
class RowOutcome:
    expanded: bool
    axiom_count: int = 0
    reason: str = ""


@dataclass(frozen=True)
class MintedTerm:
    label: str
    iri: str
    row: int
    column: str


@dataclass(frozen=True)
class TermRequest:
    raw_text: str
    column: str
    row: int
    status: str  # "Unknown" | "OutOfRange"


@dataclass(frozen=True)
class SkippedAction:
    row: int
    action_index: int
    missing_variable: str


@dataclass
class ExpansionReport:
    per_row: dict[int, RowOutcome] = field(default_factory=dict)
    minted: list[MintedTerm] = field(default_factory=list)
    term_requests: list[TermRequest] = field(default_factory=list)
    skipped_actions: list[SkippedAction] = field(default_factory=list)


def emit_term_requests(report: ExpansionReport) -> str:
    """CSV listing unknown/out-of-range values and minted terms, one line each,
    ordered by row then column."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(["raw_text", "column", "row", "status", "minted_iri"])
    lines: list[tuple[int, str, str, str, str]] = []
    for request in report.term_requests:
        lines.append((request.row, request.column, request.raw_text, request.status, ""))
    for minted in report.minted:
        lines.append((minted.row, minted.column, minted.label, "Unknown", minted.iri))
    for row, column, raw, status, iri in sorted(lines):
        writer.writerow([raw, column, row, status, iri])
    return out.getvalue()


# -- instantiation ---------------------------------------------------------------


def substitute(expr: ClassExpr, assignment: Mapping[str, ClassExpr], sort_key) -> ClassExpr:
    """Replace variable references; intersections re-canonicalize so nested
    conjunctions splice flat."""
    if isinstance(expr, NamedRef):
        return expr
    if isinstance(expr, VarRef):
        try:
            return assignment[expr.name]
        except KeyError:
            raise ExpansionError(f"no value for variable ?{expr.name}") from None
    if isinstance(expr, SomeRestriction):
        prop = substitute(expr.prop, assignment, sort_key)
        if not isinstance(prop, NamedRef):
            raise ExpansionError("property position did not resolve to a name")
        return SomeRestriction(prop, substitute(expr.filler, assignment, sort_key))
    if isinstance(expr, Intersection):
        children = [substitute(c, assignment, sort_key) for c in expr.children]
        return make_intersection(children, sort_key=sort_key)
    raise ExpansionError(f"cannot instantiate {expr!r}")


def referenced_variables(expr: ClassExpr) -> list[str]:
    """Variables referenced by the expression, in first-appearance order."""
    out: list[str] = []

    def walk(node: ClassExpr) -> None:
        if isinstance(node, VarRef):
            if node.name not in out:
                out.append(node.name)
        elif isinstance(node, SomeRestriction):
            walk(node.prop)
            walk(node.filler)
        elif isinstance(node, Intersection):
            for child in node.children:
                walk(child)

    walk(expr)
    return out


def generator_instances(
    gen_expr: ClassExpr,
    var_instances: Mapping[str, list[ClassExpr]],
    sort_key,
) -> list[ClassExpr]:
    """One instantiation per value of the (at most one) multi-valued variable
    the generator references; an empty referenced variable empties the result."""
    refs = referenced_variables(gen_expr)
    for ref in refs:
        if not var_instances[ref]:
            return []
    multi = [ref for ref in refs if len(var_instances[ref]) > 1]
    if len(multi) > 1:
        raise ExpansionError(
            "a generator may reference at most one multi-valued variable, got "
            + " and ".join(f"?{name}" for name in multi)
        )
    singles = {ref: var_instances[ref][0] for ref in refs if ref not in multi}
    if not multi:
        return [substitute(gen_expr, singles, sort_key)]
    var = multi[0]
    return [
        substitute(gen_expr, {**singles, var: value}, sort_key)
        for value in var_instances[var]
    ]


# -- name resolution -------------------------------------------------------------


class NameResolver:
    """Fixed pattern names to IRIs: full IRIs pass through, prefixed names
    expand through the descriptor then each source's prefix map, plain names
    resolve by label then fragment across the loaded graphs in source order.
    Names found nowhere are coined in the registry namespace, so a pattern may
    introduce fresh properties like hasNucleation."""

    def __init__(
        self,
        descriptor: TemplateDescriptor,
        graphs: Mapping[str, OntologyGraph],
        fallback_namespace: str,
    ):
        self.descriptor = descriptor
        self.ordered_graphs = [
            graphs[s.id] for s in descriptor.ontology_sources if s.id in graphs
        ]
        self.fallback_namespace = fallback_namespace
        self._cache: dict[tuple[str, TermKind], tuple[str, TermKind]] = {}

    def resolve(self, text: str, expected: TermKind) -> tuple[str, TermKind]:
        """(iri, kind); kind is the declared kind when known, else expected."""
        cached = self._cache.get((text, expected))
        if cached is not None:
            return cached
        result = self._resolve(text, expected)
        self._cache[(text, expected)] = result
        return result

    def _declared_kind(self, iri: str, expected: TermKind) -> TermKind:
        for graph in self.ordered_graphs:
            term = graph.term(iri)
            if term is not None:
                if term.kind is not expected:
                    raise ExpansionError(
                        f"{iri} is a {term.kind.value} but is used as a {expected.value}"
                    )
                return term.kind
        return expected

    def _resolve(self, text: str, expected: TermKind) -> tuple[str, TermKind]:
        if "://" in text and is_valid_iri(text):
            return text, self._declared_kind(text, expected)
        if ":" in text:
            maps = [self.descriptor.prefixes] + [g.prefixes for g in self.ordered_graphs]
            for prefix_map in maps:
                iri = prefix_map.expand(text)
                if iri is not None:
                    return iri, self._declared_kind(iri, expected)
            raise ExpansionError(f"unknown prefix in pattern name {text!r}")
        for graph in self.ordered_graphs:
            resolution = graph.resolve_label(text)
            if isinstance(resolution, ResolvedName):
                return resolution.iri, self._declared_kind(resolution.iri, expected)
            if isinstance(resolution, AmbiguousName):
                raise ExpansionError(
                    f"pattern name {text!r} is ambiguous: {', '.join(resolution.candidates)}"
                )
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", text):
            raise ExpansionError(f"cannot resolve pattern name {text!r}")
        return self.fallback_namespace + text, expected


# -- the expander ----------------------------------------------------------------


def _derive_ontology_iri(namespace: str) -> str:
    return namespace.rstrip("#/:") or "http://example.org/generated"


@dataclass
class _ColumnValues:
    values: list[ClassExpr]  # usable values, as ground named refs


class Expander:
    """Drives expansion of one validated table through an ordered pattern list."""

    def __init__(
        self,
        descriptor: TemplateDescriptor,
        graphs: Mapping[str, OntologyGraph],
        registry: MintRegistry,
        ontology_iri: Optional[str] = None,
    ):
        self.descriptor = descriptor
        self.graphs = graphs
        self.registry = registry
        self.generated = GeneratedOntology(
            ontology_iri or _derive_ontology_iri(registry.base_namespace),
            PrefixMap(descriptor.prefixes.entries()),
        )
        self.report = ExpansionReport()
        self.resolver = NameResolver(descriptor, graphs, registry.base_namespace)
        self._sort_key = lambda expr: render_expr(expr, self.generated.prefixes)

    # name grounding ---------------------------------------------------------

    def _ground(self, expr: ClassExpr, expected: TermKind = TermKind.CLASS) -> ClassExpr:
        if isinstance(expr, NamedRef):
            iri, kind = self.resolver.resolve(expr.text, expected)
            self.generated.declare(iri, kind)
            return NamedRef(iri)
        if isinstance(expr, SomeRestriction):
            prop = self._ground(expr.prop, TermKind.OBJECT_PROPERTY)
            return SomeRestriction(prop, self._ground(expr.filler))
        if isinstance(expr, Intersection):
            return Intersection(tuple(self._ground(c) for c in expr.children))
        return expr

    def _ground_pattern(self, ast: PatternAst) -> PatternAst:
        decls = []
        for decl in ast.decls:
            generator = decl.generator
            if generator is not None and not isinstance(generator, CreateIntersection):
                generator = self._ground(generator)
            decls.append(VarDecl(decl.name, decl.var_type, generator))
        actions = tuple(
            AddAction(self._ground(a.subject), a.kind, self._ground(a.object))
            for a in ast.actions
        )
        return PatternAst(tuple(decls), actions)

    # cell values ------------------------------------------------------------

    def _column_values(
        self,
        vtable: ValidatedTable,
        row: int,
        column: str,
        cache: dict[tuple[int, str], _ColumnValues],
    ) -> _ColumnValues:
        key = (row, column)
        hit = cache.get(key)
        if hit is not None:
            return hit
        spec = self.descriptor.column(column)
        if spec is None:
            raise ExpansionError(f"no column named {column!r}")
        col_index = vtable.table.column_index(column)
        statuses = vtable.statuses[row][col_index]
        raw_values = split_multi_value(vtable.table.rows[row][col_index], spec)
        values: list[ClassExpr] = []
        for i, status in enumerate(statuses):
            if isinstance(status, Resolved):
                values.append(NamedRef(status.iri))
            elif isinstance(status, Unknown):
                raw = raw_values[i] if i < len(raw_values) else status.text
                if spec.mint_unknown:
                    iri, _ = self.registry.mint(raw)
                    self.generated.declare(iri, TermKind.CLASS)
                    self.generated.annotate_label(iri, raw.strip())
                    self.report.minted.append(MintedTerm(raw.strip(), iri, row, column))
                    values.append(NamedRef(iri))
                else:
                    self.report.term_requests.append(TermRequest(raw, column, row, "Unknown"))
            elif isinstance(status, OutOfRange):
                raw = raw_values[i] if i < len(raw_values) else ""
                self.report.term_requests.append(TermRequest(raw, column, row, "OutOfRange"))
            elif isinstance(status, Ambiguous):
                # cannot pick a reading; the action skip will surface the gap
                continue
            elif isinstance(status, Empty):
                continue
        result = _ColumnValues(values)
        cache[key] = result
        return result

    # rows ---------------------------------------------------------------------

    def _expand_row_pattern(
        self,
        ast: PatternAst,
        binding: Mapping[str, str],
        vtable: ValidatedTable,
        row: int,
        action_offset: int,
        cache: dict[tuple[int, str], _ColumnValues],
    ) -> tuple[int, list[str]]:
        """(axioms yielded, skip reasons)."""
        var_instances: dict[str, list[ClassExpr]] = {}
        for decl in ast.decls:
            if decl.generator is None:
                column = binding[decl.name]
                var_instances[decl.name] = list(
                    self._column_values(vtable, row, column, cache).values
                )
            elif isinstance(decl.generator, CreateIntersection):
                instances = var_instances[decl.generator.over]
                if instances:
                    var_instances[decl.name] = [
                        make_intersection(instances, sort_key=self._sort_key)
                    ]
                else:
                    var_instances[decl.name] = []
            else:
                var_instances[decl.name] = generator_instances(
                    decl.generator, var_instances, self._sort_key
                )

        yielded = 0
        skips: list[str] = []
        for index, action in enumerate(ast.actions):
            subject_refs = referenced_variables(action.subject)
            refs = subject_refs + [
                r for r in referenced_variables(action.object) if r not in subject_refs
            ]
            missing = next((r for r in refs if not var_instances[r]), None)
            if missing is not None:
                self.report.skipped_actions.append(
                    SkippedAction(row, action_offset + index, missing)
                )
                skips.append(f"missing ?{missing}")
                continue
            multi = [r for r in refs if len(var_instances[r]) > 1]
            for combo in itertools.product(*(var_instances[r] for r in multi)):
                assignment = {r: var_instances[r][0] for r in refs if r not in multi}
                assignment.update(dict(zip(multi, combo)))
                subject = substitute(action.subject, assignment, self._sort_key)
                if not isinstance(subject, NamedRef):
                    raise ExpansionError(
                        f"action {action_offset + index}: subject is not a named class"
                    )
                obj = substitute(action.object, assignment, self._sort_key)
                yielded += self._add_action_axioms(action.kind, subject, obj)
        return yielded, skips

    def _add_action_axioms(self, kind: AxiomKind, subject: NamedRef, obj: ClassExpr) -> int:
        """SubClassOf against an intersection splits into one axiom per
        conjunct; an equivalence keeps its intersection whole."""
        count = 0
        if kind is AxiomKind.SUBCLASS_OF and isinstance(obj, Intersection):
            for child in obj.children:
                self.generated.add_axiom(GeneratedAxiom(kind, subject, child))
                count += 1
        else:
            self.generated.add_axiom(GeneratedAxiom(kind, subject, obj))
            count += 1
        return count

    # tables ---------------------------------------------------------------------

    def expand(
        self,
        patterns: Sequence[PatternAst],
        bindings: Sequence[Mapping[str, str]],
        vtable: ValidatedTable,
        rows: Optional[Sequence[int]] = None,
    ) -> tuple[GeneratedOntology, ExpansionReport]:
        if len(patterns) != len(bindings):
            raise ExpansionError("one binding per pattern required")
        violations: list[str] = []
        for i, (ast, binding) in enumerate(zip(patterns, bindings)):
            for violation in check_pattern(ast, self.descriptor.column_names(), dict(binding)):
                violations.append(f"pattern {i + 1}: {violation}")
        if violations:
            raise BindingViolations(violations)

        grounded = [self._ground_pattern(ast) for ast in patterns]
        offsets = list(itertools.accumulate([0] + [len(p.actions) for p in grounded]))

        row_count = vtable.table.row_count
        if rows is None:
            selected = list(range(row_count))
        else:
            selected = list(rows)
            for row in selected:
                if not 0 <= row < row_count:
                    raise ExpansionError(f"row index {row} out of range (0..{row_count - 1})")

        selected_set = set(selected)
        cache: dict[tuple[int, str], _ColumnValues] = {}
        for row in range(row_count):
            if row not in selected_set:
                self.report.per_row[row] = RowOutcome(False, reason="not selected")
        for row in selected:
            yielded = 0
            skips: list[str] = []
            for ast, binding, offset in zip(grounded, bindings, offsets):
                count, pattern_skips = self._expand_row_pattern(
                    ast, binding, vtable, row, offset, cache
                )
                yielded += count
                skips.extend(pattern_skips)
            if yielded > 0:
                self.report.per_row[row] = RowOutcome(True, axiom_count=yielded)
            else:
                row_cells = vtable.table.rows[row]
                if all(not cell.strip() for cell in row_cells):
                    reason = "empty row"
                else:
                    reason = skips[0] if skips else "no axioms produced"
                self.report.per_row[row] = RowOutcome(False, reason=reason)
        return self.generated, self.report


def expand_table(
    patterns: Sequence[PatternAst],
    bindings: Sequence[Mapping[str, str]],
    vtable: ValidatedTable,
    descriptor: TemplateDescriptor,
    graphs: Mapping[str, OntologyGraph],
    registry: MintRegistry,
    rows: Optional[Sequence[int]] = None,
) -> tuple[GeneratedOntology, ExpansionReport]:
    expander = Expander(descriptor, graphs, registry)
    return expander.expand(patterns, bindings, vtable, rows=rows)
