"""Validation sets materialized from ontology ranges, cell/table validation,
and autocomplete over a set's members."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from threading import Lock
from typing import Mapping, Optional, Union

from .model import (
    OntologyGraph,
    Resolved as ResolvedName,
    Ambiguous as AmbiguousName,
    render_term,
)
from .template import (
    CellSplitError,
    ColumnSpec,
    RangeKind,
    RangeSpec,
    TableDoc,
    TemplateDescriptor,
    split_multi_value,
)


class ValidationError(Exception):
    pass


class CellError(ValidationError):
    """A cell whose raw text cannot even be split into values."""

    def __init__(self, row: int, column: str, message: str):
        super().__init__(f"row {row}, column {column!r}: {message}")
        self.row = row
        self.column = column


@dataclass(frozen=True)
class ValidationSet:
    """The terms a column accepts: IRIs with display labels, plus a label index.

    FreeText ranges have no members and are flagged open: any text is accepted.
    """

    range: RangeSpec
    members: tuple[tuple[str, str], ...]  # (iri, display label), sorted by label
    open_ended: bool = False

    @property
    def iris(self) -> frozenset[str]:
        return frozenset(iri for iri, _ in self.members)

    def label_index(self) -> dict[str, list[str]]:
        index: dict[str, list[str]] = {}
        for iri, label in self.members:
            index.setdefault(label.casefold(), []).append(iri)
        return index


def materialize_range(graphs: Mapping[str, OntologyGraph], range_spec: RangeSpec) -> ValidationSet:
    """Members per the range kind, computed against the named source graph."""
    if range_spec.kind is RangeKind.FREE_TEXT:
        return ValidationSet(range_spec, (), open_ended=True)
    assert range_spec.ontology_id is not None and range_spec.root is not None
    graph = graphs.get(range_spec.ontology_id)
    if graph is None:
        raise ValidationError(f"ontology {range_spec.ontology_id!r} is not loaded")
    kind = range_spec.kind
    if kind.is_subclass_kind():
        iris = graph.descendants_of(
            range_spec.root,
            follow_properties=range_spec.follow_properties,
            direct_only=kind is RangeKind.DIRECT_SUBCLASSES,
            include_root=range_spec.include_root,
        )
    else:
        iris = graph.individuals_of(
            range_spec.root, direct_only=kind is RangeKind.DIRECT_INDIVIDUALS
        )
    members = []
    for iri in iris:
        term = graph.term(iri)
        assert term is not None
        members.append((iri, render_term(term, prefer_label=True)))
    members.sort(key=lambda pair: (pair[1].casefold(), pair[1], pair[0]))
    return ValidationSet(range_spec, tuple(members))


class RangeCache:
    """Per-session materialization cache; graphs are immutable so entries never
    invalidate. Concurrent reads are fine, insertion is serialized."""

    def __init__(self, graphs: Mapping[str, OntologyGraph]):
        self._graphs = graphs
        self._cache: dict[RangeSpec, ValidationSet] = {}
        self._lock = Lock()

    def get(self, range_spec: RangeSpec) -> ValidationSet:
        vset = self._cache.get(range_spec)
        if vset is None:
            vset = materialize_range(self._graphs, range_spec)
            with self._lock:
                self._cache.setdefault(range_spec, vset)
        return vset


# -- cell statuses ---------------------------------------------------------------


@dataclass(frozen=True)
class Resolved:
    iri: str


@dataclass(frozen=True)
class OutOfRange:
    iri: str


@dataclass(frozen=True)
class Unknown:
    text: str


@dataclass(frozen=True)
class Ambiguous:
    candidates: tuple[str, ...]


@dataclass(frozen=True)
class Empty:
    pass


CellStatus = Union[Resolved, OutOfRange, Unknown, Ambiguous, Empty]


def status_kind(status: CellStatus) -> str:
    return type(status).__name__


def validate_cell(
    cell_text: str,
    spec: ColumnSpec,
    vset: ValidationSet,
    graphs: Mapping[str, OntologyGraph],
) -> list[CellStatus]:
    """One status per split value; an empty cell is a single Empty status.

    FreeText columns record every value as Unknown: the text is accepted, but
    it names no ontology term.
    """
    values = split_multi_value(cell_text, spec)
    if not values:
        return [Empty()]
    if vset.open_ended:
        return [Unknown(v) for v in values]
    assert spec.range.ontology_id is not None
    graph = graphs.get(spec.range.ontology_id)
    if graph is None:
        raise ValidationError(f"ontology {spec.range.ontology_id!r} is not loaded")
    member_iris = vset.iris
    statuses: list[CellStatus] = []
    for value in values:
        resolution = graph.resolve_label(value)
        if isinstance(resolution, ResolvedName):
            if resolution.iri in member_iris:
                statuses.append(Resolved(resolution.iri))
            else:
                statuses.append(OutOfRange(resolution.iri))
        elif isinstance(resolution, AmbiguousName):
            statuses.append(Ambiguous(resolution.candidates))
        else:
            statuses.append(Unknown(value))
    return statuses


@dataclass
class ValidatedTable:
    table: TableDoc
    descriptor: TemplateDescriptor
    statuses: list[list[list[CellStatus]]]  # [row][col] -> status per value
    summary: dict[str, int] = field(default_factory=dict)

    def recount(self) -> dict[str, int]:
        counts: Counter[str] = Counter()
        for row in self.statuses:
            for cell in row:
                for status in cell:
                    counts[status_kind(status)] += 1
        return dict(counts)


def validate_table(
    table: TableDoc,
    descriptor: TemplateDescriptor,
    graphs: Mapping[str, OntologyGraph],
    cache: Optional[RangeCache] = None,
) -> ValidatedTable:
    """Validate every cell; pure, so equal inputs give an identical result.

    A cell whose text cannot be split (unterminated quote) raises CellError
    with its row and column.
    """
    cache = cache or RangeCache(graphs)
    specs: list[ColumnSpec] = []
    for name in table.header:
        spec = descriptor.column(name)
        if spec is None:
            raise ValidationError(f"table column {name!r} is not in the descriptor")
        specs.append(spec)
    statuses: list[list[list[CellStatus]]] = []
    for row_index, row in enumerate(table.rows):
        row_statuses: list[list[CellStatus]] = []
        for spec, cell_text in zip(specs, row):
            try:
                vset = cache.get(spec.range)
                row_statuses.append(validate_cell(cell_text, spec, vset, graphs))
            except CellSplitError as exc:
                raise CellError(row_index, spec.name, str(exc)) from None
        statuses.append(row_statuses)
    validated = ValidatedTable(table, descriptor, statuses)
    validated.summary = validated.recount()
    return validated


# -- autocomplete ------------------------------------------------------------------


def autocomplete(query: str, vset: ValidationSet, limit: int) -> list[tuple[str, str]]:
    """Ranked candidates from the validation set.

    Tiers: label prefix match, label substring match, then the query read as a
    regular expression (skipped when invalid). Alphabetical within a tier,
    deduplicated across tiers, truncated to limit.
    """
    if limit < 1:
        raise ValueError("limit must be at least 1")
    needle = query.casefold()
    tiers: list[list[tuple[str, str]]] = [[], [], []]
    for iri, label in vset.members:  # members are pre-sorted by label
        folded = label.casefold()
        if folded.startswith(needle):
            tiers[0].append((iri, label))
        elif needle and needle in folded:
            tiers[1].append((iri, label))
    if query:
        try:
            pattern = re.compile(query, re.IGNORECASE)
        except re.error:
            pattern = None
        if pattern is not None:
            for iri, label in vset.members:
                if pattern.search(label):
                    tiers[2].append((iri, label))
    out: list[tuple[str, str]] = []
    seen: set[str] = set()
    for tier in tiers:
        for iri, label in tier:
            if iri not in seen:
                seen.add(iri)
                out.append((iri, label))
                if len(out) == limit:
                    return out
    return out
