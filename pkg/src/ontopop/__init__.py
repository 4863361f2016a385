"""ontopop: populate ontology content through validated tables and patterns."""

from .expansion import (
    Expander,
    ExpansionError,
    ExpansionReport,
    MintRegistry,
    emit_term_requests,
    expand_table,
)
from .functional import emit_functional, parse_functional
from .generated import GeneratedAxiom, GeneratedOntology
from .manchester import emit_manchester
from .model import OntologyGraph, PrefixMap, Term, TermKind, render_term
from .obo import parse_obo
from .pattern import PatternAst, PatternError, check_pattern, parse_pattern, print_pattern
from .sources import OntologySource, SourceFormat, fetch_ontology, load_sources, sniff_format
from .template import (
    ColumnSpec,
    RangeKind,
    RangeSpec,
    TableDoc,
    TemplateDescriptor,
    load_csv,
    parse_descriptor,
    render_csv,
    split_multi_value,
)
from .validation import ValidationSet, autocomplete, materialize_range, validate_cell, validate_table

__version__ = "0.1.0"
