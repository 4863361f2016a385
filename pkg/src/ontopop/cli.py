"""Command-line entry points: validate, expand, fetch, complete, serve.

Exit codes: 0 success, 1 content problems (validation issues, binding
violations, failed fetch), 2 unusable inputs (missing files, parse errors,
bad URLs).
"""
from __future__ import annotations

import sys
from pathlib import Path
from urllib.parse import urlparse

import click

from .expansion import BindingViolations, Expander, ExpansionError, MintRegistry, emit_term_requests
from .functional import emit_functional
from .manchester import emit_manchester
from .model import OntologyGraph
from .pattern import PatternError, parse_pattern
from .sources import (
    FetchError,
    SniffError,
    SourceLoadError,
    fetch_ontology,
    load_sources,
    sniff_format,
)
from .template import (
    CellSplitError,
    CsvError,
    DescriptorError,
    RangeKind,
    TableDoc,
    TemplateDescriptor,
    load_csv,
    load_descriptor,
)
from .validation import (
    Ambiguous,
    OutOfRange,
    RangeCache,
    Unknown,
    ValidationError,
    autocomplete,
    validate_table,
)


class InputError(click.ClickException):
    exit_code = 2


def _load_workspace(
    descriptor_path: str, table_path: str | None = None
) -> tuple[TemplateDescriptor, dict[str, OntologyGraph], TableDoc | None]:
    dpath = Path(descriptor_path)
    try:
        descriptor = load_descriptor(dpath)
    except FileNotFoundError:
        raise InputError(f"descriptor not found: {descriptor_path}")
    except DescriptorError as exc:
        raise InputError(str(exc))
    try:
        graphs, _ = load_sources(descriptor.ontology_sources, base_dir=dpath.parent)
    except SourceLoadError as exc:
        raise InputError(str(exc))
    table = None
    if table_path is not None:
        try:
            text = Path(table_path).read_text(encoding="utf-8")
        except FileNotFoundError:
            raise InputError(f"table not found: {table_path}")
        try:
            table = load_csv(text, descriptor)
        except CsvError as exc:
            raise InputError(str(exc))
    return descriptor, graphs, table


@click.group()
def main() -> None:
    """Populate ontology content through validated tables and patterns."""


@main.command()
@click.option("--descriptor", "descriptor_path", required=True, help="template descriptor JSON")
@click.option("--table", "table_path", required=True, help="populated CSV table")
def validate(descriptor_path: str, table_path: str) -> None:
    """Validate every cell; list issues and fail when any remain.

    Unknown values in mintable or free-text columns are expansion material,
    not issues, and do not affect the exit status.
    """
    descriptor, graphs, table = _load_workspace(descriptor_path, table_path)
    try:
        validated = validate_table(table, descriptor, graphs)
    except (ValidationError, CellSplitError) as exc:
        raise InputError(str(exc))
    issues = 0
    for row_index, row in enumerate(validated.statuses):
        for col_index, statuses in enumerate(row):
            spec = descriptor.column(table.header[col_index])
            assert spec is not None
            if spec.range.kind is RangeKind.FREE_TEXT or spec.mint_unknown:
                continue
            raw = table.rows[row_index][col_index]
            for status in statuses:
                if isinstance(status, (Unknown, OutOfRange, Ambiguous)):
                    issues += 1
                    kind = type(status).__name__
                    click.echo(f"row={row_index} column={spec.name!r} status={kind} text={raw!r}")
    click.echo(f"checked {table.row_count} rows: {issues} issue(s)")
    sys.exit(0 if issues == 0 else 1)


@main.command()
@click.option("--descriptor", "descriptor_path", required=True)
@click.option("--table", "table_path", required=True)
@click.option("--pattern", "pattern_paths", required=True, multiple=True, help="pattern file, repeatable")
@click.option("--binding", "binding_path", required=True, help="JSON map of variable to column")
@click.option("--registry", "registry_path", required=True, help="mint registry JSON (updated in place)")
@click.option("--out", "out_dir", required=True, help="output directory")
@click.option("--rows", default=None, help="comma-separated 0-based row indices (default: all)")
def expand(
    descriptor_path: str,
    table_path: str,
    pattern_paths: tuple[str, ...],
    binding_path: str,
    registry_path: str,
    out_dir: str,
    rows: str | None,
) -> None:
    """Expand patterns over the table into ontology.omn/.ofn plus report.csv."""
    import json

    descriptor, graphs, table = _load_workspace(descriptor_path, table_path)
    patterns = []
    for path in pattern_paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError:
            raise InputError(f"pattern not found: {path}")
        try:
            patterns.append(parse_pattern(text))
        except PatternError as exc:
            raise InputError(f"{path}: {exc}")
    try:
        binding = json.loads(Path(binding_path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"binding not found: {binding_path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{binding_path}: {exc}")
    if not isinstance(binding, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in binding.items()
    ):
        raise InputError(f"{binding_path}: binding must map variable names to column names")
    if not Path(registry_path).exists():
        raise InputError(f"registry not found: {registry_path}")
    try:
        registry = MintRegistry.load(Path(registry_path))
    except ExpansionError as exc:
        raise InputError(str(exc))
    row_selection = None
    if rows:
        try:
            row_selection = [int(part) for part in rows.split(",")]
        except ValueError:
            raise InputError(f"bad --rows value: {rows!r}")

    try:
        validated = validate_table(table, descriptor, graphs)
    except (ValidationError, CellSplitError) as exc:
        raise InputError(str(exc))
    expander = Expander(descriptor, graphs, registry)
    try:
        generated, report = expander.expand(
            patterns, [binding] * len(patterns), validated, rows=row_selection
        )
    except BindingViolations as exc:
        for violation in exc.violations:
            click.echo(violation, err=True)
        sys.exit(1)
    except ExpansionError as exc:
        raise InputError(str(exc))

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "ontology.omn").write_text(emit_manchester(generated), encoding="utf-8", newline="")
    (out / "ontology.ofn").write_text(emit_functional(generated), encoding="utf-8", newline="")
    (out / "report.csv").write_text(emit_term_requests(report), encoding="utf-8", newline="")
    registry.save(Path(registry_path))
    expanded = sum(1 for o in report.per_row.values() if o.expanded)
    skipped = len(report.per_row) - expanded
    click.echo(
        f"expanded {expanded} row(s), skipped {skipped}, "
        f"{len(generated.axioms)} axiom(s), {len(report.minted)} minted term(s)"
    )


@main.command()
@click.option("--url", required=True)
@click.option("--out", "out_path", required=True)
@click.option("--timeout", default=30.0, show_default=True)
def fetch(url: str, out_path: str, timeout: float) -> None:
    """Download an ontology document and report its sniffed format."""
    parsed = urlparse(url)
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise InputError(f"not a usable http(s) URL: {url}")
    try:
        text = fetch_ontology(url, timeout=timeout)
    except FetchError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    Path(out_path).write_text(text, encoding="utf-8")
    try:
        fmt = sniff_format(text).value
    except SniffError:
        fmt = "unrecognized"
    click.echo(fmt)


@main.command()
@click.option("--descriptor", "descriptor_path", required=True)
@click.option("--column", required=True)
@click.option("--query", "-q", default="")
@click.option("--limit", default=20, show_default=True)
def complete(descriptor_path: str, column: str, query: str, limit: int) -> None:
    """Print ranked completion candidates for a column."""
    descriptor, graphs, _ = _load_workspace(descriptor_path)
    spec = descriptor.column(column)
    if spec is None:
        raise InputError(f"unknown column {column!r}")
    cache = RangeCache(graphs)
    try:
        vset = cache.get(spec.range)
    except ValidationError as exc:
        raise InputError(str(exc))
    for iri, label in autocomplete(query, vset, limit):
        click.echo(f"{iri}\t{label}")


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--descriptor", "descriptor_path", required=True)
@click.option("--table", "table_path", default=None)
@click.option("--registry", "registry_path", default=None)
def serve(
    port: int, host: str, descriptor_path: str, table_path: str | None, registry_path: str | None
) -> None:
    """Run the HTTP service for the grid editor."""
    import uvicorn

    from .server import Session, create_app

    try:
        session = Session.open(
            Path(descriptor_path),
            Path(table_path) if table_path else None,
            Path(registry_path) if registry_path else None,
        )
    except (DescriptorError, CsvError, SourceLoadError, ExpansionError, FileNotFoundError) as exc:
        raise InputError(str(exc))
    uvicorn.run(create_app(session), host=host, port=port)


if __name__ == "__main__":
    main()
