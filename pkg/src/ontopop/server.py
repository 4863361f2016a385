"""HTTP/JSON service for the grid editor: template state, completion, cell
edits, validation and expansion, all backed by the same core operations as the
CLI so both produce identical output for equal inputs.

One descriptor+table per process. Reads run over the current snapshot; cell
edits and expansion are serialized through a single lock. Edits persist to the
table CSV only on /expand and /export/csv, not per keystroke.
"""
from __future__ import annotations

import threading
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .expansion import (
    BindingViolations,
    Expander,
    ExpansionError,
    ExpansionReport,
    MintRegistry,
    emit_term_requests,
)
from .functional import emit_functional
from .manchester import emit_manchester
from .model import OntologyGraph
from .pattern import PatternError, parse_pattern
from .sources import load_sources
from .template import (
    CellSplitError,
    CsvError,
    TableDoc,
    TemplateDescriptor,
    descriptor_to_dict,
    load_csv,
    load_descriptor,
    render_csv,
)
from .validation import (
    Ambiguous,
    CellStatus,
    Empty,
    OutOfRange,
    RangeCache,
    Resolved,
    Unknown,
    autocomplete,
    validate_cell,
    validate_table,
)

DEFAULT_COMPLETE_LIMIT = 20


def status_to_json(status: CellStatus) -> dict[str, Any]:
    if isinstance(status, Resolved):
        return {"kind": "Resolved", "iri": status.iri}
    if isinstance(status, OutOfRange):
        return {"kind": "OutOfRange", "iri": status.iri}
    if isinstance(status, Unknown):
        return {"kind": "Unknown", "text": status.text}
    if isinstance(status, Ambiguous):
        return {"kind": "Ambiguous", "candidates": list(status.candidates)}
    assert isinstance(status, Empty)
    return {"kind": "Empty"}


def report_to_json(report: ExpansionReport) -> dict[str, Any]:
    return {
        "perRow": {
            str(row): (
                {"outcome": "expanded", "axioms": outcome.axiom_count}
                if outcome.expanded
                else {"outcome": "skipped", "reason": outcome.reason}
            )
            for row, outcome in sorted(report.per_row.items())
        },
        "termRequests": [
            {"rawText": r.raw_text, "column": r.column, "row": r.row, "status": r.status}
            for r in report.term_requests
        ],
        "skippedActions": [
            {"row": s.row, "action": s.action_index, "missingVariable": s.missing_variable}
            for s in report.skipped_actions
        ],
    }


class Session:
    """Everything one service process works on: loaded graphs, the active
    template, the current table, and the mint registry."""

    def __init__(
        self,
        descriptor: TemplateDescriptor,
        graphs: dict[str, OntologyGraph],
        table: TableDoc,
        registry: MintRegistry,
        table_path: Optional[Path] = None,
        registry_path: Optional[Path] = None,
    ):
        self.descriptor = descriptor
        self.graphs = graphs
        self.table = table
        self.registry = registry
        self.table_path = table_path
        self.registry_path = registry_path
        self.cache = RangeCache(graphs)
        self.lock = threading.RLock()

    @classmethod
    def open(
        cls,
        descriptor_path: Path,
        table_path: Optional[Path] = None,
        registry_path: Optional[Path] = None,
    ) -> "Session":
        descriptor_path = Path(descriptor_path)
        descriptor = load_descriptor(descriptor_path)
        graphs, _ = load_sources(descriptor.ontology_sources, base_dir=descriptor_path.parent)
        if table_path is not None:
            table = load_csv(Path(table_path).read_text(encoding="utf-8"), descriptor)
        else:
            table = TableDoc(descriptor.column_names(), [])
        if registry_path is not None and Path(registry_path).exists():
            registry = MintRegistry.load(Path(registry_path))
        else:
            registry = MintRegistry("http://example.org/generated#", "term")
        return cls(
            descriptor,
            graphs,
            table,
            registry,
            table_path=Path(table_path) if table_path else None,
            registry_path=Path(registry_path) if registry_path else None,
        )

    def persist(self) -> None:
        if self.table_path is not None:
            self.table_path.write_text(render_csv(self.table), encoding="utf-8", newline="")
        if self.registry_path is not None:
            self.registry.save(self.registry_path)


def _error(status: int, message: str, **extra: Any) -> JSONResponse:
    return JSONResponse({"error": message, **extra}, status_code=status)


def create_app(session: Session) -> FastAPI:
    app = FastAPI(title="ontopop", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.get("/template")
    def template() -> Any:
        with session.lock:
            validated = validate_table(
                session.table, session.descriptor, session.graphs, session.cache
            )
            return {
                "descriptor": descriptor_to_dict(session.descriptor),
                "table": {"header": list(session.table.header), "rows": [list(r) for r in session.table.rows]},
                "statuses": [
                    [[status_to_json(s) for s in cell] for cell in row]
                    for row in validated.statuses
                ],
                "summary": validated.summary,
            }

    @app.get("/complete")
    def complete(column: str = "", q: str = "", limit: int = DEFAULT_COMPLETE_LIMIT) -> Any:
        spec = session.descriptor.column(column)
        if spec is None:
            return _error(404, f"unknown column {column!r}")
        if limit < 1:
            return _error(400, "limit must be at least 1")
        with session.lock:
            vset = session.cache.get(spec.range)
        candidates = autocomplete(q, vset, limit)
        return {"candidates": [{"iri": iri, "label": label} for iri, label in candidates]}

    @app.post("/cells")
    async def set_cell(request: Request) -> Any:
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "request body must be an object")
        row = body.get("row")
        column = body.get("column")
        text = body.get("text")
        if not isinstance(row, int) or isinstance(row, bool):
            return _error(400, "row must be an integer")
        if not isinstance(column, str):
            return _error(400, "column must be a string")
        if not isinstance(text, str):
            return _error(400, "text must be a string")
        spec = session.descriptor.column(column)
        if spec is None:
            return _error(404, f"unknown column {column!r}")
        with session.lock:
            if row < 0 or row > session.table.row_count:
                return _error(400, f"row {row} out of range (table has {session.table.row_count} rows)")
            if row == session.table.row_count:
                session.table.rows.append([""] * session.table.col_count)
            session.table.set_cell(row, column, text)
            vset = session.cache.get(spec.range)
            try:
                statuses = validate_cell(text, spec, vset, session.graphs)
            except CellSplitError as exc:
                return _error(400, str(exc))
        return {
            "row": row,
            "column": column,
            "statuses": [status_to_json(s) for s in statuses],
        }

    @app.post("/validate")
    def validate() -> Any:
        with session.lock:
            validated = validate_table(
                session.table, session.descriptor, session.graphs, session.cache
            )
            return {
                "summary": validated.summary,
                "statuses": [
                    [[status_to_json(s) for s in cell] for cell in row]
                    for row in validated.statuses
                ],
            }

    @app.post("/expand")
    async def expand(request: Request) -> Any:
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            return _error(400, "request body must be an object")
        patterns_raw = body.get("patterns")
        binding = body.get("binding")
        rows = body.get("rows")
        if not isinstance(patterns_raw, list) or not patterns_raw or not all(
            isinstance(p, str) for p in patterns_raw
        ):
            return _error(400, "patterns must be a non-empty list of pattern texts")
        if not isinstance(binding, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in binding.items()
        ):
            return _error(400, "binding must map variable names to column names")
        if rows is not None and (
            not isinstance(rows, list)
            or not all(isinstance(r, int) and not isinstance(r, bool) for r in rows)
        ):
            return _error(400, "rows must be a list of row indices")
        try:
            patterns = [parse_pattern(text) for text in patterns_raw]
        except PatternError as exc:
            return _error(400, f"pattern error: {exc}")
        with session.lock:
            try:
                validated = validate_table(
                    session.table, session.descriptor, session.graphs, session.cache
                )
                expander = Expander(session.descriptor, session.graphs, session.registry)
                generated, report = expander.expand(
                    patterns, [binding] * len(patterns), validated, rows=rows
                )
            except BindingViolations as exc:
                return _error(409, "pattern check violations", violations=exc.violations)
            except (ExpansionError, CsvError) as exc:
                return _error(400, str(exc))
            session.persist()
        return {
            "manchester": emit_manchester(generated),
            "functional": emit_functional(generated),
            "report": emit_term_requests(report),
            "minted": [
                {"label": m.label, "iri": m.iri, "row": m.row, "column": m.column}
                for m in report.minted
            ],
            "summary": report_to_json(report),
        }

    @app.get("/export/csv")
    def export_csv() -> Any:
        with session.lock:
            text = render_csv(session.table)
            session.persist()
        return PlainTextResponse(text, media_type="text/csv; charset=utf-8")

    return app
