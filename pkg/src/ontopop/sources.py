"""Ontology document sources: local files or URLs, with format sniffing and fetch."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

import requests

from .functional import parse_functional
from .model import OntologyGraph
from .obo import ParseDiagnostic, has_errors, parse_obo


class SourceFormat(Enum):
    OBO = "OBO"
    FUNCTIONAL = "FunctionalSyntax"
    AUTO = "Auto"


@dataclass(frozen=True)
class OntologySource:
    id: str
    origin: str  # local path or http(s) URL
    format: SourceFormat = SourceFormat.AUTO

    def is_remote(self) -> bool:
        return self.origin.startswith(("http://", "https://"))


class SniffError(Exception):
    pass


def sniff_format(text: str) -> SourceFormat:
    """OBO documents announce themselves with format-version or a [Term] stanza;
    functional syntax with Prefix( or Ontology(. Anything else is an error, not
    a guess."""
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line:
            continue
        if line.startswith("format-version:") or line == "[Term]":
            return SourceFormat.OBO
        if line.startswith(("Prefix(", "Ontology(")):
            return SourceFormat.FUNCTIONAL
    raise SniffError("document matches neither OBO nor functional syntax")


class FetchError(Exception):
    """Base for remote fetch failures."""


class FetchNetworkError(FetchError):
    pass


class FetchTimeout(FetchError):
    pass


class FetchHttpError(FetchError):
    def __init__(self, status: int, url: str):
        super().__init__(f"HTTP {status} fetching {url}")
        self.status = status


class FetchTooLarge(FetchError):
    pass


DEFAULT_SIZE_CAP = 64 * 1024 * 1024


def fetch_ontology(url: str, timeout: float = 30.0, size_cap: int = DEFAULT_SIZE_CAP) -> str:
    """GET the document body as UTF-8 text. Redirects are followed (up to 5);
    network trouble, timeouts, bad statuses and oversize bodies are reported
    as distinct errors."""
    if not url.startswith(("http://", "https://")):
        raise ValueError(f"not an http(s) URL: {url}")
    session = requests.Session()
    session.max_redirects = 5
    try:
        response = session.get(
            url,
            timeout=timeout,
            stream=True,
            headers={"Accept": "text/plain, application/rdf+xml;q=0.1"},
        )
    except requests.Timeout as exc:
        raise FetchTimeout(f"timed out fetching {url}") from exc
    except requests.RequestException as exc:
        raise FetchNetworkError(f"network error fetching {url}: {exc}") from exc
    with response:
        if response.status_code != 200:
            raise FetchHttpError(response.status_code, url)
        chunks = []
        total = 0
        for chunk in response.iter_content(chunk_size=65536):
            total += len(chunk)
            if total > size_cap:
                raise FetchTooLarge(f"document exceeds {size_cap} bytes")
            chunks.append(chunk)
    return b"".join(chunks).decode("utf-8")


class SourceLoadError(Exception):
    def __init__(self, source: OntologySource, message: str):
        super().__init__(f"source {source.id!r} ({source.origin}): {message}")
        self.source = source


def read_source(source: OntologySource, base_dir: Optional[Path] = None, timeout: float = 30.0) -> str:
    if source.is_remote():
        return fetch_ontology(source.origin, timeout=timeout)
    path = Path(source.origin)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    return path.read_text(encoding="utf-8")


def parse_source_text(
    source: OntologySource, text: str
) -> tuple[OntologyGraph, list[ParseDiagnostic]]:
    fmt = source.format
    if fmt is SourceFormat.AUTO:
        try:
            fmt = sniff_format(text)
        except SniffError as exc:
            raise SourceLoadError(source, str(exc)) from None
    if fmt is SourceFormat.OBO:
        return parse_obo(text, graph_id=source.id)
    return parse_functional(text, graph_id=source.id)


def load_sources(
    sources: Iterable[OntologySource],
    base_dir: Optional[Path] = None,
    timeout: float = 30.0,
) -> tuple[dict[str, OntologyGraph], list[tuple[str, ParseDiagnostic]]]:
    """Load every source into a graph keyed by source id.

    Returns (graphs, diagnostics tagged with source id). Parse errors and
    unreadable files raise SourceLoadError; warnings are passed through.
    """
    graphs: dict[str, OntologyGraph] = {}
    diagnostics: list[tuple[str, ParseDiagnostic]] = []
    for source in sources:
        try:
            text = read_source(source, base_dir=base_dir, timeout=timeout)
        except (OSError, FetchError) as exc:
            raise SourceLoadError(source, str(exc)) from exc
        graph, diags = parse_source_text(source, text)
        diagnostics.extend((source.id, d) for d in diags)
        if has_errors(diags):
            first = next(d for d in diags if d.severity == "error")
            raise SourceLoadError(source, str(first))
        graphs[source.id] = graph
    return graphs, diagnostics
