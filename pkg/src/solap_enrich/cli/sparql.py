"""Minimal SPARQL 1.1 Protocol client for SELECT queries with JSON results."""

from __future__ import annotations

import json
import os
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..rdf import BlankNode, Graph, Iri, Literal, Term, Triple
from ..rdf.terms import XSD_STRING

RESULTS_JSON = "application/sparql-results+json"
ATTEMPTS = 3
BACKOFF_S = 1.0
TIMEOUT_ENV = "SOLAP_ENRICH_TIMEOUT_S"
_GET_LIMIT = 2000


class SparqlError(RuntimeError):
    pass


class SparqlNetworkError(SparqlError):
    pass


class SparqlHttpError(SparqlError):
    def __init__(self, status: int, body: str = "") -> None:
        super().__init__(f"endpoint answered HTTP {status}: {body[:200]}")
        self.status = status


class SparqlResultsError(SparqlError):
    pass


@dataclass
class SparqlBindings:
    variables: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def timeout_s() -> float:
    raw = os.environ.get(TIMEOUT_ENV, "").strip()
    if not raw:
        return 30.0
    try:
        value = float(raw)
    except ValueError as exc:
        raise SparqlError(f"{TIMEOUT_ENV} must be a number, got {raw!r}") from exc
    if value <= 0:
        raise SparqlError(f"{TIMEOUT_ENV} must be positive")
    return value


def _term(node: dict) -> Term:
    kind = node.get("type")
    value = node.get("value")
    if not isinstance(value, str):
        raise SparqlResultsError(f"binding without a string value: {node!r}")
    if kind == "uri":
        return Iri(value)
    if kind == "bnode":
        return BlankNode(value)
    if kind in ("literal", "typed-literal"):
        lang = node.get("xml:lang")
        if lang:
            return Literal(value, lang=lang)
        dt = node.get("datatype")
        return Literal(value, Iri(dt) if dt else XSD_STRING)
    raise SparqlResultsError(f"unknown binding type {kind!r}")


def parse_results(text: str) -> SparqlBindings:
    """Map a SPARQL JSON results document onto terms."""
    try:
        doc = json.loads(text)
        variables = tuple(doc["head"]["vars"])
        raw_rows = doc["results"]["bindings"]
    except (ValueError, KeyError, TypeError) as exc:
        raise SparqlResultsError(f"malformed results document: {exc}") from exc
    if not isinstance(raw_rows, list) or not all(isinstance(v, str) for v in variables):
        raise SparqlResultsError("malformed results document")
    declared = set(variables)
    rows = []
    for raw in raw_rows:
        if not isinstance(raw, dict):
            raise SparqlResultsError("binding row is not an object")
        stray = set(raw) - declared
        if stray:
            raise SparqlResultsError(f"row binds undeclared variables {sorted(stray)}")
        rows.append({name: _term(node) for name, node in raw.items()})
    return SparqlBindings(variables, rows)


def _request(endpoint: str, query: str) -> urllib.request.Request:
    headers = {"Accept": f"{RESULTS_JSON}, application/json;q=0.9"}
    encoded = urllib.parse.urlencode({"query": query})
    if len(endpoint) + len(encoded) < _GET_LIMIT:
        sep = "&" if "?" in endpoint else "?"
        return urllib.request.Request(f"{endpoint}{sep}{encoded}", headers=headers)
    headers["Content-Type"] = "application/x-www-form-urlencoded"
    return urllib.request.Request(endpoint, data=encoded.encode(), headers=headers, method="POST")


def sparql_select(
    endpoint: str,
    query: str,
    *,
    timeout: Optional[float] = None,
    sleep: Callable[[float], None] = time.sleep,
) -> SparqlBindings:
    """Run a SELECT query. Network failures are retried with 1 s, 2 s backoff."""
    timeout = timeout if timeout is not None else timeout_s()
    delay = BACKOFF_S
    last: Optional[Exception] = None
    for attempt in range(ATTEMPTS):
        try:
            with urllib.request.urlopen(_request(endpoint, query), timeout=timeout) as resp:
                body = resp.read().decode("utf-8")
                status = resp.status
        except urllib.error.HTTPError as exc:
            raise SparqlHttpError(exc.code, exc.read().decode("utf-8", "replace")) from exc
        except (urllib.error.URLError, TimeoutError, ConnectionError, OSError) as exc:
            last = exc
            if attempt + 1 < ATTEMPTS:
                sleep(delay)
                delay *= 2
            continue
        if status != 200:
            raise SparqlHttpError(status, body)
        return parse_results(body)
    raise SparqlNetworkError(f"{endpoint} unreachable after {ATTEMPTS} attempts: {last}")


def triples_query(graph: Optional[str], limit: int, offset: int) -> str:
    pattern = "?s ?p ?o"
    if graph:
        pattern = f"GRAPH <{graph}> {{ ?s ?p ?o }}"
    return (
        f"SELECT ?s ?p ?o WHERE {{ {pattern} }} ORDER BY ?s ?p ?o "
        f"LIMIT {limit} OFFSET {offset}"
    )


def fetch_graph(
    endpoint: str,
    graph: Optional[str] = None,
    page_size: int = 10000,
    select: Callable[[str, str], SparqlBindings] = sparql_select,
) -> Graph:
    """Materialise every triple of the endpoint (or one named graph) locally."""
    triples: list[Triple] = []
    offset = 0
    while True:
        page = select(endpoint, triples_query(graph, page_size, offset))
        for row in page.rows:
            s, p, o = row.get("s"), row.get("p"), row.get("o")
            if s is None or p is None or o is None:
                raise SparqlResultsError("triple row is missing ?s, ?p or ?o")
            if not isinstance(p, Iri) or isinstance(s, Literal):
                raise SparqlResultsError(f"not a valid triple: {s!r} {p!r} {o!r}")
            triples.append(Triple(s, p, o))
        if len(page.rows) < page_size:
            break
        offset += page_size
    return Graph(triples)
