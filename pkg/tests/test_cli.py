import json
import re
import threading
import time
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from conftest import FIXTURES, gfsi, load
from solap_enrich.cli import RunConfig, main, run_enrich, run_validate, sparql_select
from solap_enrich.cli.main import ConfigError, cube_stats, run_gen
from solap_enrich.cli.sparql import (
    SparqlHttpError,
    SparqlNetworkError,
    SparqlResultsError,
    fetch_graph,
    parse_results,
    timeout_s,
)
from solap_enrich.oracle import load_truth
from solap_enrich.rdf import BlankNode, Graph, Iri, Literal, parse_rdf, serialize_rdf
from solap_enrich.vocab import SKOS_BROADER

XSD_INT = Iri("http://www.w3.org/2001/XMLSchema#integer")


def _binding(term):
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    out = {"type": "literal", "value": term.lexical}
    if term.lang:
        out["xml:lang"] = term.lang
    elif term.datatype is not None:
        out["datatype"] = term.datatype.value
    return out


class _Handler(BaseHTTPRequestHandler):
    graph: Graph = Graph()
    hits: dict = {}

    def log_message(self, *args):
        pass

    def _query(self) -> str:
        parsed = urllib.parse.urlparse(self.path)
        params = urllib.parse.parse_qs(parsed.query)
        if self.command == "POST":
            body = self.rfile.read(int(self.headers.get("Content-Length", 0))).decode()
            params.update(urllib.parse.parse_qs(body))
        return params.get("query", [""])[0]

    def _send(self, status, body, ctype="application/sparql-results+json"):
        data = body.encode()
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _answer(self):
        route = urllib.parse.urlparse(self.path).path
        self.hits[route] = self.hits.get(route, 0) + 1
        query = self._query()
        if route == "/broken":
            return self._send(500, "boom", "text/plain")
        if route == "/garbage":
            return self._send(200, "{not json")
        if route == "/slow":
            time.sleep(1.0)
            return self._send(200, json.dumps({"head": {"vars": []}, "results": {"bindings": []}}))
        if route == "/typed":
            doc = {"head": {"vars": ["id"]}, "results": {"bindings": [
                {"id": {"type": "typed-literal", "value": "8648", "datatype": XSD_INT.value}}]}}
            return self._send(200, json.dumps(doc))
        if route == "/empty":
            return self._send(200, json.dumps({"head": {"vars": ["s"]}, "results": {"bindings": []}}))
        triples = self.graph.sorted_triples()
        if SKOS_BROADER.value in query or "skos:broader" in query:
            rows = [{"s": _binding(t.subject), "o": _binding(t.object)}
                    for t in triples if t.predicate == SKOS_BROADER]
            return self._send(200, json.dumps({"head": {"vars": ["s", "o"]}, "results": {"bindings": rows}}))
        limit = int(re.search(r"LIMIT (\d+)", query).group(1))
        offset = int(re.search(r"OFFSET (\d+)", query).group(1))
        rows = [{"s": _binding(s), "p": _binding(p), "o": _binding(o)}
                for s, p, o in triples[offset:offset + limit]]
        return self._send(200, json.dumps({"head": {"vars": ["s", "p", "o"]}, "results": {"bindings": rows}}))

    do_GET = _answer
    do_POST = _answer


@pytest.fixture
def endpoint():
    merged = Graph(load("gfhs_schema.ttl").triples | load("parish_rollups.ttl").triples)
    handler = type("H", (_Handler,), {"graph": merged, "hits": {}})
    server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_port}", handler
    finally:
        server.shutdown()
        server.server_close()


def _closed_port_url():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    port = server.server_port
    server.server_close()
    return f"http://127.0.0.1:{port}/sparql"


# -- SPARQL client -------------------------------------------------------------------


def test_zero_rows(endpoint):
    url, _ = endpoint
    res = sparql_select(url + "/empty", "SELECT ?s WHERE { ?s ?p ?o } LIMIT 0")
    assert res.variables == ("s",) and len(res) == 0


def test_broader_filter_returns_two_rows(endpoint):
    url, _ = endpoint
    query = ("PREFIX skos: <http://www.w3.org/2004/02/skos/core#> "
             "SELECT ?s ?o WHERE { ?s skos:broader ?o }")
    res = sparql_select(url + "/sparql", query)
    assert len(res) == 2
    assert {row["o"] for row in res} == {gfsi("water_3710"), gfsi("water_159")}


def test_typed_literal(endpoint):
    url, _ = endpoint
    (row,) = sparql_select(url + "/typed", "SELECT ?id WHERE {}").rows
    assert row["id"] == Literal("8648", XSD_INT)


def test_http_error_is_not_retried(endpoint):
    url, handler = endpoint
    with pytest.raises(SparqlHttpError) as info:
        sparql_select(url + "/broken", "SELECT * {}", sleep=lambda s: None)
    assert info.value.status == 500
    assert handler.hits["/broken"] == 1


def test_malformed_document(endpoint):
    url, _ = endpoint
    with pytest.raises(SparqlResultsError):
        sparql_select(url + "/garbage", "SELECT * {}")


def test_undeclared_variable_is_rejected():
    doc = {"head": {"vars": ["a"]}, "results": {"bindings": [{"b": {"type": "uri", "value": "urn:x"}}]}}
    with pytest.raises(SparqlResultsError):
        parse_results(json.dumps(doc))


def test_network_failure_retries_with_backoff():
    delays = []
    with pytest.raises(SparqlNetworkError):
        sparql_select(_closed_port_url(), "SELECT * {}", timeout=1, sleep=delays.append)
    assert delays == [1.0, 2.0]


def test_timeout_from_environment(endpoint, monkeypatch):
    url, handler = endpoint
    monkeypatch.setenv("SOLAP_ENRICH_TIMEOUT_S", "0.2")
    assert timeout_s() == 0.2
    with pytest.raises(SparqlNetworkError):
        sparql_select(url + "/slow", "SELECT * {}", sleep=lambda s: None)
    assert handler.hits["/slow"] == 3
    monkeypatch.delenv("SOLAP_ENRICH_TIMEOUT_S")
    assert timeout_s() == 30.0


def test_long_query_is_posted(endpoint):
    url, _ = endpoint
    query = "SELECT ?s WHERE { ?s ?p ?o } # " + "x" * 3000
    assert len(sparql_select(url + "/empty", query)) == 0


def test_fetch_graph_pages(endpoint):
    url, handler = endpoint
    g = fetch_graph(url + "/sparql", page_size=7)
    assert g.triples == handler.graph.triples
    assert handler.hits["/sparql"] == len(handler.graph) // 7 + 1


# -- enrich / validate / gen / stats -------------------------------------------------


def _files(*names):
    return tuple(str(FIXTURES / n) for n in names)


def test_run_enrich_from_files(tmp_path):
    cfg = RunConfig(inputs=_files("gfhs_schema.ttl", "farm_facts.ttl"), out=str(tmp_path))
    assert run_enrich(cfg) == 0
    for name in ("enriched-instance.ttl", "enriched-schema.ttl", "report.json", "report.csv",
                 "figures/relations.png", "figures/map.png"):
        assert (tmp_path / name).is_file(), name
    report = json.loads((tmp_path / "report.json").read_text())
    assert {"timings_s", "skipped", "mode", "detect_fact_level"} <= set(report)
    inp = Graph(load("gfhs_schema.ttl").triples | load("farm_facts.ttl").triples)
    out = parse_rdf((tmp_path / "enriched-instance.ttl").read_text())
    instance_in = len(inp) - len(load("gfhs_schema.ttl"))
    assert sum(report["totals"].values()) == report["new_triples"] == len(out) - instance_in


def test_run_enrich_from_endpoint(endpoint, tmp_path):
    url, _ = endpoint
    assert run_enrich(RunConfig(endpoint=url + "/sparql", out=str(tmp_path), figures=False)) == 0
    out = parse_rdf((tmp_path / "enriched-instance.ttl").read_text())
    parish = gfsi("parish_8648")
    from solap_enrich.geometry import TopologicalRelation
    assert set(out.objects(parish, TopologicalRelation.INTERSECTS.predicate)) == {
        gfsi("water_3710"), gfsi("water_159")}


def test_malformed_wkt_exit_codes(tmp_path, capsys):
    files = _files("gfhs_schema.ttl", "parish_malformed_wkt.ttl")
    assert run_enrich(RunConfig(inputs=files, out=str(tmp_path / "lenient"), figures=False)) == 2
    report = json.loads((tmp_path / "lenient" / "report.json").read_text())
    assert report["skipped"] >= 1
    assert run_enrich(RunConfig(inputs=files, out=str(tmp_path / "strict"), strict=True)) == 1
    assert "error [detect_spatial_hs]" in capsys.readouterr().err
    assert not (tmp_path / "strict" / "report.json").exists()


def test_unreadable_input_is_fatal(tmp_path, capsys):
    bad = tmp_path / "bad.ttl"
    bad.write_text("this is not turtle")
    assert run_enrich(RunConfig(inputs=(str(bad),), out=str(tmp_path / "o"))) == 1
    assert "error [load]" in capsys.readouterr().err


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig()
    with pytest.raises(ConfigError):
        RunConfig(inputs=("a.ttl",), endpoint="http://x")
    with pytest.raises(ConfigError):
        RunConfig(inputs=("a.ttl",), graph="http://g")
    with pytest.raises(ConfigError):
        RunConfig(inputs=("a.ttl",), datatypes=())
    assert main(["enrich", "--input", "x.ttl", "--graph", "http://g"]) == 1


def _gen(tmp_path, spec, mode="exact", name="syn"):
    out = tmp_path / name
    assert run_gen(json.dumps(spec), str(out), mode=mode) == 0
    return out


SMALL = {"rows": 10, "cols": 10, "partitions": 4, "facts": 200, "overlap": 0.0, "seed": 1}


def test_gen_enrich_validate_round(tmp_path, capsys):
    syn = _gen(tmp_path, SMALL)
    out = tmp_path / "out"
    rc = main(["enrich", "--input", str(syn / "schema.ttl"), str(syn / "instance.ttl"),
               "--out", str(out), "--jobs", "1"])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    truth = load_truth((syn / "truth.json").read_text())
    from solap_enrich.enrich import count_by_relation
    assert {k: v for k, v in report["totals"].items() if v} == {
        k: v for k, v in count_by_relation(truth).items() if v}
    capsys.readouterr()
    assert main(["validate", "--out", str(out), "--truth", str(syn / "truth.json")]) == 0
    printed = capsys.readouterr().out
    assert "match" in printed and "MISMATCH" not in printed
    rows = (out / "validate.csv").read_text().splitlines()
    assert all(line.split(",")[3] == "0" for line in rows[1:])
    assert (out / "figures" / "validate.png").is_file()


def test_validate_detects_extra_truth_relation(tmp_path, capsys):
    syn = _gen(tmp_path, SMALL)
    out = tmp_path / "out"
    assert run_enrich(RunConfig(inputs=(str(syn / "schema.ttl"), str(syn / "instance.ttl")),
                                out=str(out), figures=False)) == 0
    rows = json.loads((syn / "truth.json").read_text())
    rows.append({"s": "http://example.org/syn/cell_0_0", "rel": "within",
                 "o": "http://example.org/syn/partition_1_1"})
    bad = tmp_path / "bad-truth.json"
    bad.write_text(json.dumps(rows))
    capsys.readouterr()
    assert run_validate(str(out), str(bad), figures_on=False) == 1
    text = capsys.readouterr().out
    within = next(line for line in text.splitlines() if line.split()[0] == "within")
    assert within.split()[3] == "-1"
    assert "MISMATCH" in text


def test_bbox_run_inflates_within(tmp_path, capsys):
    spec = {"rows": 12, "cols": 12, "partitions": 4, "facts": 100, "overlap": 0.3, "seed": 3, "multipart": True}
    syn = _gen(tmp_path, spec)
    files = (str(syn / "schema.ttl"), str(syn / "instance.ttl"))
    counts = {}
    for mode in ("exact", "bbox"):
        out = tmp_path / mode
        assert run_enrich(RunConfig(inputs=files, out=str(out), mode=mode, figures=False)) == 0
        capsys.readouterr()
        rc = run_validate(str(out), str(syn / "truth.json"), figures_on=False)
        text = capsys.readouterr().out
        counts[mode] = int(next(l for l in text.splitlines() if l.split()[0] == "within").split()[2])
        assert rc == (0 if mode == "exact" else 1)
    assert counts["bbox"] > counts["exact"]


def test_gen_is_deterministic_and_seed_overrides(tmp_path):
    a = _gen(tmp_path, SMALL, name="a")
    b = _gen(tmp_path, SMALL, name="b")
    for f in ("schema.ttl", "instance.ttl", "truth.json"):
        assert (a / f).read_bytes() == (b / f).read_bytes()
    assert main(["gen", "--spec", json.dumps(SMALL), "--seed", "0x2", "--out", str(tmp_path / "c")]) == 0
    assert (tmp_path / "c" / "instance.ttl").read_bytes() != (a / "instance.ttl").read_bytes()


def test_gen_rejects_bad_spec(tmp_path):
    assert run_gen('{"rows": 0}', str(tmp_path / "x")) == 1
    assert run_gen(str(tmp_path / "missing.json"), str(tmp_path / "x")) == 1


def test_stats(capsys):
    assert main(["stats", "--input", *_files("gfhs_schema.ttl", "farm_facts.ttl")]) == 0
    text = capsys.readouterr().out
    assert re.search(r"hierarchy_steps\s+1", text)
    assert re.search(r"facts\s+1", text)
    schema_g = load("gfhs_schema.ttl")
    stats = cube_stats(schema_g, load("farm_facts.ttl"))
    assert stats == {"dimensions": 2, "hierarchies": 2, "levels": 3, "hierarchy_steps": 1,
                     "level_members": 3, "facts": 1}


def test_end_to_end_determinism(tmp_path):
    syn = _gen(tmp_path, {**SMALL, "overlap": 0.2})
    files = [str(syn / "schema.ttl"), str(syn / "instance.ttl")]
    for name in ("r1", "r2"):
        assert main(["enrich", "--input", *files, "--out", str(tmp_path / name), "--no-figures"]) == 0
    for f in ("enriched-instance.ttl", "enriched-schema.ttl"):
        assert (tmp_path / "r1" / f).read_bytes() == (tmp_path / "r2" / f).read_bytes()
    r1 = json.loads((tmp_path / "r1" / "report.json").read_text())
    r2 = json.loads((tmp_path / "r2" / "report.json").read_text())
    r1.pop("timings_s"), r2.pop("timings_s")
    assert r1 == r2


def test_prefixed_datatype_flag(tmp_path):
    files = _files("gfhs_schema.ttl", "farm_facts.ttl")
    # accepting only wktLiteral hides the spatialLiteral values, so nothing is related
    rc = main(["enrich", "--input", *files, "--out", str(tmp_path), "--datatype", "geo:wktLiteral",
               "--no-figures"])
    assert rc == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["new_triples"] == 0


def test_ntriples_output_roundtrip(tmp_path):
    g = load("farm_facts.ttl")
    p = tmp_path / "facts.nt"
    p.write_text(serialize_rdf(g, "ntriples"))
    assert main(["stats", "--input", str(p)]) == 0
