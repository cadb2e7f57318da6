from pathlib import Path

import pytest

from solap_enrich.geometry import GeometrySet, parse_wkt
from solap_enrich.rdf import Graph, Iri, parse_rdf

FIXTURES = Path(__file__).parent / "fixtures"

GFS = "http://extbi.cs.aau.dk/GeoFarmHerdState/schema/"
GFSI = "http://extbi.cs.aau.dk/GeoFarmHerdState/instance/"


def gfs(name: str) -> Iri:
    return Iri(GFS + name)


def gfsi(name: str) -> Iri:
    return Iri(GFSI + name)


def load(name: str) -> Graph:
    return parse_rdf((FIXTURES / name).read_text(encoding="utf-8"), "turtle")


def gs(*wkts: str, owner: str = "urn:x-test") -> GeometrySet:
    return GeometrySet.of(*(parse_wkt(w) for w in wkts), owner=owner)


def square(x0: float, y0: float, x1: float, y1: float) -> str:
    return f"POLYGON(({x0} {y0},{x1} {y0},{x1} {y1},{x0} {y1},{x0} {y0}))"


@pytest.fixture
def fixture_graph():
    return load


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
        terminalreporter.write_line(line)
