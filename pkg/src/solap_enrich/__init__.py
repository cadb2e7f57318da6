"""Spatial enrichment of QB4OLAP cubes into QB4SOLAP cubes."""

from .enrich import EnrichSettings, enrich
from .rdf import Graph, parse_rdf, serialize_rdf

__version__ = "0.1.0"

__all__ = ["EnrichSettings", "Graph", "enrich", "parse_rdf", "serialize_rdf", "__version__"]
