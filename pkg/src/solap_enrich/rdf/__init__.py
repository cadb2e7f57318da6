"""RDF terms, immutable graphs, Turtle/N-Triples I/O."""

from .graph import DEFAULT_PREFIXES, Graph, match
from .iso import isomorphic
from .terms import (
    RDF,
    XSD,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Term,
    Triple,
    make_triple,
    triple_key,
)
from .turtle import (
    RDF_TYPE,
    RdfSyntaxError,
    UnknownPrefixError,
    format_for_path,
    parse_rdf,
    serialize_rdf,
)

__all__ = [
    "DEFAULT_PREFIXES",
    "RDF",
    "RDF_TYPE",
    "XSD",
    "XSD_STRING",
    "BlankNode",
    "Graph",
    "Iri",
    "Literal",
    "RdfSyntaxError",
    "Term",
    "Triple",
    "UnknownPrefixError",
    "format_for_path",
    "isomorphic",
    "make_triple",
    "match",
    "parse_rdf",
    "serialize_rdf",
    "triple_key",
]
