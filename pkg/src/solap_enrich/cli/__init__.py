"""Command-line shell around the enrichment pipeline."""

from .main import RunConfig, main, run_enrich, run_validate
from .sparql import SparqlBindings, sparql_select

__all__ = ["RunConfig", "SparqlBindings", "main", "run_enrich", "run_validate", "sparql_select"]
