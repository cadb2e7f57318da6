"""End-to-end enrichment over in-memory graphs."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from ..cube import CubeSchema, all_level_members, explicit_rollups, extract_schema, fact_members
from ..rdf import Graph
from .algorithms import (
    SpatialCatalog,
    detect_fact_level,
    detect_spatial_hs,
    discover_fact_level,
    discover_spatial_hs,
)
from .output import generate_output
from .schema import annotate_hierarchy_steps, define_spatial_fact_dsd
from .types import EnrichmentReport, EnrichSettings, RelationTriple, Tally


class PhaseError(RuntimeError):
    def __init__(self, phase: str, cause: Exception) -> None:
        super().__init__(f"{phase}: {cause}")
        self.phase = phase
        self.cause = cause


@dataclass
class EnrichResult:
    instance: Graph
    schema_graph: Graph
    schema: CubeSchema
    report: EnrichmentReport
    relations: dict = field(default_factory=dict)

    def all_relations(self) -> set[RelationTriple]:
        out: set[RelationTriple] = set()
        for rels in self.relations.values():
            out |= rels
        return out


def enrich(
    schema_graph: Graph,
    instance: Graph,
    settings: Optional[EnrichSettings] = None,
) -> EnrichResult:
    """extract -> hierarchical (detect, discover) -> factual (detect, discover)
    -> fact DSD -> hierarchy-step annotation -> output graphs."""
    settings = settings or EnrichSettings()
    report = EnrichmentReport()
    report.mode = {
        "geometry": settings.mode,
        "dispatch": settings.dispatch,
        "index_discover": settings.index_for(True),
        "polygon_agg": settings.polygon_agg,
        "strict": settings.strict,
    }
    tally = Tally()
    catalog = SpatialCatalog(instance, settings, tally)
    relations: dict[str, set[RelationTriple]] = {}

    def run(phase, fn, *args):
        before = tally.calls
        try:
            with report.timed(phase):
                rels = fn(*args, settings=settings, tally=tally, catalog=catalog)
        except Exception as exc:
            raise PhaseError(phase, exc) from exc
        relations[phase] = rels
        report.record(phase, rels, tally.calls - before)

    try:
        with report.timed("extract"):
            schema = extract_schema(schema_graph)
    except Exception as exc:
        raise PhaseError("extract", exc) from exc

    report.inputs = {
        "level_members": len(all_level_members(instance)),
        "facts": len(fact_members(instance)),
        "explicit_rollups": len(explicit_rollups(instance)),
        "hierarchy_steps": len(schema.steps),
    }

    run("detect_spatial_hs", detect_spatial_hs, instance)
    if settings.discover_hs:
        run("discover_spatial_hs", discover_spatial_hs, schema, instance)
    run("detect_fact_level", detect_fact_level, instance)
    if settings.discover_facts:
        run("discover_fact_level", discover_fact_level, schema, instance)

    hs_rels = relations.get("detect_spatial_hs", set()) | relations.get("discover_spatial_hs", set())
    fact_rels = relations.get("detect_fact_level", set()) | relations.get("discover_fact_level", set())

    try:
        with report.timed("define_spatial_fact_dsd"):
            if schema.dsd is not None:
                facts_graph = instance.union(r.to_rdf() for r in fact_rels)
                dsd = define_spatial_fact_dsd(
                    facts_graph, schema.dsd, settings.polygon_agg, settings.datatypes
                )
                schema = replace(schema, dsd=dsd)
    except Exception as exc:
        raise PhaseError("define_spatial_fact_dsd", exc) from exc

    with report.timed("annotate_hierarchy_steps"):
        schema = annotate_hierarchy_steps(schema, hs_rels, instance)

    with report.timed("generate_output"):
        inst_out, schema_out, report = generate_output(
            instance, schema_graph, schema, hs_rels | fact_rels, report
        )
    report.skipped = tally.issues.skipped_count()
    report.autoclosed = len(tally.issues.autoclosed)
    return EnrichResult(inst_out, schema_out, schema, report, relations)
