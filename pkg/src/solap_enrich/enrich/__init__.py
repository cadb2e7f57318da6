"""Enrichment algorithms, schema redefinition and output assembly."""

from .algorithms import (
    SpatialCatalog,
    default_jobs,
    detect_fact_level,
    detect_spatial_hs,
    discover_fact_level,
    discover_spatial_hs,
    evaluate_pairs,
    fact_target_levels,
    level_pairs,
    relate_members,
)
from .output import generate_output
from .pipeline import EnrichResult, PhaseError, enrich
from .schema import annotate_hierarchy_steps, define_spatial_fact_dsd, spatial_aggregate
from .types import (
    EMITTED,
    INDEX_CHOICES,
    PHASES,
    POLYGON_AGGREGATES,
    EnrichmentReport,
    EnrichSettings,
    RelationTriple,
    Tally,
    UnknownLevelComponent,
    count_by_relation,
    sorted_relations,
)

__all__ = [
    "EMITTED",
    "INDEX_CHOICES",
    "PHASES",
    "POLYGON_AGGREGATES",
    "EnrichResult",
    "EnrichSettings",
    "EnrichmentReport",
    "PhaseError",
    "RelationTriple",
    "SpatialCatalog",
    "Tally",
    "UnknownLevelComponent",
    "annotate_hierarchy_steps",
    "count_by_relation",
    "default_jobs",
    "define_spatial_fact_dsd",
    "detect_fact_level",
    "detect_spatial_hs",
    "discover_fact_level",
    "discover_spatial_hs",
    "enrich",
    "evaluate_pairs",
    "fact_target_levels",
    "generate_output",
    "level_pairs",
    "relate_members",
    "sorted_relations",
    "spatial_aggregate",
]
