"""Schema-side enrichment: fact DSD redefinition and hierarchy-step annotation."""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable

from ..cube import CubeSchema, FactSchemaDef, MeasureComponent, fact_members
from ..geometry import GeometryKind, get_spatial_values
from ..rdf import Graph, Iri
from ..vocab import (
    DEFAULT_SPATIAL_DATATYPES,
    QB4O_MEMBER_OF,
    QB4SO_CENTROID,
    QB4SO_CONVEX_HULL,
    QB4SO_MBR,
    QB4SO_UNION,
)
from .types import RelationTriple, UnknownLevelComponent

_POLYGON_AGG = {"union": QB4SO_UNION, "centroid": QB4SO_CENTROID, "mbr": QB4SO_MBR}


def spatial_aggregate(kind: GeometryKind, polygon_agg: str = "union") -> Iri:
    if kind is GeometryKind.POINT:
        return QB4SO_CONVEX_HULL
    if kind is GeometryKind.LINE:
        return QB4SO_UNION
    return _POLYGON_AGG[polygon_agg]


def define_spatial_fact_dsd(
    enriched_facts: Graph,
    dsd: FactSchemaDef,
    polygon_agg: str = "union",
    datatypes: Iterable[Iri] = DEFAULT_SPATIAL_DATATYPES,
) -> FactSchemaDef:
    """Annotate level components with observed relations and spatial measures
    with an aggregate function.

    Only relations towards members the fact links through a level property are
    attributed to that level's component; relations found by discovery toward
    unlinked members (for instance N:M parents) have no component to land on.
    """
    datatypes = frozenset(datatypes)
    level_rels: dict[Iri, set] = {}
    measure_kinds: dict[Iri, set] = {}
    for fact in fact_members(enriched_facts):
        member_to_level = {m: lvl for lvl, ms in fact.level_links.items() for m in ms}
        for rel, member in fact.topo_links:
            level = member_to_level.get(member)
            if level is None:
                continue
            if dsd.level_component(level) is None:
                raise UnknownLevelComponent(
                    f"{fact.iri.value} relates to level {level.value}, which the DSD lacks"
                )
            level_rels.setdefault(level, set()).add(rel)
        for gs in get_spatial_values(fact.iri, fact.measures, datatypes):
            measure_kinds.setdefault(gs.attribute, set()).add(gs.kind)

    levels = tuple(
        replace(c, topo_rels=c.topo_rels | frozenset(level_rels.get(c.level, ())))
        for c in dsd.levels
    )
    measures = list(dsd.measures)
    for measure, kinds in sorted(measure_kinds.items(), key=lambda kv: kv[0].value):
        agg = spatial_aggregate(max(kinds, key=lambda k: k.dim), polygon_agg)
        for i, comp in enumerate(measures):
            if comp.measure == measure:
                if agg not in comp.aggregate_functions:
                    measures[i] = replace(comp, aggregate_functions=comp.aggregate_functions + (agg,))
                break
        else:
            measures.append(MeasureComponent(measure, (agg,)))
    measures.sort(key=lambda c: c.measure.value)
    return replace(dsd, levels=levels, measures=tuple(measures))


def annotate_hierarchy_steps(
    schema: CubeSchema, relations: Iterable[RelationTriple], instance: Graph
) -> CubeSchema:
    """Record on each step the relations seen between its child and parent members."""
    levels_of: dict[Iri, set] = {}
    for s, _, lvl in instance.match(None, QB4O_MEMBER_OF, None):
        levels_of.setdefault(s, set()).add(lvl)
    seen: dict[tuple[Iri, Iri], set] = {}
    for r in relations:
        for lc in levels_of.get(r.subject, ()):
            for lp in levels_of.get(r.object, ()):
                seen.setdefault((lc, lp), set()).add(r.relation)
    steps = []
    for step in schema.steps:
        found = seen.get((step.child_level, step.parent_level))
        steps.append(replace(step, topo_rels=step.topo_rels | frozenset(found)) if found else step)
    return schema.with_steps(steps)
