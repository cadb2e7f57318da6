"""Assemble the enriched instance and schema graphs."""

from __future__ import annotations

from typing import Iterable

from ..cube import CubeSchema, skolem_label
from ..rdf import BlankNode, Graph, Term, Triple
from ..vocab import (
    PREFIXES,
    QB4O_CHILD_LEVEL,
    QB4O_HIERARCHY_STEP,
    QB4O_IN_HIERARCHY,
    QB4O_LEVEL,
    QB4O_PARENT_LEVEL,
    QB4O_PC_CARDINALITY,
    QB4O_AGGREGATE_FUNCTION,
    QB4SO_PC_TOPO_REL,
    QB4SO_TOPOLOGICAL_RELATION,
    QB_COMPONENT,
    QB_MEASURE,
    RDF_TYPE,
)
from .types import EMITTED, EnrichmentReport, RelationTriple, count_by_relation


def _merged_prefixes(*graphs: Graph) -> dict[str, str]:
    out: dict[str, str] = {}
    for g in graphs:
        for k, v in g.prefixes.items():
            out.setdefault(k, v)
    taken = set(out.values())
    for k, v in PREFIXES.items():
        if k not in out and v not in taken:
            out[k] = v
    return out


def _schema_annotations(schema: CubeSchema) -> tuple[list[Triple], dict[BlankNode, BlankNode]]:
    """Triples to add plus a relabeling of step and component blank nodes."""
    add: list[Triple] = []
    relabel: dict[BlankNode, BlankNode] = {}

    for step in schema.steps:
        node: Term = step.node
        key = skolem_label("hs", step.hierarchy, step.child_level, step.parent_level)
        if node is None:
            node = key
            add += [
                Triple(node, RDF_TYPE, QB4O_HIERARCHY_STEP),
                Triple(node, QB4O_IN_HIERARCHY, step.hierarchy),
                Triple(node, QB4O_CHILD_LEVEL, step.child_level),
                Triple(node, QB4O_PARENT_LEVEL, step.parent_level),
            ]
            if step.cardinality is not None:
                add.append(Triple(node, QB4O_PC_CARDINALITY, step.cardinality.iri))
        elif isinstance(node, BlankNode) and node not in relabel:
            relabel[node] = key
        for rel in sorted(step.topo_rels):
            add.append(Triple(node, QB4SO_PC_TOPO_REL, rel.schema_iri))

    dsds = [schema.dsd] if schema.dsd is not None else []
    for dsd in dsds + list(schema.extra_dsds):
        for comp in dsd.levels:
            node = comp.node
            key = skolem_label("comp", dsd.iri, comp.level)
            if node is None:
                node = key
                add += [Triple(dsd.iri, QB_COMPONENT, node), Triple(node, QB4O_LEVEL, comp.level)]
            elif isinstance(node, BlankNode) and node not in relabel:
                relabel[node] = key
            for rel in sorted(comp.topo_rels):
                add.append(Triple(node, QB4SO_TOPOLOGICAL_RELATION, rel.schema_iri))
        for comp in dsd.measures:
            node = comp.node
            key = skolem_label("comp", dsd.iri, comp.measure)
            if node is None:
                node = key
                add += [Triple(dsd.iri, QB_COMPONENT, node), Triple(node, QB_MEASURE, comp.measure)]
            elif isinstance(node, BlankNode) and node not in relabel:
                relabel[node] = key
            for agg in comp.aggregate_functions:
                add.append(Triple(node, QB4O_AGGREGATE_FUNCTION, agg))
    return add, _dedupe_labels(relabel)


def _dedupe_labels(relabel: dict[BlankNode, BlankNode]) -> dict[BlankNode, BlankNode]:
    """Keep distinct source nodes distinct even if their keys collide."""
    out: dict[BlankNode, BlankNode] = {}
    used: dict[BlankNode, int] = {}
    for src in sorted(relabel, key=lambda b: (relabel[b].label, b.label)):
        dst = relabel[src]
        n = used.get(dst, 0)
        used[dst] = n + 1
        out[src] = dst if n == 0 else BlankNode(f"{dst.label}_{n}")
    return out


def _apply_relabel(triples: Iterable[Triple], relabel: dict) -> list[Triple]:
    if not relabel:
        return list(triples)
    return [Triple(relabel.get(s, s), p, relabel.get(o, o)) for s, p, o in triples]


def generate_output(
    instance: Graph,
    schema_graph: Graph,
    schema: CubeSchema,
    relations: Iterable[RelationTriple],
    report: EnrichmentReport | None = None,
) -> tuple[Graph, Graph, EnrichmentReport]:
    """Enriched instance = input plus relation triples; enriched schema =
    input schema plus step and DSD annotations, with their blank nodes given
    content-derived labels so output is stable across runs."""
    report = report if report is not None else EnrichmentReport()
    prefixes = _merged_prefixes(instance, schema_graph)
    rels = list(relations)
    rdf_rels = [r.to_rdf() for r in rels]
    new = {t for t in rdf_rels if t not in instance}
    instance_out = Graph(instance.triples.union(rdf_rels), prefixes)

    add, relabel = _schema_annotations(schema)
    schema_out = Graph(_apply_relabel(schema_graph.triples.union(add), relabel), prefixes)

    new_rels = {r for r in rels if r.to_rdf() in new}
    report.totals = count_by_relation(new_rels)
    report.new_triples = len(instance_out) - len(instance)
    for rel in EMITTED:
        report.totals.setdefault(rel.value, 0)
    return instance_out, schema_out, report
