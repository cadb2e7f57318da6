"""Typed views of a QB4OLAP cube: schema structure, level members and facts."""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field, replace
from typing import Optional

from .geometry import TopologicalRelation
from .rdf import BlankNode, Graph, Iri, Term
from .vocab import (
    QB4O,
    QB4O_AGGREGATE_FUNCTION,
    QB4O_CARDINALITY,
    QB4O_CHILD_LEVEL,
    QB4O_HAS_HIERARCHY,
    QB4O_HAS_LEVEL,
    QB4O_HIERARCHY_STEP,
    QB4O_IN_DIMENSION,
    QB4O_IN_HIERARCHY,
    QB4O_LEVEL,
    QB4O_LEVEL_MEMBER,
    QB4O_MEMBER_OF,
    QB4O_PARENT_LEVEL,
    QB4O_PC_CARDINALITY,
    QB4SO_PC_TOPO_REL,
    QB4SO_TOPOLOGICAL_RELATION,
    QB_COMPONENT,
    QB_DATASET,
    QB_DSD,
    QB_MEASURE,
    QB_OBSERVATION,
    RDF_TYPE,
    SKOS_BROADER,
    is_qb4so,
)


class MissingSchemaElement(ValueError):
    pass


class Cardinality(enum.Enum):
    ONE_TO_ONE = "OneToOne"
    ONE_TO_MANY = "OneToMany"
    MANY_TO_ONE = "ManyToOne"
    MANY_TO_MANY = "ManyToMany"

    @property
    def iri(self) -> Iri:
        return Iri(QB4O + self.value)

    @classmethod
    def from_iri(cls, iri: Optional[Term]) -> Optional["Cardinality"]:
        if not isinstance(iri, Iri) or not iri.value.startswith(QB4O):
            return None
        try:
            return cls(iri.value[len(QB4O):])
        except ValueError:
            return None


def _sorted(items):
    return tuple(sorted(items, key=lambda t: t.n3()))


@dataclass(frozen=True)
class HierarchyStepDef:
    hierarchy: Iri
    child_level: Iri
    parent_level: Iri
    cardinality: Optional[Cardinality]
    topo_rels: frozenset = frozenset()
    node: Optional[Term] = None

    def __post_init__(self) -> None:
        if self.child_level == self.parent_level:
            raise MissingSchemaElement(
                f"hierarchy step in {self.hierarchy.value} has the same child and parent level"
            )


@dataclass(frozen=True)
class HierarchyDef:
    iri: Iri
    levels: tuple[Iri, ...]
    steps: tuple[HierarchyStepDef, ...] = ()


@dataclass(frozen=True)
class DimensionDef:
    iri: Iri
    hierarchies: tuple[Iri, ...]


@dataclass(frozen=True)
class LevelComponent:
    level: Iri
    cardinality: Optional[Term] = None
    topo_rels: frozenset = frozenset()
    node: Optional[Term] = None


@dataclass(frozen=True)
class MeasureComponent:
    measure: Iri
    aggregate_functions: tuple[Iri, ...] = ()
    node: Optional[Term] = None


@dataclass(frozen=True)
class FactSchemaDef:
    iri: Iri
    levels: tuple[LevelComponent, ...] = ()
    measures: tuple[MeasureComponent, ...] = ()

    def level_component(self, level: Iri) -> Optional[LevelComponent]:
        for c in self.levels:
            if c.level == level:
                return c
        return None


@dataclass(frozen=True)
class CubeSchema:
    dimensions: dict = field(default_factory=dict)
    hierarchies: dict = field(default_factory=dict)
    dsd: Optional[FactSchemaDef] = None
    extra_dsds: tuple[FactSchemaDef, ...] = ()

    @property
    def steps(self) -> tuple[HierarchyStepDef, ...]:
        out = []
        for h in sorted(self.hierarchies):
            out.extend(self.hierarchies[h].steps)
        return tuple(out)

    @property
    def levels(self) -> frozenset:
        return frozenset(l for h in self.hierarchies.values() for l in h.levels)

    def with_steps(self, steps: list[HierarchyStepDef]) -> "CubeSchema":
        by_h: dict[Iri, list] = {}
        for s in steps:
            by_h.setdefault(s.hierarchy, []).append(s)
        hierarchies = {
            iri: replace(h, steps=tuple(by_h.get(iri, ()))) for iri, h in self.hierarchies.items()
        }
        return replace(self, hierarchies=hierarchies)


@dataclass(frozen=True)
class LevelMember:
    iri: Iri
    level: Iri
    attributes: dict = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class FactMember:
    iri: Iri
    level_links: dict = field(default_factory=dict, compare=False, hash=False)
    measures: dict = field(default_factory=dict, compare=False, hash=False)
    topo_links: frozenset = field(default=frozenset(), compare=False, hash=False)

    def linked_members(self) -> tuple[Iri, ...]:
        return tuple(sorted({m for ms in self.level_links.values() for m in ms}, key=lambda i: i.value))


# -- schema -----------------------------------------------------------------------


def _iris(terms) -> list[Iri]:
    return [t for t in terms if isinstance(t, Iri)]


def _read_dsd(g: Graph, dsd: Iri) -> FactSchemaDef:
    levels, measures = [], []
    for comp in g.objects(dsd, QB_COMPONENT):
        for level in _iris(g.objects(comp, QB4O_LEVEL)):
            rels = frozenset(
                r
                for r in (TopologicalRelation.from_iri(x) for x in _iris(g.objects(comp, QB4SO_TOPOLOGICAL_RELATION)))
                if r is not None
            )
            levels.append(LevelComponent(level, g.value(comp, QB4O_CARDINALITY), rels, comp))
        for measure in _iris(g.objects(comp, QB_MEASURE)):
            aggs = tuple(_iris(g.objects(comp, QB4O_AGGREGATE_FUNCTION)))
            measures.append(MeasureComponent(measure, aggs, comp))
    levels.sort(key=lambda c: c.level.value)
    measures.sort(key=lambda c: c.measure.value)
    return FactSchemaDef(dsd, tuple(levels), tuple(measures))


def extract_schema(schema_graph: Graph) -> CubeSchema:
    """Read dimensions, hierarchies, levels, steps and the fact DSD."""
    g = schema_graph
    dim_hiers: dict[Iri, set] = {}
    for s, _, o in g.match(None, QB4O_HAS_HIERARCHY, None):
        if isinstance(s, Iri) and isinstance(o, Iri):
            dim_hiers.setdefault(s, set()).add(o)
    for s, _, o in g.match(None, QB4O_IN_DIMENSION, None):
        if isinstance(s, Iri) and isinstance(o, Iri):
            dim_hiers.setdefault(o, set()).add(s)

    hier_levels: dict[Iri, set] = {}
    for s, _, o in g.match(None, QB4O_HAS_LEVEL, None):
        if isinstance(s, Iri) and isinstance(o, Iri):
            hier_levels.setdefault(s, set()).add(o)
    for hs in dim_hiers.values():
        for h in hs:
            hier_levels.setdefault(h, set())

    step_nodes = set(g.subjects(RDF_TYPE, QB4O_HIERARCHY_STEP))
    for p in (QB4O_CHILD_LEVEL, QB4O_PARENT_LEVEL, QB4O_IN_HIERARCHY, QB4O_PC_CARDINALITY):
        step_nodes.update(t.subject for t in g.match(None, p, None))

    steps: dict[Iri, list] = {}
    for node in sorted(step_nodes, key=lambda t: t.n3()):
        child = g.value(node, QB4O_CHILD_LEVEL)
        parent = g.value(node, QB4O_PARENT_LEVEL)
        if not isinstance(child, Iri) or not isinstance(parent, Iri):
            raise MissingSchemaElement(f"hierarchy step {node.n3()} lacks a child or parent level")
        hiers = _iris(g.objects(node, QB4O_IN_HIERARCHY))
        if not hiers:
            hiers = [h for h, ls in sorted(hier_levels.items()) if child in ls and parent in ls]
            if len(hiers) != 1:
                raise MissingSchemaElement(f"hierarchy step {node.n3()} has no qb4o:inHierarchy")
        card = Cardinality.from_iri(g.value(node, QB4O_PC_CARDINALITY))
        rels = frozenset(
            r
            for r in (TopologicalRelation.from_iri(x) for x in _iris(g.objects(node, QB4SO_PC_TOPO_REL)))
            if r is not None
        )
        for h in hiers:
            hier_levels.setdefault(h, set()).update((child, parent))
            steps.setdefault(h, []).append(HierarchyStepDef(h, child, parent, card, rels, node))

    hierarchies = {
        h: HierarchyDef(h, tuple(sorted(levels, key=lambda i: i.value)), tuple(steps.get(h, ())))
        for h, levels in hier_levels.items()
    }
    dimensions = {
        d: DimensionDef(d, tuple(sorted(hs, key=lambda i: i.value))) for d, hs in dim_hiers.items()
    }
    dsds = [
        _read_dsd(g, d)
        for d in sorted(set(_iris(g.subjects(RDF_TYPE, QB_DSD))), key=lambda i: i.value)
    ]
    return CubeSchema(
        dimensions=dimensions,
        hierarchies=hierarchies,
        dsd=dsds[0] if dsds else None,
        extra_dsds=tuple(dsds[1:]),
    )


def base_levels(schema: CubeSchema) -> frozenset:
    """Levels that are never a parent within their own hierarchy."""
    out = set()
    for h in schema.hierarchies.values():
        parents = {s.parent_level for s in h.steps}
        levels = set(h.levels) | {s.child_level for s in h.steps}
        out |= levels - parents
    return frozenset(out)


def nm_parent_levels(schema: CubeSchema) -> frozenset:
    return frozenset(
        s.parent_level for s in schema.steps if s.cardinality is Cardinality.MANY_TO_MANY
    )


# -- instances --------------------------------------------------------------------

_MEMBER_STRUCTURAL = {RDF_TYPE, QB4O_MEMBER_OF, SKOS_BROADER}
_FACT_STRUCTURAL = {RDF_TYPE, QB_DATASET}


def _attribute_map(edges: dict, skip: set) -> dict:
    return {
        p: _sorted(objs)
        for p, objs in sorted(edges.items(), key=lambda kv: kv[0].value)
        if p not in skip and not is_qb4so(p)
    }


def level_members(instance_graph: Graph, level: Iri) -> list[LevelMember]:
    """Members asserted qb4o:memberOf the level, sorted by IRI."""
    g = instance_graph
    out = []
    for m in g.subjects(QB4O_MEMBER_OF, level):
        if not isinstance(m, Iri):
            continue
        out.append(LevelMember(m, level, _attribute_map(g.predicate_objects(m), _MEMBER_STRUCTURAL)))
    return out


def all_level_members(instance_graph: Graph) -> dict[Iri, LevelMember]:
    g = instance_graph
    out = {}
    for s, _, level in g.match(None, QB4O_MEMBER_OF, None):
        if isinstance(s, Iri) and isinstance(level, Iri) and s not in out:
            out[s] = LevelMember(s, level, _attribute_map(g.predicate_objects(s), _MEMBER_STRUCTURAL))
    return out


def is_level_member(g: Graph, term: Term) -> bool:
    return isinstance(term, Iri) and (
        g.has(term, RDF_TYPE, QB4O_LEVEL_MEMBER) or g.has(term, QB4O_MEMBER_OF, None)
    )


def member_level(g: Graph, member: Iri) -> Optional[Iri]:
    lvl = g.value(member, QB4O_MEMBER_OF)
    return lvl if isinstance(lvl, Iri) else None


def explicit_rollups(instance_graph: Graph) -> list[tuple[Iri, Iri]]:
    """skos:broader pairs as stated; no transitive closure."""
    return [
        (s, o)
        for s, _, o in instance_graph.match(None, SKOS_BROADER, None)
        if isinstance(s, Iri) and isinstance(o, Iri)
    ]


def fact_members(instance_graph: Graph) -> list[FactMember]:
    """Observations with their level links, measures and existing topology links."""
    g = instance_graph
    out = []
    for f in g.subjects(RDF_TYPE, QB_OBSERVATION):
        if not isinstance(f, Iri):
            continue
        links: dict[Iri, set] = {}
        measures: dict[Iri, list] = {}
        topo = set()
        for p, objs in sorted(g.predicate_objects(f).items(), key=lambda kv: kv[0].value):
            if p in _FACT_STRUCTURAL:
                continue
            if is_qb4so(p):
                rel = TopologicalRelation.from_iri(p)
                if rel is not None:
                    topo.update((rel, o) for o in objs if isinstance(o, Iri))
                continue
            for o in objs:
                if is_level_member(g, o):
                    level = member_level(g, o) or p
                    links.setdefault(level, set()).add(o)
                else:
                    measures.setdefault(p, []).append(o)
        out.append(
            FactMember(
                f,
                {lvl: _sorted(ms) for lvl, ms in sorted(links.items(), key=lambda kv: kv[0].value)},
                {p: _sorted(vs) for p, vs in measures.items()},
                frozenset(topo),
            )
        )
    return out


def split_views(g: Graph) -> tuple[Graph, Graph]:
    """Split a merged graph into (schema, instance) views.

    Instance triples are those about level members or observations; the rest
    is schema.
    """
    instance_subjects = set(g.subjects(RDF_TYPE, QB_OBSERVATION))
    instance_subjects |= set(g.subjects(RDF_TYPE, QB4O_LEVEL_MEMBER))
    instance_subjects |= {t.subject for t in g.match(None, QB4O_MEMBER_OF, None)}
    inst = g.filter(lambda t: t.subject in instance_subjects)
    schema = g.filter(lambda t: t.subject not in instance_subjects)
    return schema, inst


def skolem_label(kind: str, *parts: Iri) -> BlankNode:
    digest = hashlib.sha1("|".join(p.value for p in parts).encode("utf-8")).hexdigest()[:16]
    return BlankNode(f"{kind}_{digest}")
