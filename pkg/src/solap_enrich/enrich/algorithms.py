"""Detect and discover topological relations between members and facts.

detect_* evaluate only the pairs the data already links (skos:broader for
hierarchies, level-member links for facts). discover_* evaluate every
candidate pair and can prune with a bounding-box index.
"""

from __future__ import annotations

import multiprocessing
import os
from typing import Iterable, Optional, Sequence

from ..cube import (
    CubeSchema,
    base_levels,
    explicit_rollups,
    fact_members,
    nm_parent_levels,
)
from ..geometry import CallCounter, GeometrySet, get_spatial_values, relate_spatial_values
from ..index import build_index
from ..rdf import Graph, Iri
from ..vocab import QB4O_MEMBER_OF, QB_DATASET, RDF_TYPE, SKOS_BROADER, is_qb4so
from .types import EnrichSettings, RelationTriple, Tally

Member = tuple[Iri, list[GeometrySet]]

_SKIP = {RDF_TYPE, QB4O_MEMBER_OF, SKOS_BROADER, QB_DATASET}


class SpatialCatalog:
    """Parsed geometry sets per subject, computed once per run."""

    def __init__(self, instance: Graph, settings: EnrichSettings, tally: Tally) -> None:
        self.graph = instance
        self.settings = settings
        self.tally = tally
        self._cache: dict[Iri, list[GeometrySet]] = {}

    def sets(self, iri: Iri) -> list[GeometrySet]:
        hit = self._cache.get(iri)
        if hit is None:
            edges = {
                p: objs
                for p, objs in self.graph.predicate_objects(iri).items()
                if p not in _SKIP and not is_qb4so(p)
            }
            hit = get_spatial_values(
                iri, edges, self.settings.datatypes, self.settings.strict, self.tally.issues
            )
            self._cache[iri] = hit
        return hit

    def spatial(self, iris: Iterable[Iri]) -> list[Member]:
        out = []
        for iri in sorted(set(iris), key=lambda i: i.value):
            sets = self.sets(iri)
            if sets:
                out.append((iri, sets))
        return out


def relate_members(
    child: Member, parent: Member, settings: EnrichSettings, counter: CallCounter
) -> list[RelationTriple]:
    """Relate every attribute pairing of two members."""
    out = []
    c_iri, c_sets = child
    p_iri, p_sets = parent
    for cs in c_sets:
        for ps in p_sets:
            rel = relate_spatial_values(cs, ps, settings.mode, settings.dispatch, counter)
            if rel is not None:
                out.append(RelationTriple(c_iri, rel, p_iri))
    return out


# -- bulk pair evaluation ---------------------------------------------------------

_SHARED: dict = {}


def _scan(children: Sequence[Member], parents: Sequence[Member], settings, use_index):
    counter = CallCounter()
    found: set[RelationTriple] = set()
    if use_index:
        index = build_index([(iri, s) for iri, sets in parents for s in sets])
        lookup = dict(parents)
        for child in children:
            hits: set[Iri] = set()
            for s in child[1]:
                hits |= index.query(s.bbox)
            hits.discard(child[0])
            for p in sorted(hits, key=lambda i: i.value):
                found.update(relate_members(child, (p, lookup[p]), settings, counter))
    else:
        for child in children:
            for parent in parents:
                if parent[0] != child[0]:
                    found.update(relate_members(child, parent, settings, counter))
    return found, counter.calls


def _worker(bounds: tuple[int, int]):
    children, parents, settings, use_index = _SHARED["job"]
    return _scan(children[bounds[0]:bounds[1]], parents, settings, use_index)


def evaluate_pairs(
    children: Sequence[Member],
    parents: Sequence[Member],
    settings: EnrichSettings,
    tally: Tally,
    use_index: bool,
) -> set[RelationTriple]:
    """All relations between children and parents, optionally in worker processes.

    Workers see the inputs through fork; each returns its own set and call
    count, and the union is order independent.
    """
    jobs = settings.jobs
    pairs = len(children) * len(parents)
    can_fork = "fork" in multiprocessing.get_all_start_methods()
    if jobs <= 1 or len(children) < 2 * jobs or pairs < 20000 or not can_fork:
        found, calls = _scan(children, parents, settings, use_index)
        tally.calls += calls
        return found
    step = -(-len(children) // jobs)
    bounds = [(i, min(i + step, len(children))) for i in range(0, len(children), step)]
    _SHARED["job"] = (children, parents, settings, use_index)
    try:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=jobs) as pool:
            results = pool.map(_worker, bounds)
    finally:
        _SHARED.pop("job", None)
    found: set[RelationTriple] = set()
    for part, calls in results:
        found |= part
        tally.calls += calls
    return found


def default_jobs() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - non-Linux
        return max(1, os.cpu_count() or 1)


# -- the four algorithms ------------------------------------------------------------


def _ctx(instance, settings, tally, catalog):
    settings = settings or EnrichSettings()
    tally = tally if tally is not None else Tally()
    catalog = catalog or SpatialCatalog(instance, settings, tally)
    return settings, tally, catalog


def detect_spatial_hs(
    instance: Graph,
    settings: Optional[EnrichSettings] = None,
    tally: Optional[Tally] = None,
    catalog: Optional[SpatialCatalog] = None,
) -> set[RelationTriple]:
    """Relations for child/parent pairs linked by skos:broader."""
    settings, tally, catalog = _ctx(instance, settings, tally, catalog)
    counter = CallCounter()
    found: set[RelationTriple] = set()
    for child, parent in explicit_rollups(instance):
        c_sets, p_sets = catalog.sets(child), catalog.sets(parent)
        if c_sets and p_sets:
            found.update(relate_members((child, c_sets), (parent, p_sets), settings, counter))
    tally.calls += counter.calls
    return found


def level_pairs(schema: CubeSchema) -> list[tuple[Iri, Iri]]:
    """Ordered (lower, upper) level pairs per hierarchy.

    A pair qualifies when the upper level is reachable from the lower one
    through hierarchy steps. A hierarchy that declares levels but no steps
    gives no direction, so every ordered pair of its levels is used.
    """
    pairs: set[tuple[Iri, Iri]] = set()
    for h in schema.hierarchies.values():
        if not h.steps:
            pairs.update((a, b) for a in h.levels for b in h.levels if a != b)
            continue
        up: dict[Iri, set] = {}
        for s in h.steps:
            up.setdefault(s.child_level, set()).add(s.parent_level)
        for start in list(up):
            seen: set[Iri] = set()
            frontier = list(up[start])
            while frontier:
                lvl = frontier.pop()
                if lvl in seen or lvl == start:
                    continue
                seen.add(lvl)
                frontier.extend(up.get(lvl, ()))
            pairs.update((start, lvl) for lvl in seen)
    return sorted(pairs, key=lambda p: (p[0].value, p[1].value))


def _members_by_level(instance: Graph) -> dict[Iri, list[Iri]]:
    by_level: dict[Iri, list[Iri]] = {}
    for s, _, lvl in instance.match(None, QB4O_MEMBER_OF, None):
        if isinstance(s, Iri) and isinstance(lvl, Iri):
            by_level.setdefault(lvl, []).append(s)
    return by_level


def discover_spatial_hs(
    schema: CubeSchema,
    instance: Graph,
    settings: Optional[EnrichSettings] = None,
    tally: Optional[Tally] = None,
    catalog: Optional[SpatialCatalog] = None,
) -> set[RelationTriple]:
    """Relations between every member pair of related levels in a hierarchy."""
    settings, tally, catalog = _ctx(instance, settings, tally, catalog)
    use_index = settings.index_for(discover=True) == "rtree"
    by_level = _members_by_level(instance)
    found: set[RelationTriple] = set()
    for lower, upper in level_pairs(schema):
        children = catalog.spatial(by_level.get(lower, ()))
        parents = catalog.spatial(by_level.get(upper, ()))
        if children and parents:
            found |= evaluate_pairs(children, parents, settings, tally, use_index)
    return found


def detect_fact_level(
    instance: Graph,
    settings: Optional[EnrichSettings] = None,
    tally: Optional[Tally] = None,
    catalog: Optional[SpatialCatalog] = None,
) -> set[RelationTriple]:
    """Relations between each fact and the level members it links to."""
    settings, tally, catalog = _ctx(instance, settings, tally, catalog)
    counter = CallCounter()
    found: set[RelationTriple] = set()
    for fact in fact_members(instance):
        f_sets = catalog.sets(fact.iri)
        if not f_sets:
            continue
        for member in fact.linked_members():
            m_sets = catalog.sets(member)
            if m_sets:
                found.update(relate_members((fact.iri, f_sets), (member, m_sets), settings, counter))
    tally.calls += counter.calls
    return found


def fact_target_levels(schema: CubeSchema) -> list[Iri]:
    return sorted(base_levels(schema) | nm_parent_levels(schema), key=lambda i: i.value)


def discover_fact_level(
    schema: CubeSchema,
    instance: Graph,
    settings: Optional[EnrichSettings] = None,
    tally: Optional[Tally] = None,
    catalog: Optional[SpatialCatalog] = None,
) -> set[RelationTriple]:
    """Relations between every fact and every member of base or N:M-parent levels."""
    settings, tally, catalog = _ctx(instance, settings, tally, catalog)
    use_index = settings.index_for(discover=True) == "rtree"
    by_level = _members_by_level(instance)
    targets: set[Iri] = set()
    for lvl in fact_target_levels(schema):
        targets.update(by_level.get(lvl, ()))
    parents = catalog.spatial(targets)
    facts = catalog.spatial(f.iri for f in fact_members(instance))
    if not parents or not facts:
        return set()
    return evaluate_pairs(facts, parents, settings, tally, use_index)
