"""Settings, relation triples and the run report shared by the enrichment phases."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional

from ..geometry import DISPATCHES, MODES, IssueLog, TopologicalRelation
from ..rdf import Iri, Triple
from ..vocab import DEFAULT_SPATIAL_DATATYPES

POLYGON_AGGREGATES = ("union", "centroid", "mbr")
INDEX_CHOICES = ("rtree", "none")
EMITTED = (
    TopologicalRelation.EQUALS,
    TopologicalRelation.WITHIN,
    TopologicalRelation.INTERSECTS,
    TopologicalRelation.OVERLAPS,
)

PHASES = (
    "detect_spatial_hs",
    "discover_spatial_hs",
    "detect_fact_level",
    "discover_fact_level",
)


class UnknownLevelComponent(ValueError):
    pass


@dataclass(frozen=True)
class EnrichSettings:
    mode: str = "exact"
    dispatch: str = "algorithm2"
    # None means the per-algorithm default: rtree for discover, none for detect
    index: Optional[str] = None
    polygon_agg: str = "union"
    strict: bool = False
    datatypes: frozenset = DEFAULT_SPATIAL_DATATYPES
    jobs: int = 1
    discover_hs: bool = True
    discover_facts: bool = True

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.dispatch not in DISPATCHES:
            raise ValueError(f"dispatch must be one of {DISPATCHES}")
        if self.index is not None and self.index not in INDEX_CHOICES:
            raise ValueError(f"index must be one of {INDEX_CHOICES}")
        if self.polygon_agg not in POLYGON_AGGREGATES:
            raise ValueError(f"polygon_agg must be one of {POLYGON_AGGREGATES}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    def index_for(self, discover: bool) -> str:
        if self.index is not None:
            return self.index
        return "rtree" if discover else "none"


@dataclass(frozen=True)
class RelationTriple:
    subject: Iri
    relation: TopologicalRelation
    object: Iri

    def key(self) -> tuple[str, str, str]:
        return (self.subject.value, self.relation.value, self.object.value)

    def to_rdf(self) -> Triple:
        return Triple(self.subject, self.relation.predicate, self.object)


def sorted_relations(rels) -> list[RelationTriple]:
    return sorted(rels, key=RelationTriple.key)


def count_by_relation(rels) -> dict[str, int]:
    counts = {r.value: 0 for r in EMITTED}
    for t in rels:
        counts[t.relation.value] = counts.get(t.relation.value, 0) + 1
    return counts


@dataclass
class EnrichmentReport:
    phases: dict = field(default_factory=dict)
    predicate_calls: dict = field(default_factory=dict)
    timings_s: dict = field(default_factory=dict)
    totals: dict = field(default_factory=dict)
    new_triples: int = 0
    skipped: int = 0
    autoclosed: int = 0
    mode: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)

    def record(self, phase: str, rels, calls: int) -> None:
        self.phases[phase] = count_by_relation(rels)
        self.predicate_calls[phase] = calls

    @contextmanager
    def timed(self, phase: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings_s[phase] = round(time.perf_counter() - start, 6)

    def to_json(self) -> dict:
        # per-phase relation counts sit at the top level, keyed by phase name
        return {
            **self.phases,
            "totals": self.totals,
            "new_triples": self.new_triples,
            "predicate_calls": self.predicate_calls,
            "timings_s": self.timings_s,
            "skipped": self.skipped,
            "autoclosed": self.autoclosed,
            "mode": self.mode,
            "inputs": self.inputs,
        }


@dataclass
class Tally:
    """Mutable counters threaded through one enrichment run."""

    issues: IssueLog = field(default_factory=IssueLog)
    calls: int = 0
