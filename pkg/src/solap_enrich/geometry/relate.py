"""Spatial value extraction and the child/parent relation dispatch."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from ..rdf import Iri, Literal, Term
from ..vocab import DEFAULT_SPATIAL_DATATYPES
from .model import (
    GeometryError,
    GeometryKind,
    GeometrySet,
    TopologicalRelation,
)
from .predicates import CallCounter, evaluate_predicate
from .wkt import parse_wkt

R = TopologicalRelation
POINT, LINE, POLYGON = GeometryKind.POINT, GeometryKind.LINE, GeometryKind.POLYGON

DISPATCHES = ("algorithm2", "listing8")
MODES = ("exact", "bbox")

# (child kind, parent kind) -> ordered (predicate to test, relation to emit)
_ALGORITHM2 = {
    (POINT, POINT): ((R.EQUALS, R.EQUALS),),
    (POINT, LINE): ((R.INTERSECTS, R.INTERSECTS),),
    (POINT, POLYGON): ((R.WITHIN, R.WITHIN), (R.INTERSECTS, R.INTERSECTS)),
    (LINE, LINE): ((R.INTERSECTS, R.INTERSECTS), (R.OVERLAPS, R.OVERLAPS)),
    (LINE, POLYGON): ((R.WITHIN, R.WITHIN), (R.INTERSECTS, R.INTERSECTS)),
    (POLYGON, POLYGON): ((R.WITHIN, R.WITHIN), (R.INTERSECTS, R.INTERSECTS)),
}

# The variant the reference implementation shipped: crosses and overlaps
# stand in for intersects on some kind pairs.
_LISTING8 = {
    (POINT, POINT): ((R.EQUALS, R.EQUALS),),
    (POINT, LINE): ((R.INTERSECTS, R.INTERSECTS),),
    (POINT, POLYGON): ((R.WITHIN, R.WITHIN),),
    (LINE, LINE): ((R.CROSSES, R.INTERSECTS), (R.OVERLAPS, R.OVERLAPS)),
    (LINE, POLYGON): ((R.WITHIN, R.WITHIN), (R.CROSSES, R.OVERLAPS)),
    (POLYGON, POLYGON): ((R.WITHIN, R.WITHIN), (R.OVERLAPS, R.OVERLAPS)),
}

_TABLES = {"algorithm2": _ALGORITHM2, "listing8": _LISTING8}


def geo_type(s: GeometrySet) -> GeometryKind:
    return s.kind


def relate_spatial_values(
    child: GeometrySet,
    parent: GeometrySet,
    mode: str = "exact",
    dispatch: str = "algorithm2",
    counter: Optional[CallCounter] = None,
) -> Optional[TopologicalRelation]:
    """The single relation a child value set holds to a parent value set.

    Returns None when the child has higher dimension than the parent, or when
    no tested predicate holds.
    """
    if dispatch not in _TABLES:
        raise ValueError(f"unknown dispatch {dispatch!r}")
    if child.kind.dim > parent.kind.dim:
        return None
    for test, emit in _TABLES[dispatch][(child.kind, parent.kind)]:
        if evaluate_predicate(test, child, parent, mode, counter):
            return emit
    return None


@dataclass
class SkippedValue:
    owner: Iri
    attribute: Iri
    lexical: str
    reason: str


@dataclass
class IssueLog:
    """Geometry values that were skipped or repaired while reading."""

    skipped: list[SkippedValue] = field(default_factory=list)
    autoclosed: list[SkippedValue] = field(default_factory=list)

    def skipped_count(self) -> int:
        return len({(s.owner, s.attribute, s.lexical) for s in self.skipped})


class SpatialValueError(GeometryError):
    def __init__(self, owner: Iri, attribute: Iri, cause: Exception) -> None:
        super().__init__(f"{owner.value} {attribute.value}: {cause}")
        self.owner = owner
        self.attribute = attribute
        self.cause = cause


def get_spatial_values(
    owner: Iri,
    values: Mapping[Iri, Sequence[Term]],
    datatypes: Iterable[Iri] = DEFAULT_SPATIAL_DATATYPES,
    strict: bool = False,
    issues: Optional[IssueLog] = None,
) -> list[GeometrySet]:
    """Group the spatial literals of one member into geometry sets.

    One set per attribute predicate. If a predicate mixes kinds, each kind
    gets its own set so parts stay homogeneous. Literals with a spatial
    datatype that fail to parse are skipped and logged, or raised when strict.
    """
    allowed = frozenset(datatypes)
    out: list[GeometrySet] = []
    for attr in sorted(values, key=lambda i: i.value):
        by_kind: dict[GeometryKind, list] = {}
        for term in sorted(values[attr], key=lambda t: t.n3()):
            if not isinstance(term, Literal) or term.datatype not in allowed:
                continue
            try:
                geom = parse_wkt(term.lexical)
            except GeometryError as exc:
                if strict:
                    raise SpatialValueError(owner, attr, exc) from exc
                if issues is not None:
                    issues.skipped.append(SkippedValue(owner, attr, term.lexical, str(exc)))
                continue
            if geom.autoclosed and issues is not None:
                issues.autoclosed.append(SkippedValue(owner, attr, term.lexical, "ring closed"))
            by_kind.setdefault(geom.kind, []).append(geom)
        for kind in (POINT, LINE, POLYGON):
            if kind in by_kind:
                out.append(GeometrySet(owner, tuple(by_kind[kind]), attr))
    return out
