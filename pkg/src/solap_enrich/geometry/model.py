"""Geometry value types and the topological relation enumeration."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from ..rdf import Iri
from ..vocab import QB4SO

EPS = 1e-9

Coord = tuple[float, float]
BBox = tuple[float, float, float, float]


class GeometryError(ValueError):
    pass


class MalformedWkt(GeometryError):
    pass


class UnsupportedGeometry(GeometryError):
    pass


class UnsupportedCombination(GeometryError):
    pass


class GeometryKind(enum.Enum):
    POINT = "Point"
    LINE = "Line"
    POLYGON = "Polygon"

    @property
    def dim(self) -> int:
        return _DIMS[self]


_DIMS = {GeometryKind.POINT: 0, GeometryKind.LINE: 1, GeometryKind.POLYGON: 2}


class TopologicalRelation(str, enum.Enum):
    EQUALS = "equals"
    WITHIN = "within"
    INTERSECTS = "intersects"
    OVERLAPS = "overlaps"
    CROSSES = "crosses"

    @property
    def predicate(self) -> Iri:
        """Instance-level property, e.g. qb4so:within."""
        return Iri(QB4SO + self.value)

    @property
    def schema_iri(self) -> Iri:
        """Schema-level class, e.g. qb4so:Within."""
        return Iri(QB4SO + self.value.capitalize())

    @classmethod
    def from_iri(cls, iri: Iri) -> Optional["TopologicalRelation"]:
        if not iri.value.startswith(QB4SO):
            return None
        local = iri.value[len(QB4SO):].lower()
        try:
            return cls(local)
        except ValueError:
            return None


@dataclass(frozen=True)
class Geometry:
    kind: GeometryKind
    coords: tuple[Coord, ...]
    autoclosed: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.coords)
        if self.kind is GeometryKind.POINT and n != 1:
            raise MalformedWkt("a point has exactly one coordinate")
        if self.kind is GeometryKind.LINE and n < 2:
            raise MalformedWkt("a line needs at least two coordinates")
        if self.kind is GeometryKind.POLYGON:
            if n < 4:
                raise MalformedWkt("a polygon ring needs at least four coordinates")
            (x0, y0), (xn, yn) = self.coords[0], self.coords[-1]
            if abs(x0 - xn) > EPS or abs(y0 - yn) > EPS:
                raise MalformedWkt("polygon ring is not closed")
        for x, y in self.coords:
            if x != x or y != y or x in (float("inf"), float("-inf")) or y in (
                float("inf"),
                float("-inf"),
            ):
                raise MalformedWkt("coordinates must be finite")

    @cached_property
    def bbox(self) -> BBox:
        xs = [c[0] for c in self.coords]
        ys = [c[1] for c in self.coords]
        return (min(xs), min(ys), max(xs), max(ys))

    @cached_property
    def segments(self) -> tuple[tuple[float, float, float, float], ...]:
        c = self.coords
        return tuple(
            (c[i][0], c[i][1], c[i + 1][0], c[i + 1][1]) for i in range(len(c) - 1)
        )

    @staticmethod
    def point(x: float, y: float) -> "Geometry":
        return Geometry(GeometryKind.POINT, ((float(x), float(y)),))

    @staticmethod
    def line(coords) -> "Geometry":
        return Geometry(GeometryKind.LINE, tuple((float(x), float(y)) for x, y in coords))

    @staticmethod
    def polygon(coords) -> "Geometry":
        ring = [(float(x), float(y)) for x, y in coords]
        if ring and ring[0] != ring[-1]:
            ring.append(ring[0])
        return Geometry(GeometryKind.POLYGON, tuple(ring))


@dataclass(frozen=True)
class GeometrySet:
    """All geometry values one member holds under one attribute."""

    owner: Iri
    parts: tuple[Geometry, ...]
    attribute: Optional[Iri] = None

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("a geometry set needs at least one part")
        kind = self.parts[0].kind
        if any(p.kind is not kind for p in self.parts):
            raise ValueError("geometry set parts must share one kind")

    @property
    def kind(self) -> GeometryKind:
        return self.parts[0].kind

    @cached_property
    def bbox(self) -> BBox:
        boxes = [p.bbox for p in self.parts]
        return (
            min(b[0] for b in boxes),
            min(b[1] for b in boxes),
            max(b[2] for b in boxes),
            max(b[3] for b in boxes),
        )

    @staticmethod
    def of(*parts: Geometry, owner="urn:x-anon", attribute=None) -> "GeometrySet":
        return GeometrySet(owner if isinstance(owner, Iri) else Iri(owner), tuple(parts), attribute)
