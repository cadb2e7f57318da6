"""WKT geometry, topological predicates and the relation dispatch."""

from .model import (
    EPS,
    Geometry,
    GeometryError,
    GeometryKind,
    GeometrySet,
    MalformedWkt,
    TopologicalRelation,
    UnsupportedCombination,
    UnsupportedGeometry,
)
from .predicates import (
    SUPPORTED,
    CallCounter,
    bounding_box,
    evaluate_predicate,
    is_supported,
)
from .relate import (
    DISPATCHES,
    MODES,
    IssueLog,
    SkippedValue,
    SpatialValueError,
    geo_type,
    get_spatial_values,
    relate_spatial_values,
)
from .wkt import format_wkt, parse_wkt

__all__ = [
    "DISPATCHES",
    "EPS",
    "MODES",
    "SUPPORTED",
    "CallCounter",
    "Geometry",
    "GeometryError",
    "GeometryKind",
    "GeometrySet",
    "IssueLog",
    "MalformedWkt",
    "SkippedValue",
    "SpatialValueError",
    "TopologicalRelation",
    "UnsupportedCombination",
    "UnsupportedGeometry",
    "bounding_box",
    "evaluate_predicate",
    "format_wkt",
    "geo_type",
    "get_spatial_values",
    "is_supported",
    "parse_wkt",
    "relate_spatial_values",
]
