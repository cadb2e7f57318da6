"""WKT reading and writing for POINT, LINESTRING and single-ring POLYGON."""

from __future__ import annotations

import math
import re

from .model import EPS, Geometry, GeometryKind, MalformedWkt, UnsupportedGeometry

_CRS_PREFIX = re.compile(r"\s*<[^>]*>\s*")
_HEAD = re.compile(r"\s*([A-Za-z]+)\s*(.*)\Z", re.S)
_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PAIR = re.compile(rf"\s*({_NUM})\s+({_NUM})\s*\Z")

_KINDS = {
    "POINT": GeometryKind.POINT,
    "LINESTRING": GeometryKind.LINE,
    "LINE": GeometryKind.LINE,
    "POLYGON": GeometryKind.POLYGON,
}
_UNSUPPORTED = {"MULTIPOINT", "MULTILINESTRING", "MULTIPOLYGON", "GEOMETRYCOLLECTION"}


def _coords(body: str) -> list[tuple[float, float]]:
    out = []
    for chunk in body.split(","):
        m = _PAIR.match(chunk)
        if not m:
            raise MalformedWkt(f"bad coordinate pair {chunk.strip()!r}")
        x, y = float(m.group(1)), float(m.group(2))
        if not (math.isfinite(x) and math.isfinite(y)):
            raise MalformedWkt("coordinates must be finite")
        out.append((x, y))
    return out


def _strip_parens(body: str, depth: int) -> str:
    body = body.strip()
    for _ in range(depth):
        if not (body.startswith("(") and body.endswith(")")):
            raise MalformedWkt("unbalanced parentheses")
        body = body[1:-1].strip()
    if "(" in body or ")" in body:
        raise MalformedWkt("unexpected nesting")
    return body


def parse_wkt(text: str) -> Geometry:
    """Parse one WKT value. A leading CRS IRI (GeoSPARQL style) is ignored.

    Unclosed polygon rings are closed and the result carries autoclosed=True.
    """
    if not isinstance(text, str):
        raise MalformedWkt("WKT must be a string")
    m = _CRS_PREFIX.match(text)
    if m:
        text = text[m.end():]
    m = _HEAD.match(text)
    if not m:
        raise MalformedWkt(f"not a WKT value: {text[:40]!r}")
    tag = m.group(1).upper()
    rest = m.group(2).strip()
    if tag in _UNSUPPORTED:
        raise UnsupportedGeometry(f"{tag} is not supported; store parts as separate POLYGON values")
    if tag not in _KINDS:
        raise UnsupportedGeometry(f"unknown geometry tag {tag}")
    kind = _KINDS[tag]
    if rest.upper().startswith("Z") or rest.upper().startswith("M"):
        raise UnsupportedGeometry("only 2D coordinates are supported")
    if rest.upper() == "EMPTY":
        raise MalformedWkt("empty geometries carry no coordinates")
    if kind is GeometryKind.POLYGON:
        inner = rest.strip()
        if not (inner.startswith("(") and inner.endswith(")")):
            raise MalformedWkt("unbalanced parentheses")
        rings = re.findall(r"\(([^()]*)\)", inner[1:-1])
        if len(rings) > 1:
            raise UnsupportedGeometry("polygon holes are not supported")
        coords = _coords(_strip_parens(rest, 2))
        autoclosed = False
        if len(coords) >= 3:
            (x0, y0), (xn, yn) = coords[0], coords[-1]
            if abs(x0 - xn) > EPS or abs(y0 - yn) > EPS:
                coords.append(coords[0])
                autoclosed = True
        return Geometry(kind, tuple(coords), autoclosed)
    coords = _coords(_strip_parens(rest, 1))
    return Geometry(kind, tuple(coords))


def _num(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def format_wkt(g: Geometry) -> str:
    body = ", ".join(f"{_num(x)} {_num(y)}" for x, y in g.coords)
    if g.kind is GeometryKind.POINT:
        return f"POINT ({body})"
    if g.kind is GeometryKind.LINE:
        return f"LINESTRING ({body})"
    return f"POLYGON (({body}))"
