"""Planar topological predicates on points, lines and single-ring polygons.

Closed-set semantics throughout: boundaries belong to their geometry, so a
point on a polygon edge is within it and two squares sharing an edge
intersect. Coordinates closer than EPS are treated as coincident.

The line/polygon tests work by splitting each segment of one geometry at
every point where it meets the other geometry's boundary. Each resulting
piece lies wholly inside, outside, or on the other geometry, so classifying
its midpoint classifies the whole piece.
"""

from __future__ import annotations

import math

from .model import (
    EPS,
    Geometry,
    GeometryKind,
    GeometrySet,
    TopologicalRelation,
    UnsupportedCombination,
)

POINT, LINE, POLYGON = GeometryKind.POINT, GeometryKind.LINE, GeometryKind.POLYGON
R = TopologicalRelation

SUPPORTED: dict[TopologicalRelation, frozenset] = {
    R.EQUALS: frozenset({(POINT, POINT), (LINE, LINE), (POLYGON, POLYGON)}),
    R.WITHIN: frozenset(
        {(POINT, LINE), (POINT, POLYGON), (LINE, LINE), (LINE, POLYGON), (POLYGON, POLYGON)}
    ),
    R.INTERSECTS: frozenset(
        {
            (POINT, POINT),
            (POINT, LINE),
            (POINT, POLYGON),
            (LINE, LINE),
            (LINE, POLYGON),
            (POLYGON, POLYGON),
        }
    ),
    R.OVERLAPS: frozenset({(LINE, LINE), (POLYGON, POLYGON)}),
    R.CROSSES: frozenset({(LINE, LINE), (LINE, POLYGON)}),
}

INSIDE, BOUNDARY, OUTSIDE = 1, 0, -1


# -- primitives -------------------------------------------------------------------


def _dist2_to_segment(px, py, ax, ay, bx, by) -> float:
    dx, dy = bx - ax, by - ay
    len2 = dx * dx + dy * dy
    if len2 == 0.0:
        ex, ey = px - ax, py - ay
        return ex * ex + ey * ey
    t = ((px - ax) * dx + (py - ay) * dy) / len2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    ex, ey = px - (ax + t * dx), py - (ay + t * dy)
    return ex * ex + ey * ey


_EPS2 = EPS * EPS


def on_segments(px: float, py: float, g: Geometry) -> bool:
    """True when the point lies within EPS of some segment of g."""
    minx, miny, maxx, maxy = g.bbox
    if px < minx - EPS or px > maxx + EPS or py < miny - EPS or py > maxy + EPS:
        return False
    for ax, ay, bx, by in g.segments:
        if (
            min(ax, bx) - EPS <= px <= max(ax, bx) + EPS
            and min(ay, by) - EPS <= py <= max(ay, by) + EPS
            and _dist2_to_segment(px, py, ax, ay, bx, by) <= _EPS2
        ):
            return True
    return False


def locate_in_polygon(px: float, py: float, poly: Geometry) -> int:
    """INSIDE, BOUNDARY or OUTSIDE by boundary test then ray casting."""
    minx, miny, maxx, maxy = poly.bbox
    if px < minx - EPS or px > maxx + EPS or py < miny - EPS or py > maxy + EPS:
        return OUTSIDE
    inside = False
    for ax, ay, bx, by in poly.segments:
        if (
            min(ax, bx) - EPS <= px <= max(ax, bx) + EPS
            and min(ay, by) - EPS <= py <= max(ay, by) + EPS
            and _dist2_to_segment(px, py, ax, ay, bx, by) <= _EPS2
        ):
            return BOUNDARY
        if (ay > py) != (by > py):
            xcross = ax + (py - ay) * (bx - ax) / (by - ay)
            if xcross > px:
                inside = not inside
    return INSIDE if inside else OUTSIDE


def _side(ax, ay, bx, by, px, py) -> int:
    """Sign of p relative to the directed line a->b, zero within EPS."""
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    length = math.hypot(bx - ax, by - ay)
    if length == 0.0:
        return 0
    d = cross / length
    if d > EPS:
        return 1
    if d < -EPS:
        return -1
    return 0


def _on_seg(px, py, ax, ay, bx, by) -> bool:
    return (
        min(ax, bx) - EPS <= px <= max(ax, bx) + EPS
        and min(ay, by) - EPS <= py <= max(ay, by) + EPS
        and _dist2_to_segment(px, py, ax, ay, bx, by) <= _EPS2
    )


def segments_meet(s, t) -> bool:
    ax, ay, bx, by = s
    cx, cy, dx, dy = t
    if (
        max(ax, bx) < min(cx, dx) - EPS
        or max(cx, dx) < min(ax, bx) - EPS
        or max(ay, by) < min(cy, dy) - EPS
        or max(cy, dy) < min(ay, by) - EPS
    ):
        return False
    o1 = _side(ax, ay, bx, by, cx, cy)
    o2 = _side(ax, ay, bx, by, dx, dy)
    o3 = _side(cx, cy, dx, dy, ax, ay)
    o4 = _side(cx, cy, dx, dy, bx, by)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        _on_seg(cx, cy, ax, ay, bx, by)
        or _on_seg(dx, dy, ax, ay, bx, by)
        or _on_seg(ax, ay, cx, cy, dx, dy)
        or _on_seg(bx, by, cx, cy, dx, dy)
    )


def segment_meeting_points(s, t) -> list[tuple[float, float]]:
    """Points where two segments meet: none, one, or the ends of a shared run."""
    ax, ay, bx, by = s
    cx, cy, dx, dy = t
    if (
        max(ax, bx) < min(cx, dx) - EPS
        or max(cx, dx) < min(ax, bx) - EPS
        or max(ay, by) < min(cy, dy) - EPS
        or max(cy, dy) < min(ay, by) - EPS
    ):
        return []
    pts = []
    for px, py, sx0, sy0, sx1, sy1 in (
        (cx, cy, ax, ay, bx, by),
        (dx, dy, ax, ay, bx, by),
        (ax, ay, cx, cy, dx, dy),
        (bx, by, cx, cy, dx, dy),
    ):
        if _on_seg(px, py, sx0, sy0, sx1, sy1):
            pts.append((px, py))
    if not pts:
        o1 = _side(ax, ay, bx, by, cx, cy)
        o2 = _side(ax, ay, bx, by, dx, dy)
        o3 = _side(cx, cy, dx, dy, ax, ay)
        o4 = _side(cx, cy, dx, dy, bx, by)
        if o1 * o2 < 0 and o3 * o4 < 0:
            rx, ry = bx - ax, by - ay
            qx, qy = dx - cx, dy - cy
            den = rx * qy - ry * qx
            if den != 0.0:
                u = ((cx - ax) * qy - (cy - ay) * qx) / den
                pts.append((ax + u * rx, ay + u * ry))
    return pts


def _split_samples(a: Geometry, b: Geometry, with_vertices: bool = True):
    """Vertices of a plus midpoints of a's pieces after cutting at b."""
    out = list(a.coords) if with_vertices else []
    bx0, by0, bx1, by1 = b.bbox
    bsegs = b.segments
    for s in a.segments:
        ax, ay, ex, ey = s
        dx, dy = ex - ax, ey - ay
        len2 = dx * dx + dy * dy
        if len2 == 0.0:
            continue
        ts = [0.0, 1.0]
        if not (
            max(ax, ex) < bx0 - EPS
            or min(ax, ex) > bx1 + EPS
            or max(ay, ey) < by0 - EPS
            or min(ay, ey) > by1 + EPS
        ):
            for t in bsegs:
                for px, py in segment_meeting_points(s, t):
                    u = ((px - ax) * dx + (py - ay) * dy) / len2
                    if 0.0 < u < 1.0:
                        ts.append(u)
        ts.sort()
        gap = EPS / math.sqrt(len2)
        prev = ts[0]
        for u in ts[1:]:
            if u - prev > gap:
                m = (prev + u) / 2.0
                out.append((ax + m * dx, ay + m * dy))
                prev = u
    return out


def _piece_runs(a: Geometry, b: Geometry):
    """(midpoint, length) of each piece of a after cutting at b."""
    bsegs = b.segments
    for s in a.segments:
        ax, ay, ex, ey = s
        dx, dy = ex - ax, ey - ay
        len2 = dx * dx + dy * dy
        if len2 == 0.0:
            continue
        ts = [0.0, 1.0]
        for t in bsegs:
            for px, py in segment_meeting_points(s, t):
                u = ((px - ax) * dx + (py - ay) * dy) / len2
                if 0.0 < u < 1.0:
                    ts.append(u)
        ts.sort()
        length = math.sqrt(len2)
        gap = EPS / length
        prev = ts[0]
        for u in ts[1:]:
            if u - prev > gap:
                m = (prev + u) / 2.0
                yield (ax + m * dx, ay + m * dy), (u - prev) * length
                prev = u


def _bbox_disjoint(a: Geometry, b: Geometry) -> bool:
    ax0, ay0, ax1, ay1 = a.bbox
    bx0, by0, bx1, by1 = b.bbox
    return ax1 < bx0 - EPS or bx1 < ax0 - EPS or ay1 < by0 - EPS or by1 < ay0 - EPS


def _bbox_inside(a: Geometry, b: Geometry) -> bool:
    ax0, ay0, ax1, ay1 = a.bbox
    bx0, by0, bx1, by1 = b.bbox
    return ax0 >= bx0 - EPS and ay0 >= by0 - EPS and ax1 <= bx1 + EPS and ay1 <= by1 + EPS


def _line_boundary(g: Geometry) -> list[tuple[float, float]]:
    first, last = g.coords[0], g.coords[-1]
    if abs(first[0] - last[0]) <= EPS and abs(first[1] - last[1]) <= EPS:
        return []
    return [first, last]


def _near(p, q) -> bool:
    return abs(p[0] - q[0]) <= EPS and abs(p[1] - q[1]) <= EPS


# -- part-level predicates --------------------------------------------------------


def within_part(a: Geometry, b: Geometry) -> bool:
    if not _bbox_inside(a, b):
        return False
    if b.kind is POLYGON:
        if a.kind is POINT:
            x, y = a.coords[0]
            return locate_in_polygon(x, y, b) != OUTSIDE
        for x, y in a.coords:
            if locate_in_polygon(x, y, b) == OUTSIDE:
                return False
        return all(
            locate_in_polygon(x, y, b) != OUTSIDE
            for x, y in _split_samples(a, b, with_vertices=False)
        )
    if b.kind is LINE:
        if a.kind is POINT:
            return on_segments(*a.coords[0], b)
        return all(on_segments(x, y, b) for x, y in _split_samples(a, b))
    return a.kind is POINT and _near(a.coords[0], b.coords[0])


def intersects_part(a: Geometry, b: Geometry) -> bool:
    if _bbox_disjoint(a, b):
        return False
    if a.kind.dim > b.kind.dim:
        a, b = b, a
    if a.kind is POINT:
        x, y = a.coords[0]
        if b.kind is POINT:
            return _near(a.coords[0], b.coords[0])
        if b.kind is LINE:
            return on_segments(x, y, b)
        return locate_in_polygon(x, y, b) != OUTSIDE
    for s in a.segments:
        for t in b.segments:
            if segments_meet(s, t):
                return True
    if b.kind is POLYGON:
        if locate_in_polygon(*a.coords[0], b) != OUTSIDE:
            return True
        if a.kind is POLYGON and locate_in_polygon(*b.coords[0], a) != OUTSIDE:
            return True
    return False


def equals_part(a: Geometry, b: Geometry) -> bool:
    if a.kind is not b.kind:
        return False
    if a.kind is POINT:
        return _near(a.coords[0], b.coords[0])
    return within_part(a, b) and within_part(b, a)


def overlaps_part(a: Geometry, b: Geometry) -> bool:
    if a.kind is not b.kind or a.kind is POINT or _bbox_disjoint(a, b):
        return False
    if a.kind is LINE:
        shared = False
        a_outside = False
        for (x, y), length in _piece_runs(a, b):
            if on_segments(x, y, b):
                if length > EPS:
                    shared = True
            else:
                a_outside = True
        if not (shared and a_outside):
            return False
        return any(not on_segments(x, y, a) for (x, y), _ in _piece_runs(b, a))
    if within_part(a, b) or within_part(b, a):
        return False
    for x, y in _split_samples(a, b):
        if locate_in_polygon(x, y, b) == INSIDE:
            return True
    for x, y in _split_samples(b, a):
        if locate_in_polygon(x, y, a) == INSIDE:
            return True
    return False


def crosses_part(a: Geometry, b: Geometry) -> bool:
    if a.kind is not LINE or _bbox_disjoint(a, b):
        return False
    if b.kind is POLYGON:
        seen_in = seen_out = False
        for x, y in _split_samples(a, b, with_vertices=False):
            where = locate_in_polygon(x, y, b)
            if where == INSIDE:
                seen_in = True
            elif where == OUTSIDE:
                seen_out = True
            if seen_in and seen_out:
                return True
        return False
    if b.kind is not LINE:
        return False
    for (x, y), length in _piece_runs(a, b):
        if length > EPS and on_segments(x, y, b):
            return False
    ends = _line_boundary(a) + _line_boundary(b)
    for s in a.segments:
        for t in b.segments:
            for p in segment_meeting_points(s, t):
                if not any(_near(p, e) for e in ends):
                    return True
    return False


_PART_TESTS = {
    R.EQUALS: equals_part,
    R.WITHIN: within_part,
    R.INTERSECTS: intersects_part,
    R.OVERLAPS: overlaps_part,
    R.CROSSES: crosses_part,
}


# -- set-level evaluation ---------------------------------------------------------


def bounding_box(s: GeometrySet) -> Geometry:
    """Axis-aligned envelope of every part, as a closed five-vertex ring."""
    x0, y0, x1, y1 = s.bbox
    return Geometry(GeometryKind.POLYGON, ((x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)))


class CallCounter:
    """Counts set-level predicate evaluations."""

    __slots__ = ("calls",)

    def __init__(self) -> None:
        self.calls = 0


def is_supported(rel: TopologicalRelation, a_kind: GeometryKind, b_kind: GeometryKind) -> bool:
    return (a_kind, b_kind) in SUPPORTED[rel]


def evaluate_predicate(
    rel: TopologicalRelation,
    a: GeometrySet,
    b: GeometrySet,
    mode: str = "exact",
    counter: CallCounter | None = None,
) -> bool:
    """Evaluate rel(a, b) with the multi-part quantifiers.

    Equals and Within need every part of a to hold; Equals compares against
    every part of b, Within against at least one part of b (or, in bbox mode,
    against the envelope of a multi-part polygon b). Intersects, Overlaps and
    Crosses hold when some part of a relates to some part of b.
    """
    if (a.kind, b.kind) not in SUPPORTED[rel]:
        raise UnsupportedCombination(f"{rel.value} is not defined for {a.kind.value}-{b.kind.value}")
    if mode not in ("exact", "bbox"):
        raise ValueError(f"unknown geometry mode {mode!r}")
    if counter is not None:
        counter.calls += 1
    test = _PART_TESTS[rel]
    if rel is R.EQUALS:
        return all(test(p, q) for p in a.parts for q in b.parts)
    if rel is R.WITHIN:
        targets = b.parts
        if mode == "bbox" and b.kind is POLYGON and len(b.parts) > 1:
            targets = (bounding_box(b),)
        return all(any(test(p, q) for q in targets) for p in a.parts)
    return any(test(p, q) for p in a.parts for q in b.parts)
