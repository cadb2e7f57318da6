"""Brute-force reference predicates, independent of the geometry package.

Containment comes from dense sampling: boundary points along every segment
(uniform steps, exact crossing points computed with rationals, and midpoints
between them) plus a 512x512 interior grid over the joint envelope, each point
classified with a vectorised winding-number test. Segment contact comes from
an exhaustive pairwise test in exact rational arithmetic.

Any sample that lands just outside a boundary (within BAND but beyond ON_TOL)
marks the verdict as boundary-ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

ON_TOL = 1e-9
BAND = 1e-6
GRID = 512
STEPS = 32

POINT, LINE, POLYGON = "Point", "Line", "Polygon"
_DIM = {POINT: 0, LINE: 1, POLYGON: 2}


@dataclass
class _Part:
    kind: str
    pts: np.ndarray  # (n, 2) float64

    @property
    def segs(self):
        p = self.pts
        return [(tuple(p[i]), tuple(p[i + 1])) for i in range(len(p) - 1)]

    @property
    def box(self):
        return (self.pts[:, 0].min(), self.pts[:, 1].min(), self.pts[:, 0].max(), self.pts[:, 1].max())


def _parts(gs) -> tuple[str, list[_Part]]:
    kind = gs.kind.value
    return kind, [_Part(kind, np.array(p.coords, dtype=float)) for p in gs.parts]


class _Flag:
    def __init__(self) -> None:
        self.ambiguous = False


# -- exact segment arithmetic ----------------------------------------------------


def _q(p):
    return (Fraction(p[0]), Fraction(p[1]))


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _between(a, b, c) -> bool:
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def exact_segments_touch(s, t) -> bool:
    a, b = _q(s[0]), _q(s[1])
    c, d = _q(t[0]), _q(t[1])
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (
        (o1 == 0 and _between(a, b, c))
        or (o2 == 0 and _between(a, b, d))
        or (o3 == 0 and _between(c, d, a))
        or (o4 == 0 and _between(c, d, b))
    )


def exact_contact_params(s, t) -> list[Fraction]:
    """Parameters along s (0..1) where s meets t, exactly."""
    a, b = _q(s[0]), _q(s[1])
    c, d = _q(t[0]), _q(t[1])
    r = (b[0] - a[0], b[1] - a[1])
    q = (d[0] - c[0], d[1] - c[1])
    rr = r[0] * r[0] + r[1] * r[1]
    if rr == 0:
        return []
    den = r[0] * q[1] - r[1] * q[0]
    w = (c[0] - a[0], c[1] - a[1])
    if den != 0:
        u = (w[0] * q[1] - w[1] * q[0]) / den
        v = (w[0] * r[1] - w[1] * r[0]) / den
        return [u] if 0 <= u <= 1 and 0 <= v <= 1 else []
    if w[0] * r[1] - w[1] * r[0] != 0:
        return []
    tc = (w[0] * r[0] + w[1] * r[1]) / rr
    td = ((d[0] - a[0]) * r[0] + (d[1] - a[1]) * r[1]) / rr
    lo, hi = max(Fraction(0), min(tc, td)), min(Fraction(1), max(tc, td))
    if lo > hi:
        return []
    return [lo] if lo == hi else [lo, hi]


# -- sampling --------------------------------------------------------------------


def _boundary_samples(part: _Part, other: Optional[_Part]):
    """Points along part's segments; returns (points, interior_mask, endpoint_mask)."""
    pts, mid, end = [], [], []
    segs = part.segs
    if part.kind == POINT:
        return part.pts.copy(), np.array([False]), np.array([False])
    closed = bool(np.allclose(part.pts[0], part.pts[-1], atol=0.0, rtol=0.0))
    for si, (p0, p1) in enumerate(segs):
        params = {Fraction(k, STEPS) for k in range(STEPS + 1)}
        cuts = {Fraction(0), Fraction(1)}
        if other is not None and other.kind != POINT:
            for t in other.segs:
                found = exact_contact_params((p0, p1), t)
                params.update(found)
                cuts.update(found)
        order = sorted(params)
        full = []
        for i, u in enumerate(order):
            full.append((u, u in cuts))
            if i + 1 < len(order):
                full.append(((u + order[i + 1]) / 2, False))
        for u, _ in full:
            x = p0[0] + float(u) * (p1[0] - p0[0])
            y = p0[1] + float(u) * (p1[1] - p0[1])
            pts.append((x, y))
            mid.append(0 < u < 1)
            is_end = part.kind == LINE and not closed and (
                (si == 0 and u == 0) or (si == len(segs) - 1 and u == 1)
            )
            end.append(is_end)
    return np.array(pts, dtype=float), np.array(mid), np.array(end)


def _grid(box) -> np.ndarray:
    x0, y0, x1, y1 = box
    w, h = max(x1 - x0, 1e-12), max(y1 - y0, 1e-12)
    xs = x0 + (np.arange(GRID) + 0.5) * (w / GRID)
    ys = y0 + (np.arange(GRID) + 0.5) * (h / GRID)
    gx, gy = np.meshgrid(xs, ys)
    return np.column_stack([gx.ravel(), gy.ravel()])


def _dist_to_segments(pts: np.ndarray, part: _Part) -> np.ndarray:
    if part.kind == POINT:
        return np.hypot(pts[:, 0] - part.pts[0, 0], pts[:, 1] - part.pts[0, 1])
    best = np.full(len(pts), np.inf)
    for (ax, ay), (bx, by) in part.segs:
        dx, dy = bx - ax, by - ay
        l2 = dx * dx + dy * dy
        if l2 == 0:
            d = np.hypot(pts[:, 0] - ax, pts[:, 1] - ay)
        else:
            t = np.clip(((pts[:, 0] - ax) * dx + (pts[:, 1] - ay) * dy) / l2, 0.0, 1.0)
            d = np.hypot(pts[:, 0] - (ax + t * dx), pts[:, 1] - (ay + t * dy))
        best = np.minimum(best, d)
    return best


def _winding(pts: np.ndarray, ring: _Part) -> np.ndarray:
    wn = np.zeros(len(pts), dtype=int)
    px, py = pts[:, 0], pts[:, 1]
    for (ax, ay), (bx, by) in ring.segs:
        cross = (bx - ax) * (py - ay) - (px - ax) * (by - ay)
        up = (ay <= py) & (by > py) & (cross > 0)
        down = (ay > py) & (by <= py) & (cross < 0)
        wn += up.astype(int) - down.astype(int)
    return wn


IN, ON, OUT = 1, 0, -1


def _classify(pts: np.ndarray, part: _Part, flag: _Flag) -> np.ndarray:
    """Per point: IN (polygon interior), ON (on boundary / on the line), OUT."""
    d = _dist_to_segments(pts, part)
    if part.kind == POLYGON:
        inside = _winding(pts, part) != 0
        cls = np.where(d <= ON_TOL, ON, np.where(inside, IN, OUT))
        if np.any((d > ON_TOL) & (d <= BAND)):
            flag.ambiguous = True
        return cls
    cls = np.where(d <= ON_TOL, ON, OUT)
    if np.any((d > ON_TOL) & (d <= BAND)):
        flag.ambiguous = True
    return cls


def _joint_box(a: _Part, b: _Part):
    ba, bb = a.box, b.box
    return (min(ba[0], bb[0]), min(ba[1], bb[1]), max(ba[2], bb[2]), max(ba[3], bb[3]))


def _all_samples(a: _Part, b: _Part):
    pts, mid, end = _boundary_samples(a, b)
    if a.kind == POLYGON:
        grid = _grid(_joint_box(a, b))
        flag = _Flag()
        grid = grid[_classify(grid, a, flag) == IN]
        pts = np.vstack([pts, grid]) if len(grid) else pts
    return pts


# -- part predicates -------------------------------------------------------------


def _within(a: _Part, b: _Part, flag: _Flag) -> bool:
    if b.kind == POINT:
        return a.kind == POINT and bool(np.all(np.abs(a.pts[0] - b.pts[0]) <= ON_TOL))
    pts = _all_samples(a, b)
    return bool(np.all(_classify(pts, b, flag) != OUT))


def _segments_contact(a: _Part, b: _Part) -> bool:
    return any(exact_segments_touch(s, t) for s in a.segs for t in b.segs)


def _intersects(a: _Part, b: _Part, flag: _Flag) -> bool:
    if _DIM[a.kind] > _DIM[b.kind]:
        a, b = b, a
    if a.kind == POINT:
        return bool(_classify(a.pts, b, flag)[0] != OUT)
    if _segments_contact(a, b):
        return True
    if np.any(_classify(_all_samples(a, b), b, flag) != OUT):
        return True
    if b.kind != LINE and np.any(_classify(_all_samples(b, a), a, flag) != OUT):
        return True
    return False


def _equals(a: _Part, b: _Part, flag: _Flag) -> bool:
    if a.kind != b.kind:
        return False
    return _within(a, b, flag) and _within(b, a, flag)


def _overlaps(a: _Part, b: _Part, flag: _Flag) -> bool:
    if a.kind != b.kind or a.kind == POINT:
        return False
    if a.kind == LINE:
        pa, _, _ = _boundary_samples(a, b)
        ca = _classify(pa, b, flag)
        shared = _has_shared_run(a, b)
        pb, _, _ = _boundary_samples(b, a)
        cb = _classify(pb, a, flag)
        return shared and bool(np.any(ca == OUT)) and bool(np.any(cb == OUT))
    sa = _all_samples(a, b)
    sb = _all_samples(b, a)
    ca_in_b = _classify(sa, b, flag)
    cb_in_a = _classify(sb, a, flag)
    interiors_meet = bool(np.any(ca_in_b == IN)) or bool(np.any(cb_in_a == IN))
    return interiors_meet and bool(np.any(ca_in_b == OUT)) and bool(np.any(cb_in_a == OUT))


def _crosses(a: _Part, b: _Part, flag: _Flag) -> bool:
    if a.kind != LINE:
        return False
    if b.kind == POLYGON:
        pts, _, end = _boundary_samples(a, b)
        cls = _classify(pts[~end], b, flag)
        return bool(np.any(cls == IN)) and bool(np.any(cls == OUT))
    if b.kind != LINE:
        return False
    if _has_shared_run(a, b):
        # one-dimensional contact is overlap, not crossing
        return False
    ends = []
    for part in (a, b):
        closed = bool(np.all(part.pts[0] == part.pts[-1]))
        if not closed:
            ends += [_q(part.pts[0]), _q(part.pts[-1])]
    for s in a.segs:
        for t in b.segs:
            for u in exact_contact_params(s, t):
                p0, p1 = _q(s[0]), _q(s[1])
                pt = (p0[0] + u * (p1[0] - p0[0]), p0[1] + u * (p1[1] - p0[1]))
                if pt not in ends:
                    return True
    return False


def _has_shared_run(a: _Part, b: _Part) -> bool:
    for s in a.segs:
        for t in b.segs:
            params = exact_contact_params(s, t)
            if len(params) == 2 and params[0] != params[1]:
                return True
    return False


_TESTS = {
    "equals": _equals,
    "within": _within,
    "intersects": _intersects,
    "overlaps": _overlaps,
    "crosses": _crosses,
}


def _envelope(parts: list[_Part]) -> _Part:
    x0 = min(p.box[0] for p in parts)
    y0 = min(p.box[1] for p in parts)
    x1 = max(p.box[2] for p in parts)
    y1 = max(p.box[3] for p in parts)
    return _Part(POLYGON, np.array([(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)], dtype=float))


@dataclass(frozen=True)
class OracleVerdict:
    value: object
    ambiguous: bool


def oracle_predicate(rel: str, a, b, mode: str = "exact") -> OracleVerdict:
    """Reference truth value of rel(a, b) for two geometry sets.

    Quantifiers follow the engine's contract: equals needs every part pair,
    within needs every part of a inside some part of b (or inside the
    envelope of a multi-part polygon b in bbox mode), the rest need some pair.
    """
    rel = getattr(rel, "value", rel)
    flag = _Flag()
    _, pa = _parts(a)
    kb, pb = _parts(b)
    test = _TESTS[rel]
    if rel == "equals":
        val = all(test(x, y, flag) for x in pa for y in pb)
    elif rel == "within":
        targets = [_envelope(pb)] if mode == "bbox" and kb == POLYGON and len(pb) > 1 else pb
        val = all(any(test(x, y, flag) for y in targets) for x in pa)
    else:
        val = any(test(x, y, flag) for x in pa for y in pb)
    return OracleVerdict(bool(val), flag.ambiguous)


_ORDER = {
    (POINT, POINT): ("equals",),
    (POINT, LINE): ("intersects",),
    (POINT, POLYGON): ("within", "intersects"),
    (LINE, LINE): ("intersects", "overlaps"),
    (LINE, POLYGON): ("within", "intersects"),
    (POLYGON, POLYGON): ("within", "intersects"),
}


def oracle_relate_verdict(child, parent, mode: str = "exact") -> OracleVerdict:
    ck, pk = child.kind.value, parent.kind.value
    if _DIM[ck] > _DIM[pk]:
        return OracleVerdict(None, False)
    ambiguous = False
    for rel in _ORDER[(ck, pk)]:
        v = oracle_predicate(rel, child, parent, mode)
        ambiguous = ambiguous or v.ambiguous
        if v.value:
            return OracleVerdict(rel, ambiguous)
    return OracleVerdict(None, ambiguous)


def oracle_relate(child, parent, mode: str = "exact") -> Optional[str]:
    """Relation name ('within', ...) or None, by the reference method."""
    return oracle_relate_verdict(child, parent, mode).value
