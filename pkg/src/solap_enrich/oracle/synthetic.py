"""Synthetic grid cubes with constructively known topology.

Cells are axis-aligned rectangles on an integer grid; partitions are unions of
grid blocks. Every relation the engine should find is derived here with
rectangle arithmetic, never with geometry predicates.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable

import numpy as np

from ..enrich.types import PHASES, RelationTriple, sorted_relations
from ..geometry.model import TopologicalRelation
from ..rdf import BlankNode, Graph, Iri, Literal, Triple
from ..vocab import (
    GEO_SPATIAL_LITERAL,
    GEO_WKT_LITERAL,
    PREFIXES,
    QB4O,
    QB4O_AGGREGATE_FUNCTION,
    QB4O_CARDINALITY,
    QB4O_CHILD_LEVEL,
    QB4O_HAS_HIERARCHY,
    QB4O_HAS_LEVEL,
    QB4O_HIERARCHY,
    QB4O_HIERARCHY_STEP,
    QB4O_IN_DIMENSION,
    QB4O_IN_HIERARCHY,
    QB4O_LEVEL,
    QB4O_LEVEL_MEMBER,
    QB4O_LEVEL_PROPERTY,
    QB4O_MEMBER_OF,
    QB4O_PARENT_LEVEL,
    QB4O_PC_CARDINALITY,
    QB_COMPONENT,
    QB_DATASET,
    QB_DSD,
    QB_MEASURE,
    QB_OBSERVATION,
    QB_STRUCTURE,
    QB,
    RDF_TYPE,
    SKOS_BROADER,
)

XSD_DOUBLE = Iri("http://www.w3.org/2001/XMLSchema#double")
WITHIN = TopologicalRelation.WITHIN
INTERSECTS = TopologicalRelation.INTERSECTS
EQUALS = TopologicalRelation.EQUALS


class InvalidSpec(ValueError):
    pass


@dataclass(frozen=True)
class SyntheticCubeSpec:
    rows: int = 10
    cols: int = 10
    partitions: int = 4
    facts: int = 100
    overlap: float = 0.0
    seed: int = 1
    broader_fraction: float = 0.75
    fact_link_fraction: float = 0.9
    sites: int = 20
    site_match_fraction: float = 0.5
    multipart: bool = False
    namespace: str = "http://example.org/syn/"

    @classmethod
    def from_dict(cls, data: dict) -> "SyntheticCubeSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidSpec(f"unknown spec fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "SyntheticCubeSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"spec is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InvalidSpec("spec must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class GroundTruth:
    phases: dict = field(default_factory=dict)

    def __getitem__(self, phase: str) -> set[RelationTriple]:
        return self.phases[phase]

    def all(self) -> set[RelationTriple]:
        out: set[RelationTriple] = set()
        for rels in self.phases.values():
            out |= rels
        return out

    def to_json(self) -> str:
        rows = [
            {"s": r.subject.value, "rel": r.relation.value, "o": r.object.value}
            for r in sorted_relations(self.all())
        ]
        return json.dumps(rows, indent=1) + "\n"


def load_truth(text: str) -> set[RelationTriple]:
    rows = json.loads(text)
    return {RelationTriple(Iri(r["s"]), TopologicalRelation(r["rel"]), Iri(r["o"])) for r in rows}


Rect = tuple[float, float, float, float]


@dataclass
class Layout:
    """Everything geometric about a generated cube."""

    spec: SyntheticCubeSpec
    xs: list[int]
    ys: list[int]
    cells: dict = field(default_factory=dict)  # (r, c) -> Rect
    partitions: dict = field(default_factory=dict)  # (i, j) -> list[Rect]
    broader: list = field(default_factory=list)  # ((r, c), (i, j))
    sites: list = field(default_factory=list)  # (x, y)
    facts: list = field(default_factory=list)  # (x, y, cell or None, site or None, amount)

    def extent(self, key) -> Rect:
        i, j = key
        return (self.xs[j], self.ys[i], self.xs[j + 1], self.ys[i + 1])

    @property
    def many_to_many(self) -> bool:
        return self.spec.overlap > 0


def _validate(spec: SyntheticCubeSpec) -> tuple[int, int]:
    for name in ("rows", "cols", "partitions"):
        v = getattr(spec, name)
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise InvalidSpec(f"{name} must be an integer >= 1")
    for name in ("facts", "sites"):
        v = getattr(spec, name)
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise InvalidSpec(f"{name} must be an integer >= 0")
    for name in ("overlap", "broader_fraction", "fact_link_fraction", "site_match_fraction"):
        v = getattr(spec, name)
        if not 0.0 <= float(v) <= 1.0:
            raise InvalidSpec(f"{name} must lie in [0, 1]")
    pr = max(d for d in range(1, math.isqrt(spec.partitions) + 1) if spec.partitions % d == 0)
    pc = spec.partitions // pr
    if spec.rows < pr or spec.cols < pc:
        raise InvalidSpec(
            f"a {spec.rows}x{spec.cols} grid cannot hold a {pr}x{pc} partition layout"
        )
    if spec.overlap > 0 and spec.partitions == 1:
        raise InvalidSpec("overlap needs at least two partitions")
    return pr, pc


def _offset(rng: random.Random) -> float:
    # keep clear of the cell edges and of the half-cell line used by stretched cells
    lo = rng.choice((0.05, 0.55))
    return round(lo + rng.random() * 0.4, 4)


def build_layout(spec: SyntheticCubeSpec) -> Layout:
    pr, pc = _validate(spec)
    rng = random.Random(spec.seed)
    xs = [round(j * spec.cols / pc) for j in range(pc + 1)]
    ys = [round(i * spec.rows / pr) for i in range(pr + 1)]
    lay = Layout(spec, xs, ys)

    for i in range(pr):
        for j in range(pc):
            x0, x1 = xs[j], xs[j + 1]
            y0, y1 = ys[i], ys[i + 1]
            if spec.multipart and x1 - x0 >= 3:
                g = x0 + (x1 - x0) // 2
                lay.partitions[(i, j)] = [(x0, y0, g, y1), (g + 1, y0, x1, y1)]
            else:
                lay.partitions[(i, j)] = [(x0, y0, x1, y1)]

    for r in range(spec.rows):
        for c in range(spec.cols):
            lay.cells[(r, c)] = (c, r, c + 1, r + 1)

    n_stretch = round(spec.overlap * spec.rows * spec.cols)
    for r, c in rng.sample(sorted(lay.cells), n_stretch):
        lay.cells[(r, c)] = _stretch(lay.cells[(r, c)], xs[1:-1], ys[1:-1])

    for key in sorted(lay.cells):
        if rng.random() < spec.broader_fraction:
            rect = lay.cells[key]
            for p in sorted(lay.partitions):
                if _area_overlap(rect, lay.extent(p)):
                    lay.broader.append((key, p))

    for _ in range(spec.sites):
        r, c = rng.randrange(spec.rows), rng.randrange(spec.cols)
        lay.sites.append((c + _offset(rng), r + _offset(rng)))

    for _ in range(spec.facts):
        site = rng.randrange(spec.sites) if spec.sites else None
        if site is not None and rng.random() < spec.site_match_fraction:
            x, y = lay.sites[site]
        else:
            r, c = rng.randrange(spec.rows), rng.randrange(spec.cols)
            x, y = c + _offset(rng), r + _offset(rng)
        home = (int(math.floor(y)), int(math.floor(x)))
        cell = home if rng.random() < spec.fact_link_fraction else None
        amount = round(rng.uniform(1, 1000), 2)
        lay.facts.append((x, y, cell, site, amount))
    return lay


def _stretch(rect: Rect, vx: list[int], vy: list[int]) -> Rect:
    """Extend a cell half a unit past its nearest internal partition boundary."""
    x0, y0, x1, y1 = rect
    options = []
    for x in vx:
        if x >= x1:
            options.append((x - x1, 0, 1, x))
        elif x <= x0:
            options.append((x0 - x, 0, 0, x))
    for y in vy:
        if y >= y1:
            options.append((y - y1, 1, 1, y))
        elif y <= y0:
            options.append((y0 - y, 1, 0, y))
    _, axis, forward, at = min(options, key=lambda o: (o[0], o[1], -o[2]))
    if axis == 0:
        return (x0, y0, at + 0.5, y1) if forward else (at - 0.5, y0, x1, y1)
    return (x0, y0, x1, at + 0.5) if forward else (x0, at - 0.5, x1, y1)


def _area_overlap(a: Rect, b: Rect) -> bool:
    return min(a[2], b[2]) > max(a[0], b[0]) and min(a[3], b[3]) > max(a[1], b[1])


def _contains(outer: Rect, inner: Rect) -> bool:
    return outer[0] <= inner[0] and outer[1] <= inner[1] and inner[2] <= outer[2] and inner[3] <= outer[3]


def _touches(a: Rect, b: Rect) -> bool:
    return a[0] <= b[2] and b[0] <= a[2] and a[1] <= b[3] and b[1] <= a[3]


# -- naming and serialisation ----------------------------------------------------


class _Names:
    def __init__(self, ns: str) -> None:
        self.ns = ns

    def __call__(self, local: str) -> Iri:
        return Iri(self.ns + local)

    def cell(self, key) -> Iri:
        return self(f"cell_{key[0]}_{key[1]}")

    def partition(self, key) -> Iri:
        return self(f"partition_{key[0]}_{key[1]}")

    def site(self, k: int) -> Iri:
        return self(f"site_{k}")

    def fact(self, n: int) -> Iri:
        return self(f"obs_{n}")


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def _ring(rect: Rect) -> list[tuple[float, float]]:
    """Counter-clockwise ring through every integer grid point on the edges."""
    x0, y0, x1, y1 = rect

    def stops(a, b):
        inner = [float(k) for k in range(math.floor(a) + 1, math.ceil(b)) if a < k < b]
        return [a] + inner + [b]

    pts = [(x, y0) for x in stops(x0, x1)]
    pts += [(x1, y) for y in stops(y0, y1)[1:]]
    pts += [(x, y1) for x in reversed(stops(x0, x1)[:-1])]
    pts += [(x0, y) for y in reversed(stops(y0, y1)[:-1])]
    return pts


def _polygon_wkt(rect: Rect) -> str:
    return "POLYGON ((" + ", ".join(f"{_num(x)} {_num(y)}" for x, y in _ring(rect)) + "))"


def _point_wkt(x: float, y: float) -> str:
    return f"POINT ({_num(x)} {_num(y)})"


def _prefixes(ns: str) -> dict[str, str]:
    out = dict(PREFIXES)
    out["syn"] = ns
    return out


def _schema_graph(lay: Layout, n: _Names) -> Graph:
    card = Iri(QB4O + ("ManyToMany" if lay.many_to_many else "ManyToOne"))
    many_to_one = Iri(QB4O + "ManyToOne")
    cell, part, site = n("cell"), n("partition"), n("site")
    geo_dim, geo_h = n("geoDim"), n("geography")
    site_dim, site_h = n("siteDim"), n("siteHierarchy")
    dim_type = Iri(QB + "DimensionProperty")
    measure_type = Iri(QB + "MeasureProperty")
    step = BlankNode("step_cell_partition")
    t = [
        Triple(geo_dim, RDF_TYPE, dim_type),
        Triple(geo_dim, QB4O_HAS_HIERARCHY, geo_h),
        Triple(geo_h, RDF_TYPE, QB4O_HIERARCHY),
        Triple(geo_h, QB4O_IN_DIMENSION, geo_dim),
        Triple(geo_h, QB4O_HAS_LEVEL, cell),
        Triple(geo_h, QB4O_HAS_LEVEL, part),
        Triple(step, RDF_TYPE, QB4O_HIERARCHY_STEP),
        Triple(step, QB4O_IN_HIERARCHY, geo_h),
        Triple(step, QB4O_CHILD_LEVEL, cell),
        Triple(step, QB4O_PARENT_LEVEL, part),
        Triple(step, QB4O_PC_CARDINALITY, card),
        Triple(site_dim, RDF_TYPE, dim_type),
        Triple(site_dim, QB4O_HAS_HIERARCHY, site_h),
        Triple(site_h, RDF_TYPE, QB4O_HIERARCHY),
        Triple(site_h, QB4O_IN_DIMENSION, site_dim),
        Triple(site_h, QB4O_HAS_LEVEL, site),
    ]
    for lvl in (cell, part, site):
        t.append(Triple(lvl, RDF_TYPE, QB4O_LEVEL_PROPERTY))
    dsd = n("dsd")
    t.append(Triple(dsd, RDF_TYPE, QB_DSD))
    for name, lvl in (("site", site), ("cell", cell)):
        comp = BlankNode(f"comp_{name}")
        t += [
            Triple(dsd, QB_COMPONENT, comp),
            Triple(comp, QB4O_LEVEL, lvl),
            Triple(comp, QB4O_CARDINALITY, many_to_one),
        ]
    amount, location = n("amount"), n("location")
    for name, m in (("amount", amount), ("location", location)):
        comp = BlankNode(f"comp_{name}")
        t += [
            Triple(dsd, QB_COMPONENT, comp),
            Triple(comp, QB_MEASURE, m),
            Triple(m, RDF_TYPE, measure_type),
        ]
    t.append(Triple(BlankNode("comp_amount"), QB4O_AGGREGATE_FUNCTION, Iri(QB4O + "sum")))
    t.append(Triple(n("dataset"), QB_STRUCTURE, dsd))
    return Graph(t, _prefixes(n.ns))


def _instance_graph(lay: Layout, n: _Names) -> Graph:
    t: list[Triple] = []
    cell_level, part_level, site_level = n("cell"), n("partition"), n("site")
    for key, rect in sorted(lay.cells.items()):
        iri = n.cell(key)
        t += [
            Triple(iri, RDF_TYPE, QB4O_LEVEL_MEMBER),
            Triple(iri, QB4O_MEMBER_OF, cell_level),
            Triple(iri, n("cellName"), Literal(f"cell {key[0]} {key[1]}")),
            Triple(iri, n("cellPolygon"), Literal(_polygon_wkt(rect), GEO_WKT_LITERAL)),
        ]
    for key, parts in sorted(lay.partitions.items()):
        iri = n.partition(key)
        t += [
            Triple(iri, RDF_TYPE, QB4O_LEVEL_MEMBER),
            Triple(iri, QB4O_MEMBER_OF, part_level),
            Triple(iri, n("partitionName"), Literal(f"partition {key[0]} {key[1]}")),
        ]
        for rect in parts:
            t.append(Triple(iri, n("partitionPolygon"), Literal(_polygon_wkt(rect), GEO_SPATIAL_LITERAL)))
    for cell, part in lay.broader:
        t.append(Triple(n.cell(cell), SKOS_BROADER, n.partition(part)))
    for k, (x, y) in enumerate(lay.sites):
        iri = n.site(k)
        t += [
            Triple(iri, RDF_TYPE, QB4O_LEVEL_MEMBER),
            Triple(iri, QB4O_MEMBER_OF, site_level),
            Triple(iri, n("siteLocation"), Literal(_point_wkt(x, y), GEO_SPATIAL_LITERAL)),
        ]
    dataset = n("dataset")
    for idx, (x, y, cell, site, amount) in enumerate(lay.facts):
        iri = n.fact(idx)
        t += [
            Triple(iri, RDF_TYPE, QB_OBSERVATION),
            Triple(iri, QB_DATASET, dataset),
            Triple(iri, n("amount"), Literal(repr(float(amount)), XSD_DOUBLE)),
            Triple(iri, n("location"), Literal(_point_wkt(x, y), GEO_SPATIAL_LITERAL)),
        ]
        if cell is not None:
            t.append(Triple(iri, cell_level, n.cell(cell)))
        if site is not None:
            t.append(Triple(iri, site_level, n.site(site)))
    return Graph(t, _prefixes(n.ns))


# -- constructive ground truth ---------------------------------------------------


def _member_relation(lay: Layout, rect: Rect, part_key, mode: str):
    parts = lay.partitions[part_key]
    targets = [lay.extent(part_key)] if mode == "bbox" and len(parts) > 1 else parts
    if any(_contains(p, rect) for p in targets):
        return WITHIN
    if any(_touches(p, rect) for p in parts):
        return INTERSECTS
    return None


def _point_hits(px: np.ndarray, py: np.ndarray, rects: list[Rect]) -> np.ndarray:
    """(facts, rects) boolean matrix of closed point-in-rectangle containment."""
    r = np.array(rects, dtype=float).reshape(-1, 4)
    return (
        (px[:, None] >= r[None, :, 0])
        & (px[:, None] <= r[None, :, 2])
        & (py[:, None] >= r[None, :, 1])
        & (py[:, None] <= r[None, :, 3])
    )


def ground_truth(spec_or_layout, mode: str = "exact") -> GroundTruth:
    """Per-phase expected relations for one geometry mode."""
    lay = spec_or_layout if isinstance(spec_or_layout, Layout) else build_layout(spec_or_layout)
    n = _Names(lay.spec.namespace)
    phases = {p: set() for p in PHASES}

    for cell, part in lay.broader:
        rel = _member_relation(lay, lay.cells[cell], part, mode)
        if rel is not None:
            phases["detect_spatial_hs"].add(RelationTriple(n.cell(cell), rel, n.partition(part)))
    for cell, rect in lay.cells.items():
        for part in lay.partitions:
            rel = _member_relation(lay, rect, part, mode)
            if rel is not None:
                phases["discover_spatial_hs"].add(RelationTriple(n.cell(cell), rel, n.partition(part)))

    if not lay.facts:
        return GroundTruth(phases)
    px = np.array([f[0] for f in lay.facts])
    py = np.array([f[1] for f in lay.facts])

    for idx, (x, y, cell, site, _) in enumerate(lay.facts):
        f = n.fact(idx)
        if cell is not None and _contains(lay.cells[cell], (x, y, x, y)):
            phases["detect_fact_level"].add(RelationTriple(f, WITHIN, n.cell(cell)))
        if site is not None and lay.sites[site] == (x, y):
            phases["detect_fact_level"].add(RelationTriple(f, EQUALS, n.site(site)))

    discover = phases["discover_fact_level"]
    cell_keys = sorted(lay.cells)
    hits = _point_hits(px, py, [lay.cells[k] for k in cell_keys])
    for fi, ci in zip(*np.nonzero(hits)):
        discover.add(RelationTriple(n.fact(int(fi)), WITHIN, n.cell(cell_keys[ci])))
    if lay.sites:
        sx = np.array([s[0] for s in lay.sites])
        sy = np.array([s[1] for s in lay.sites])
        same = (px[:, None] == sx[None, :]) & (py[:, None] == sy[None, :])
        for fi, si in zip(*np.nonzero(same)):
            discover.add(RelationTriple(n.fact(int(fi)), EQUALS, n.site(int(si))))
    if lay.many_to_many:
        for key, parts in sorted(lay.partitions.items()):
            targets = [lay.extent(key)] if mode == "bbox" and len(parts) > 1 else parts
            inside = _point_hits(px, py, targets).any(axis=1)
            for fi in np.nonzero(inside)[0]:
                discover.add(RelationTriple(n.fact(int(fi)), WITHIN, n.partition(key)))
    return GroundTruth(phases)


def generate_synthetic_cube(
    spec: SyntheticCubeSpec, mode: str = "exact"
) -> tuple[Graph, Graph, GroundTruth]:
    """(schema graph, instance graph, ground truth) for one spec."""
    lay = build_layout(spec)
    n = _Names(spec.namespace)
    return _schema_graph(lay, n), _instance_graph(lay, n), ground_truth(lay, mode)


def relation_counts(rels: Iterable[RelationTriple]) -> dict[str, int]:
    out: dict[str, int] = {}
    for r in rels:
        out[r.relation.value] = out.get(r.relation.value, 0) + 1
    return dict(sorted(out.items()))
